mod common;

use bvr_core::engine::{run_episode, run_episodes, Env, Event, LogLine, PolicyKind, TerminalCause, VecEnv};
use bvr_core::{Error, PilotAction, ScenarioKind, SimConfig};
use common::env;

#[test]
fn same_seed_same_start() {
    for kind in ScenarioKind::ALL {
        assert_eq!(env(kind).reset(42), env(kind).reset(42));
    }
}

#[test]
fn different_seeds_move_the_launcher() {
    let mut e = env(ScenarioKind::Evade1);
    let a = e.reset(1).raw[8];
    let b = e.reset(2).raw[8];
    assert_ne!(a, b);
}

#[test]
fn dogfight_start_ignores_the_seed() {
    let mut e = env(ScenarioKind::Dogfight);
    e.reset(1);
    let a = e.world().clone();
    e.reset(77);
    assert_eq!(&a, e.world());
}

#[test]
fn dogfight_step_is_five_hundred_ticks() {
    let mut e = env(ScenarioKind::Dogfight);
    e.reset(0);
    let t = e.step(&PilotAction::new(0.0, 10_000.0)).unwrap();
    assert_eq!(t.info.ticks, 500);
    assert_eq!(e.world().tick, 500);
    assert!((e.world().time - 10.0).abs() < 1e-12);
    assert_eq!(t.reward, 0.0);
}

#[test]
fn out_of_range_altitude_is_clamped_and_reported() {
    let mut e = env(ScenarioKind::Evade1);
    e.reset(0);
    let t = e.step(&PilotAction::new(10.0, -500.0)).unwrap();
    assert!(t.info.action_clamped);
    assert_eq!(e.world().blue.setpoints.altitude, 0.0);
    let t = e.step(&PilotAction::new(10.0, 5000.0)).unwrap();
    assert!(!t.info.action_clamped);
}

#[test]
fn stepping_a_finished_episode_fails() {
    let mut e = env(ScenarioKind::Evade1);
    e.reset(0);
    while !e.step(&PilotAction::new(0.0, 8000.0)).unwrap().done {}
    let cause = e.world().terminal;
    assert!(matches!(e.step(&PilotAction::new(0.0, 8000.0)), Err(Error::EpisodeFinished)));
    assert_eq!(e.world().terminal, cause, "terminal flag never clears");
}

#[test]
fn evasion_ends_between_decisions() {
    // Terminal checks run every physics tick, so endings are not quantized
    // to the decision interval.
    let cfg = SimConfig::for_kind(ScenarioKind::Evade1);
    let off_grid = (0..20)
        .filter(|&seed| {
            let o = run_episode(&cfg, &mut *PolicyKind::Straight.build(seed).unwrap(), seed, None).unwrap();
            (o.summary.duration / 1.0).fract().abs() > 1e-9
        })
        .count();
    assert!(off_grid >= 15, "{off_grid}");
}

#[test]
fn rewards_are_zero_until_the_end() {
    for kind in ScenarioKind::ALL {
        let mut e = env(kind);
        e.reset(3);
        let mut rewards = vec![];
        loop {
            let t = e.step(&PilotAction::new(200.0, 7000.0)).unwrap();
            rewards.push(t.reward);
            if t.done {
                break;
            }
        }
        let (last, rest) = rewards.split_last().unwrap();
        assert!(rest.iter().all(|r| *r == 0.0), "{kind}");
        if kind == ScenarioKind::Dogfight {
            assert!(*last == 1.0 || *last == -1.0);
        }
    }
}

#[test]
fn footer_matches_the_episode() {
    for kind in ScenarioKind::ALL {
        let cfg = SimConfig::for_kind(kind);
        for seed in 0..3 {
            let o = run_episode(&cfg, &mut *PolicyKind::DiveTurn.build(seed).unwrap(), seed, Some(5)).unwrap();
            let log = o.log.unwrap();
            let f = log.footer().unwrap();
            assert_eq!(f.total_reward, f.rewards.iter().sum::<f64>());
            assert_eq!(f.total_reward, o.summary.total_reward);
            assert_eq!(f.steps as usize, f.rewards.len());
            assert!(log.digest_matches().unwrap());
            match kind {
                ScenarioKind::Evade1 => assert_eq!(f.total_reward, f.miss_distances_km[0]),
                ScenarioKind::Evade2 => {
                    assert_eq!(f.total_reward, f.miss_distances_km[0].min(f.miss_distances_km[1]))
                }
                ScenarioKind::Dogfight => assert!(f.total_reward.abs() == 1.0),
            }
        }
    }
}

#[test]
fn logged_clock_is_an_arithmetic_sequence() {
    let cfg = SimConfig::for_kind(ScenarioKind::Evade2);
    let o = run_episode(&cfg, &mut *PolicyKind::Random.build(9).unwrap(), 9, Some(1)).unwrap();
    let ticks: Vec<_> = o.log.unwrap().ticks().map(Result::unwrap).collect();
    for (i, t) in ticks.iter().enumerate() {
        assert_eq!(t.tick, i as u64);
        assert_eq!(t.time, i as f64 * 0.02);
    }
    assert!(ticks.len() > 100);
}

#[test]
fn exactly_one_cause_per_episode() {
    let cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    for policy in [PolicyKind::Straight, PolicyKind::Bt, PolicyKind::Random] {
        let o = run_episode(&cfg, &mut *policy.build(2).unwrap(), 2, Some(50)).unwrap();
        let cause = o.summary.outcome.unwrap();
        assert!(cause.dogfight_result().is_some());
        let footer = o.log.unwrap().footer().unwrap();
        assert_eq!(footer.outcome, Some(cause));
    }
}

#[test]
fn bt_versus_bt_is_decided_by_the_tie_break() {
    // Both sides fly the same tree at the same cadence from a mirrored
    // start; the mirrored shots land on the same tick and the tie-break
    // gives the loss to the agent.
    let mut cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    cfg.scenario.decision_interval = Some(1.0);
    cfg.scenario.auto_launch = false;
    let o = run_episode(&cfg, &mut *PolicyKind::Bt.build(0).unwrap(), 0, Some(100)).unwrap();
    assert_eq!(o.summary.outcome, Some(TerminalCause::BlueKilled));
    assert_eq!(o.summary.shots.blue, o.summary.shots.red);
    let log = o.log.unwrap();
    let last = log.ticks().last().unwrap().unwrap();
    let hits: Vec<_> = last.events.iter().filter(|e| matches!(e, Event::Hit { .. })).collect();
    assert_eq!(hits.len(), 2, "both aircraft hit on the final tick: {:?}", last.events);
    assert!(last.aircraft.iter().all(|a| !a.alive));
}

#[test]
fn red_ticks_at_one_hertz() {
    let mut e = env(ScenarioKind::Dogfight);
    e.reset(0);
    e.step(&PilotAction::new(0.0, 10_000.0)).unwrap();
    // Red pursues at cruise altitude with full throttle from the first tick.
    let d = e.last_red_decision().unwrap();
    assert_eq!(d.setpoints.altitude, 10_000.0);
    assert_eq!(d.setpoints.throttle, 1.0);
}

#[test]
fn launch_events_are_logged_with_the_tick_they_happen() {
    let cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    let o = run_episode(&cfg, &mut *PolicyKind::Straight.build(0).unwrap(), 0, Some(1000)).unwrap();
    let log = o.log.unwrap();
    let mut launches = 0;
    for l in &log.lines {
        if let LogLine::Tick(t) = LogLine::parse(l).unwrap() {
            for e in &t.events {
                if let Event::Launch { missile, .. } = e {
                    launches += 1;
                    assert!(t.missiles.iter().any(|m| m.id == *missile));
                }
            }
        }
    }
    assert_eq!(launches as u32, o.summary.shots.blue + o.summary.shots.red);
}

#[test]
fn parallel_runs_match_sequential_runs() {
    let cfg = SimConfig::for_kind(ScenarioKind::Evade2);
    let seeds: Vec<u64> = (100..108).collect();
    let par = run_episodes(&cfg, PolicyKind::DiveTurn, &seeds, 4, Some(25)).unwrap();
    for (seed, r) in seeds.iter().zip(par) {
        let r = r.unwrap();
        let s = run_episode(&cfg, &mut *PolicyKind::DiveTurn.build(*seed).unwrap(), *seed, Some(25)).unwrap();
        assert_eq!(r.summary, s.summary);
        assert_eq!(r.log, s.log);
    }
}

#[test]
fn vec_env_steps_worlds_independently() {
    let cfg = SimConfig::for_kind(ScenarioKind::Evade1);
    let mut v = VecEnv::new(&cfg, 4, 2).unwrap();
    let obs = v.reset(&[1, 2, 3, 4]).unwrap();
    let actions: Vec<_> = (0..4).map(|i| PilotAction::new(90.0 * i as f64, 6000.0)).collect();
    let ts = v.step(&actions).unwrap();
    for (i, t) in ts.into_iter().enumerate() {
        let mut e = Env::new(cfg.clone()).unwrap();
        assert_eq!(e.reset(i as u64 + 1), obs[i]);
        assert_eq!(e.step(&actions[i]).unwrap(), t.unwrap());
    }
    assert!(v.step(&actions[..2]).is_err());
}

#[test]
fn config_round_trips_through_toml() {
    let mut cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    cfg.scenario.decision_interval = Some(5.0);
    cfg.red.threat_window = 90.0;
    let text = cfg.to_toml().unwrap();
    assert_eq!(SimConfig::from_toml(&text).unwrap(), cfg);
    assert!(SimConfig::from_toml("[scenario]\nkind = \"evade9\"\n").is_err());
    assert!(SimConfig::from_toml("[scenario]\nbogus = 1\n").is_err());
    assert!(matches!(SimConfig::from_toml("config_version = 99\n"), Err(Error::VersionMismatch { .. })));
    let partial = SimConfig::from_toml("[scenario]\nkind = \"evade2\"\n").unwrap();
    assert_eq!(partial, SimConfig::for_kind(ScenarioKind::Evade2));
}

#[test]
fn env_spec_describes_the_spaces() {
    let spec = env(ScenarioKind::Dogfight).spec();
    assert_eq!(spec.observation_shape, [11]);
    assert_eq!(spec.decision_interval, 10.0);
    assert_eq!(spec.action.len(), 2);
    let json = serde_json::to_value(&spec).unwrap();
    assert_eq!(json["observation"][1]["name"], "nu_BR");
    let mut cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    cfg.scenario.auto_launch = false;
    cfg.scenario.throttle_fixed = false;
    let spec = Env::new(cfg).unwrap().spec();
    let names: Vec<_> = spec.action.iter().map(|a| a.name).collect();
    assert_eq!(names, ["heading_deg", "altitude", "throttle", "launch"]);
}

#[test]
fn full_dogfight_is_fast() {
    let cfg = SimConfig::for_kind(ScenarioKind::Dogfight);
    let t = std::time::Instant::now();
    let o = run_episode(&cfg, &mut *PolicyKind::Random.build(0).unwrap(), 0, None).unwrap();
    assert!(o.summary.duration > 0.0);
    // Generous bound: debug builds are far slower than release.
    assert!(t.elapsed().as_secs_f64() < 30.0);
}
