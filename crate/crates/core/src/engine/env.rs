use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::log::{EpisodeLog, Header, Recorder, Shots, LOG_FORMAT, LOG_VERSION};
use super::world::{AircraftUnit, Event, MissileUnit, TerminalCause, World, BLUE_ID, FIRST_MISSILE_ID, RED_ID};
use crate::bt::{RedDecision, RedPolicy};
use crate::error::{Error, Result};
use crate::missile::{MissileRack, Outcome};
use crate::rng::RNG_NAME;
use crate::scenario::{
    auto_launch_check, build_observation, observation_layout, sample_initial_conditions, step_reward,
    InitialConditions, ObsField, Observation, PilotAction, ScenarioKind,
};
use crate::unit::{Side, UnitId};
use crate::{AircraftStateF64, AirframeF64, AutopilotSetpointsF64, MissileF64};

/// Extra facts returned with every transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub cause: Option<TerminalCause>,
    /// Every missile in launch order, km.
    pub miss_distances_km: Vec<f64>,
    pub shots: Shots,
    /// The action had to be clamped into range.
    pub action_clamped: bool,
    /// Physics ticks this step ran.
    pub ticks: u64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionField {
    pub name: &'static str,
    pub unit: &'static str,
    pub low: f64,
    pub high: f64,
    /// Absent from the action unless the configuration asks for it.
    pub optional: bool,
}

/// Machine-readable description of a scenario's spaces and cadence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvSpec {
    pub scenario: ScenarioKind,
    pub dt: f64,
    pub decision_interval: f64,
    pub episode_cap: f64,
    pub observation: Vec<ObsField>,
    pub observation_shape: [usize; 1],
    pub normalized_bounds: [f64; 2],
    pub action: Vec<ActionField>,
    pub throttle_fixed: bool,
    pub auto_launch: bool,
}

/// One simulated world behind a reset/step interface.
#[derive(Debug, Clone)]
pub struct Env {
    config: SimConfig,
    airframe: AirframeF64,
    missile: MissileF64,
    red_policy: RedPolicy,
    world: World,
    seed: u64,
    steps: u64,
    recorder: Option<Recorder>,
    log_stride: Option<u64>,
    policy_name: String,
    last_red: Option<RedDecision>,
    /// Agent launch requested for the next tick.
    blue_fire: bool,
}

impl Env {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let red_policy = RedPolicy::new(config.red.clone())?;
        let seed = config.scenario.seed;
        let mut env = Self {
            airframe: AirframeF64::new(config.airframe),
            missile: MissileF64::new(config.missile),
            red_policy,
            world: placeholder_world(config.scenario.kind),
            seed,
            steps: 0,
            recorder: None,
            log_stride: None,
            policy_name: String::new(),
            last_red: None,
            blue_fire: false,
            config,
        };
        env.reset(seed);
        Ok(env)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn kind(&self) -> ScenarioKind {
        self.config.scenario.kind
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn airframe(&self) -> &AirframeF64 {
        &self.airframe
    }

    pub fn red_policy(&self) -> &RedPolicy {
        &self.red_policy
    }

    /// The adversary's most recent decision, if any.
    pub fn last_red_decision(&self) -> Option<&RedDecision> {
        self.last_red.as_ref()
    }

    /// Starts recording on every subsequent reset. `stride` thins tick
    /// records; ticks with events and the final tick are always kept.
    pub fn enable_log(&mut self, stride: u64, policy_name: &str) {
        self.log_stride = Some(stride.max(1));
        self.policy_name = policy_name.to_owned();
    }

    pub fn spec(&self) -> EnvSpec {
        let sc = &self.config.scenario;
        let layout = observation_layout(sc.kind);
        let mut action = vec![
            ActionField { name: "heading_deg", unit: "deg", low: 0.0, high: 360.0, optional: false },
            ActionField { name: "altitude", unit: "m", low: 0.0, high: self.airframe.params.ceiling, optional: false },
        ];
        if !sc.throttle_fixed {
            action.push(ActionField { name: "throttle", unit: "1", low: 0.0, high: 1.0, optional: true });
        }
        if sc.kind == ScenarioKind::Dogfight && !sc.auto_launch {
            action.push(ActionField { name: "launch", unit: "bool", low: 0.0, high: 1.0, optional: true });
        }
        EnvSpec {
            scenario: sc.kind,
            dt: sc.dt,
            decision_interval: sc.decision_interval(),
            episode_cap: sc.episode_cap(),
            observation_shape: [layout.len()],
            observation: layout,
            normalized_bounds: [-1.0, 1.0],
            action,
            throttle_fixed: sc.throttle_fixed,
            auto_launch: sc.auto_launch,
        }
    }

    /// Builds a fresh world for `seed`; evasion threats launch immediately.
    pub fn reset(&mut self, seed: u64) -> Observation {
        let ic = sample_initial_conditions(seed, &self.config.scenario, self.airframe.params.mass);
        self.start(seed, ic, false)
    }

    /// Starts from a hand-made geometry instead of sampling one. The
    /// geometry is written to the log header so the episode still replays.
    pub fn reset_from(&mut self, seed: u64, ic: InitialConditions) -> Result<Observation> {
        let kind = self.kind();
        if ic.launches.len() != kind.threat_count() || ic.red.is_some() != (kind == ScenarioKind::Dogfight) {
            return Err(Error::InvalidConfig(format!("initial conditions do not fit scenario {kind}")));
        }
        Ok(self.start(seed, ic, true))
    }

    fn start(&mut self, seed: u64, ic: InitialConditions, custom: bool) -> Observation {
        let sc = &self.config.scenario;
        let unit = |id, side, state: AircraftStateF64, missiles| AircraftUnit {
            id,
            side,
            state,
            setpoints: AutopilotSetpointsF64::hold(&state, 1.0),
            rack: MissileRack::new(missiles),
            shots_fired: 0,
        };
        let loadout = if sc.kind == ScenarioKind::Dogfight { sc.missiles_per_aircraft } else { 0 };
        let mut world = World {
            kind: sc.kind,
            tick: 0,
            time: 0.0,
            blue: unit(BLUE_ID, Side::Blue, ic.blue, loadout),
            red: ic.red.map(|r| unit(RED_ID, Side::Red, r, loadout)),
            missiles: vec![],
            terminal: None,
            events: vec![],
        };
        for (i, l) in ic.launches.iter().enumerate() {
            let heading = crate::angle::bearing(&l.position, &ic.blue.position).unwrap_or(0.0);
            let shooter = AircraftStateF64::level(l.position, heading, l.speed, 1.0, self.airframe.params.mass);
            let state = self
                .missile
                .launch(&shooter, &ic.blue, BLUE_ID, &mut MissileRack::new(1))
                .expect("a fresh rack has one missile");
            let id = UnitId(FIRST_MISSILE_ID + i as u32);
            world.missiles.push(MissileUnit { id, shooter: None, side: Side::Red, launch_time: 0.0, state });
            world.events.push(Event::Launch { missile: id, shooter: None, target: BLUE_ID });
        }
        self.world = world;
        self.seed = seed;
        self.steps = 0;
        self.last_red = None;
        self.blue_fire = false;
        self.recorder = self.log_stride.map(|stride| {
            let mut r = Recorder::new(Header {
                format: LOG_FORMAT.into(),
                version: LOG_VERSION,
                config_version: self.config.config_version,
                code_version: env!("CARGO_PKG_VERSION").into(),
                rng: RNG_NAME.into(),
                seed,
                policy: self.policy_name.clone(),
                log_stride: stride,
                config: self.config.clone(),
                initial: custom.then(|| ic.clone()),
            });
            r.tick(&self.world);
            r
        });
        build_observation(&self.world)
    }

    pub fn observation(&self) -> Observation {
        build_observation(&self.world)
    }

    /// Applies one agent decision and runs physics until the next decision
    /// or the end of the episode, whichever comes first.
    pub fn step(&mut self, action: &PilotAction) -> Result<Transition> {
        if self.world.is_terminal() {
            return Err(Error::EpisodeFinished);
        }
        let (setpoints, clamped) = action.decode(&self.config.scenario, self.airframe.params.ceiling)?;
        if let Some(r) = self.recorder.as_mut() {
            r.action(self.steps, action);
        }
        self.world.blue.setpoints = setpoints;
        if self.kind() == ScenarioKind::Dogfight {
            let red_state = self.world.red.as_ref().map(|r| r.state);
            let fire = match (self.config.scenario.auto_launch, red_state) {
                (true, Some(red)) => auto_launch_check(&self.world.blue, &red, &self.config.scenario),
                (false, Some(_)) => action.launch.unwrap_or(false),
                _ => false,
            };
            self.blue_fire = fire;
        }
        let start = self.world.tick;
        for _ in 0..self.config.scenario.decision_ticks() {
            self.physics_tick();
            if self.world.is_terminal() {
                break;
            }
        }
        self.steps += 1;
        let reward = step_reward(&self.world);
        if let Some(r) = self.recorder.as_mut() {
            r.reward(reward);
        }
        Ok(Transition {
            observation: build_observation(&self.world),
            reward,
            done: self.world.is_terminal(),
            info: StepInfo {
                cause: self.world.terminal,
                miss_distances_km: self.world.missiles.iter().map(|m| m.state.miss_distance / 1000.0).collect(),
                shots: self.shots(),
                action_clamped: clamped,
                ticks: self.world.tick - start,
                time: self.world.time,
            },
        })
    }

    pub fn shots(&self) -> Shots {
        Shots { blue: self.world.blue.shots_fired, red: self.world.red.as_ref().map_or(0, |r| r.shots_fired) }
    }

    /// Ends recording and returns the log, if one was being kept.
    pub fn take_log(&mut self) -> Option<EpisodeLog> {
        self.recorder.take().map(|r| r.finish(&self.world))
    }

    /// Launches one of `side`'s missiles at its opponent. Nothing happens
    /// without a missile on the rail or a living opponent.
    fn fire(&mut self, side: Side) -> Option<Event> {
        let (target_id, target) =
            self.world.aircraft(side.opponent()).filter(|a| a.state.alive).map(|a| (a.id, a.state))?;
        let id = UnitId(FIRST_MISSILE_ID + self.world.missiles.len() as u32);
        let time = self.world.time;
        let shooter = self.world.aircraft_mut(side).expect("shooter exists");
        if !shooter.state.alive {
            return None;
        }
        let state = self.missile.launch(&shooter.state, &target, target_id, &mut shooter.rack).ok()?;
        shooter.shots_fired += 1;
        let shooter_id = shooter.id;
        self.world.missiles.push(MissileUnit { id, shooter: Some(shooter_id), side, launch_time: time, state });
        Some(Event::Launch { missile: id, shooter: Some(shooter_id), target: target_id })
    }

    fn physics_tick(&mut self) {
        let sc = &self.config.scenario;
        let dt = sc.dt;
        self.world.events.clear();
        // Both sides decide from the same pre-launch world, then fire.
        let red_ticks = sc.red_ticks();
        let ceiling = self.airframe.params.ceiling;
        let mut red_fire = false;
        if let Some(red) = self.world.red.as_ref().filter(|r| r.state.alive) {
            if self.world.tick.is_multiple_of(red_ticks) {
                let mut decision = self.red_policy.tick(&self.world.blackboard(red.side));
                decision.setpoints.clamp(ceiling);
                self.world.red.as_mut().expect("red flying").setpoints = decision.setpoints;
                red_fire = decision.launch;
                self.last_red = Some(decision);
            }
        }
        for (side, go) in [(Side::Blue, std::mem::take(&mut self.blue_fire)), (Side::Red, red_fire)] {
            if go {
                if let Some(e) = self.fire(side) {
                    self.world.events.push(e);
                }
            }
        }

        let airframe = &self.airframe;
        let fly = |unit: &mut AircraftUnit, events: &mut Vec<Event>| {
            if !unit.state.alive {
                return;
            }
            let cmd = airframe.autopilot(&unit.state, &unit.setpoints);
            unit.state = airframe.step(&unit.state, &cmd, dt);
            if !unit.state.alive {
                events.push(Event::Crash { unit: unit.id });
            }
        };
        fly(&mut self.world.blue, &mut self.world.events);
        if let Some(red) = self.world.red.as_mut() {
            fly(red, &mut self.world.events);
        }

        for i in 0..self.world.missiles.len() {
            if !self.world.missiles[i].state.is_active() {
                continue;
            }
            let target_id = self.world.missiles[i].state.target;
            let target =
                if target_id == BLUE_ID { &mut self.world.blue } else { self.world.red.as_mut().expect("red") };
            let m = &mut self.world.missiles[i];
            let mut next = self.missile.step(&m.state, &target.state, dt);
            match self.missile.resolve(&mut next, &target.state) {
                Outcome::Hit => {
                    target.state.alive = false;
                    self.world.events.push(Event::Hit { missile: m.id, target: target_id });
                }
                Outcome::Expired => {
                    self.world.events.push(Event::Expire { missile: m.id, miss_distance: next.miss_distance });
                }
                Outcome::Active => {}
            }
            m.state = next;
        }

        self.world.tick += 1;
        self.world.time = self.world.tick as f64 * dt;
        self.world.terminal = self.terminal_check();
        if let Some(r) = self.recorder.as_mut() {
            r.tick(&self.world);
        }
    }

    fn terminal_check(&self) -> Option<TerminalCause> {
        let w = &self.world;
        let timeout = w.tick >= self.config.scenario.cap_ticks();
        let hit_on = |id| w.events.iter().any(|e| matches!(e, Event::Hit { target, .. } if *target == id));
        if w.kind.is_evasion() {
            if hit_on(BLUE_ID) {
                Some(TerminalCause::Hit)
            } else if !w.blue.state.alive {
                Some(TerminalCause::Crashed)
            } else if w.missiles.iter().all(|m| !m.state.is_active()) {
                Some(TerminalCause::Evaded)
            } else if timeout {
                Some(TerminalCause::Timeout)
            } else {
                None
            }
        } else {
            let red_alive = w.red.as_ref().is_some_and(|r| r.state.alive);
            if !w.blue.state.alive {
                // Simultaneous losses count against the agent.
                Some(if hit_on(BLUE_ID) { TerminalCause::BlueKilled } else { TerminalCause::BlueCrashed })
            } else if !red_alive {
                Some(if hit_on(RED_ID) { TerminalCause::RedKilled } else { TerminalCause::RedCrashed })
            } else if timeout {
                Some(TerminalCause::Timeout)
            } else {
                None
            }
        }
    }
}

fn placeholder_world(kind: ScenarioKind) -> World {
    let state = AircraftStateF64::level(crate::Vec3F64::zero(), 0.0, 1.0, 0.0, 1.0);
    World {
        kind,
        tick: 0,
        time: 0.0,
        blue: AircraftUnit {
            id: BLUE_ID,
            side: Side::Blue,
            state,
            setpoints: AutopilotSetpointsF64::hold(&state, 0.0),
            rack: MissileRack::new(0),
            shots_fired: 0,
        },
        red: None,
        missiles: vec![],
        terminal: None,
        events: vec![],
    }
}
