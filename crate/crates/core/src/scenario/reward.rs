use super::{ScenarioConfig, ScenarioKind};
use crate::angle::{bearing, wrap_pi};
use crate::engine::{AircraftUnit, DogfightResult, TerminalCause, World};
use crate::error::{Error, Result};
use crate::unit::Side;
use crate::AircraftStateF64;

fn cause(world: &World) -> Result<TerminalCause> {
    world.terminal.ok_or(Error::NotTerminal)
}

fn threat_miss_km(world: &World) -> impl Iterator<Item = f64> + '_ {
    world.threats_to(Side::Blue).map(|m| m.state.miss_distance / 1000.0)
}

/// Miss distance of the single threat in km; zero after a hit or if the
/// agent flew into the ground.
pub fn terminal_reward_evade1(world: &World) -> Result<f64> {
    if cause(world)? == TerminalCause::Crashed {
        return Ok(0.0);
    }
    Ok(threat_miss_km(world).next().unwrap_or(0.0))
}

/// Smallest miss distance over both threats, km. A hit zeroes its miss
/// distance, so any hit makes the reward zero.
pub fn terminal_reward_evade2(world: &World) -> Result<f64> {
    if cause(world)? == TerminalCause::Crashed {
        return Ok(0.0);
    }
    let md = threat_miss_km(world).fold(f64::INFINITY, f64::min);
    Ok(if md.is_finite() { md } else { 0.0 })
}

/// `+1` for killing the opponent (or watching it crash), `-1` for any other
/// ending.
pub fn reward_dogfight(world: &World) -> Result<f64> {
    match cause(world)?.dogfight_result() {
        Some(DogfightResult::RedKilled) => Ok(1.0),
        Some(_) => Ok(-1.0),
        None => Err(Error::InvalidConfig("evasion ending in a dogfight world".into())),
    }
}

pub fn terminal_reward(world: &World) -> Result<f64> {
    match world.kind {
        ScenarioKind::Evade1 => terminal_reward_evade1(world),
        ScenarioKind::Evade2 => terminal_reward_evade2(world),
        ScenarioKind::Dogfight => reward_dogfight(world),
    }
}

/// Zero until the episode ends, then the terminal reward.
pub fn step_reward(world: &World) -> f64 {
    if world.is_terminal() {
        terminal_reward(world).expect("terminal world always scores")
    } else {
        0.0
    }
}

/// Agent launch gates: a missile on the rail, the opponent inside the
/// envelope and within the alignment gate off the nose.
pub fn auto_launch_check(shooter: &AircraftUnit, opponent: &AircraftStateF64, cfg: &ScenarioConfig) -> bool {
    let own = &shooter.state;
    if shooter.rack.remaining == 0 || !own.alive || !opponent.alive {
        return false;
    }
    if (opponent.position - own.position).norm() >= cfg.launch_envelope {
        return false;
    }
    bearing(&own.position, &opponent.position)
        .is_some_and(|b| wrap_pi(b - own.heading).abs() < cfg.alignment_gate_deg.to_radians())
}
