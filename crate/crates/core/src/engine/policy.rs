//! Decision makers for the agent (blue) aircraft.
//!
//! Scripted policies see what the agent is allowed to see: its own state,
//! the opponent's track, and launch points of missiles fired at it.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::Serialize;

use super::env::Env;
use crate::angle::bearing;
use crate::error::{Error, Result};
use crate::rng::{SimRng, POLICY_STREAM};
use crate::scenario::{Observation, PilotAction};
use crate::unit::Side;
use crate::Vec3F64;

pub trait Policy {
    fn name(&self) -> &str;

    /// Called after every reset, before the first decision.
    fn reset(&mut self, _env: &Env) {}

    fn act(&mut self, env: &Env, obs: &Observation) -> Result<PilotAction>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Straight,
    DiveTurn,
    Bt,
    Random,
    External,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] =
        [PolicyKind::Straight, PolicyKind::DiveTurn, PolicyKind::Bt, PolicyKind::Random, PolicyKind::External];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Straight => "straight",
            PolicyKind::DiveTurn => "dive-turn",
            PolicyKind::Bt => "bt",
            PolicyKind::Random => "random",
            PolicyKind::External => "external",
        }
    }

    /// Builds a self-contained policy. `External` needs a transport and is
    /// built with [`ExternalPolicy::new`] instead.
    pub fn build(self, seed: u64) -> Result<Box<dyn Policy + Send>> {
        Ok(match self {
            PolicyKind::Straight => Box::new(Straight::default()),
            PolicyKind::DiveTurn => Box::new(DiveTurn::default()),
            PolicyKind::Bt => Box::new(BtPilot),
            PolicyKind::Random => Box::new(RandomPilot::new(seed)),
            PolicyKind::External => {
                return Err(Error::InvalidConfig("the external policy needs an I/O transport".into()))
            }
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::InvalidConfig(format!("unknown policy `{s}` (expected straight, dive-turn, bt, random or external)"))
        })
    }
}

/// Holds the starting heading and altitude.
#[derive(Debug, Clone, Default)]
pub struct Straight {
    hold: Option<PilotAction>,
}

impl Policy for Straight {
    fn name(&self) -> &str {
        "straight"
    }

    fn reset(&mut self, env: &Env) {
        let s = &env.world().blue.state;
        self.hold = Some(PilotAction::new(s.heading.to_degrees(), s.altitude()));
    }

    fn act(&mut self, env: &Env, _obs: &Observation) -> Result<PilotAction> {
        if self.hold.is_none() {
            self.reset(env);
        }
        Ok(self.hold.expect("set on reset"))
    }
}

/// Dive first, then turn the tail to the launch point(s).
///
/// On a detected launch the aircraft keeps its heading and commands a dive
/// to `dive_altitude`; after `turn_delay` seconds it turns to fly directly
/// away from where the missiles were fired. Thick low air bleeds the
/// missile's energy and the tail-chase stretches its flight path.
#[derive(Debug, Clone)]
pub struct DiveTurn {
    pub dive_altitude: f64,
    pub turn_delay: f64,
    start: Option<PilotAction>,
}

impl Default for DiveTurn {
    fn default() -> Self {
        Self { dive_altitude: 1000.0, turn_delay: 4.0, start: None }
    }
}

impl DiveTurn {
    /// Heading (degrees) away from the mean direction of `launches`.
    fn away_heading(own: &Vec3F64, launches: &[Vec3F64]) -> Option<f64> {
        let mut sum = Vec3F64::zero();
        for p in launches {
            if let Some(u) = (*own - *p).horizontal().try_normalize() {
                sum += u;
            }
        }
        bearing(&Vec3F64::zero(), &sum).map(f64::to_degrees)
    }
}

impl Policy for DiveTurn {
    fn name(&self) -> &str {
        "dive-turn"
    }

    fn reset(&mut self, env: &Env) {
        let s = &env.world().blue.state;
        self.start = Some(PilotAction::new(s.heading.to_degrees(), s.altitude()));
    }

    fn act(&mut self, env: &Env, _obs: &Observation) -> Result<PilotAction> {
        if self.start.is_none() {
            self.reset(env);
        }
        let start = self.start.expect("set on reset");
        let bb = env.world().blackboard(Side::Blue);
        let Some(first) = bb.incoming_launches.iter().map(|l| l.time).min_by(f64::total_cmp) else {
            return Ok(start);
        };
        if bb.time - first < self.turn_delay {
            return Ok(PilotAction::new(start.heading_deg, self.dive_altitude));
        }
        let launches: Vec<_> = bb.incoming_launches.iter().map(|l| l.position).collect();
        let heading = Self::away_heading(&bb.own.position, &launches).unwrap_or(start.heading_deg);
        Ok(PilotAction::new(heading, self.dive_altitude))
    }
}

/// Flies the agent with the adversary's behavior tree.
#[derive(Debug, Clone, Copy, Default)]
pub struct BtPilot;

impl Policy for BtPilot {
    fn name(&self) -> &str {
        "bt"
    }

    fn act(&mut self, env: &Env, _obs: &Observation) -> Result<PilotAction> {
        let d = env.red_policy().tick(&env.world().blackboard(Side::Blue));
        Ok(PilotAction {
            heading_deg: d.setpoints.heading.to_degrees(),
            altitude: d.setpoints.altitude,
            throttle: Some(d.setpoints.throttle),
            launch: Some(d.launch),
        })
    }
}

/// Uniformly random decisions from its own seeded stream.
#[derive(Debug, Clone)]
pub struct RandomPilot {
    rng: SimRng,
}

impl RandomPilot {
    pub fn new(seed: u64) -> Self {
        Self { rng: SimRng::new(seed, POLICY_STREAM) }
    }
}

impl Policy for RandomPilot {
    fn name(&self) -> &str {
        "random"
    }

    fn act(&mut self, env: &Env, _obs: &Observation) -> Result<PilotAction> {
        let ceiling = env.airframe().params.ceiling;
        Ok(PilotAction {
            heading_deg: self.rng.uniform(0.0, 360.0),
            altitude: self.rng.uniform(0.0, ceiling),
            throttle: Some(self.rng.unit()),
            launch: Some(self.rng.next_u64() & 1 == 1),
        })
    }
}

#[derive(Serialize)]
struct Query<'a> {
    step: u64,
    time: f64,
    observation: &'a Observation,
}

/// Delegates decisions over a line-oriented JSON channel: writes one
/// `{"step", "time", "observation"}` object per decision and reads one
/// action object back.
pub struct ExternalPolicy<R, W> {
    reader: R,
    writer: W,
    line: String,
}

impl<R: BufRead, W: Write> ExternalPolicy<R, W> {
    pub fn new(reader: R, writer: W) -> Self {
        Self { reader, writer, line: String::new() }
    }
}

impl<R: BufRead, W: Write> Policy for ExternalPolicy<R, W> {
    fn name(&self) -> &str {
        "external"
    }

    fn act(&mut self, env: &Env, obs: &Observation) -> Result<PilotAction> {
        let q = Query { step: env.steps(), time: env.world().time, observation: obs };
        serde_json::to_writer(&mut self.writer, &q)?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        self.line.clear();
        if self.reader.read_line(&mut self.line)? == 0 {
            return Err(Error::InvalidAction("external policy closed its input".into()));
        }
        serde_json::from_str(self.line.trim()).map_err(|e| Error::InvalidAction(e.to_string()))
    }
}
