//! JSON-lines episode logs.
//!
//! Line order: one `header`, then `tick` 0, then for every agent decision
//! an `action` line followed by the tick lines it produced, and finally a
//! `footer`. Field order inside every line is fixed by the struct
//! definitions below. The footer's digest is the SHA-256 of every
//! preceding line including its trailing newline.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{SimConfig, CONFIG_VERSION};
use super::world::{Event, TerminalCause, World};
use crate::error::{Error, Result};
use crate::missile::{Outcome, Phase};
use crate::scenario::{InitialConditions, PilotAction};
use crate::unit::{Side, UnitId};
use crate::{AutopilotSetpointsF64, Vec3F64};

pub const LOG_FORMAT: &str = "bvrsim-episode";
pub const LOG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub config_version: u32,
    pub code_version: String,
    pub rng: String,
    pub seed: u64,
    pub policy: String,
    pub log_stride: u64,
    pub config: SimConfig,
    /// Present only for episodes started from a hand-made geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConditions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub step: u64,
    pub action: PilotAction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftRecord {
    pub id: UnitId,
    pub side: Side,
    pub position: Vec3F64,
    pub velocity: Vec3F64,
    pub heading: f64,
    pub bank: f64,
    pub throttle: f64,
    pub alive: bool,
    pub setpoints: AutopilotSetpointsF64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissileRecord {
    pub id: UnitId,
    pub side: Side,
    pub target: UnitId,
    pub phase: Phase,
    pub position: Vec3F64,
    pub velocity: Vec3F64,
    pub miss_distance: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u64,
    pub time: f64,
    pub aircraft: Vec<AircraftRecord>,
    pub missiles: Vec<MissileRecord>,
    pub events: Vec<Event>,
}

impl TickRecord {
    pub fn capture(world: &World) -> Self {
        let aircraft = std::iter::once(&world.blue)
            .chain(world.red.as_ref())
            .map(|a| AircraftRecord {
                id: a.id,
                side: a.side,
                position: a.state.position,
                velocity: a.state.velocity,
                heading: a.state.heading,
                bank: a.state.bank,
                throttle: a.state.throttle,
                alive: a.state.alive,
                setpoints: a.setpoints,
            })
            .collect();
        let missiles = world
            .missiles
            .iter()
            .map(|m| MissileRecord {
                id: m.id,
                side: m.side,
                target: m.state.target,
                phase: m.state.phase,
                position: m.state.position,
                velocity: m.state.velocity,
                miss_distance: m.state.miss_distance,
                outcome: m.state.outcome,
            })
            .collect();
        Self { tick: world.tick, time: world.time, aircraft, missiles, events: world.events.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shots {
    pub blue: u32,
    pub red: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footer {
    pub steps: u64,
    pub ticks: u64,
    pub duration: f64,
    pub rewards: Vec<f64>,
    pub total_reward: f64,
    pub miss_distances_km: Vec<f64>,
    pub outcome: Option<TerminalCause>,
    pub shots: Shots,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogLine {
    Header(Box<Header>),
    Action(ActionRecord),
    Tick(TickRecord),
    Footer(Footer),
}

impl LogLine {
    pub fn parse(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::MalformedLog(e.to_string()))
    }
}

/// Accumulates log lines while an episode runs.
#[derive(Debug, Clone)]
pub(crate) struct Recorder {
    stride: u64,
    lines: Vec<String>,
    hasher: Sha256,
    rewards: Vec<f64>,
}

impl Recorder {
    pub(crate) fn new(header: Header) -> Self {
        let mut r = Self { stride: header.log_stride.max(1), lines: vec![], hasher: Sha256::new(), rewards: vec![] };
        r.push(&LogLine::Header(Box::new(header)));
        r
    }

    fn push(&mut self, line: &LogLine) {
        let text = serde_json::to_string(line).expect("log records always serialize");
        self.hasher.update(text.as_bytes());
        self.hasher.update(b"\n");
        self.lines.push(text);
    }

    pub(crate) fn action(&mut self, step: u64, action: &PilotAction) {
        self.push(&LogLine::Action(ActionRecord { step, action: *action }));
    }

    /// Logs the tick if it is on the stride, carries events, or ends the
    /// episode.
    pub(crate) fn tick(&mut self, world: &World) {
        if world.tick.is_multiple_of(self.stride) || !world.events.is_empty() || world.is_terminal() {
            self.push(&LogLine::Tick(TickRecord::capture(world)));
        }
    }

    pub(crate) fn reward(&mut self, r: f64) {
        self.rewards.push(r);
    }

    pub(crate) fn finish(mut self, world: &World) -> EpisodeLog {
        let digest = hex::encode(self.hasher.clone().finalize());
        let shots = Shots { blue: world.blue.shots_fired, red: world.red.as_ref().map_or(0, |r| r.shots_fired) };
        let footer = Footer {
            steps: self.rewards.len() as u64,
            ticks: world.tick,
            duration: world.time,
            total_reward: self.rewards.iter().sum(),
            rewards: std::mem::take(&mut self.rewards),
            miss_distances_km: world.missiles.iter().map(|m| m.state.miss_distance / 1000.0).collect(),
            outcome: world.terminal,
            shots,
            digest,
        };
        let text = serde_json::to_string(&LogLine::Footer(footer)).expect("footer serializes");
        self.lines.push(text);
        EpisodeLog { lines: self.lines }
    }
}

/// A complete episode as JSON lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeLog {
    pub lines: Vec<String>,
}

impl EpisodeLog {
    pub fn header(&self) -> Result<Header> {
        match self.lines.first().map(|l| LogLine::parse(l)).transpose()? {
            Some(LogLine::Header(h)) => Ok(*h),
            _ => Err(Error::MalformedLog("first line is not a header".into())),
        }
    }

    pub fn footer(&self) -> Result<Footer> {
        match self.lines.last().map(|l| LogLine::parse(l)).transpose()? {
            Some(LogLine::Footer(f)) => Ok(f),
            _ => Err(Error::MalformedLog("last line is not a footer".into())),
        }
    }

    pub fn ticks(&self) -> impl Iterator<Item = Result<TickRecord>> + '_ {
        self.lines.iter().filter_map(|l| match LogLine::parse(l) {
            Ok(LogLine::Tick(t)) => Some(Ok(t)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
    }

    pub fn actions(&self) -> Result<Vec<PilotAction>> {
        let mut out = vec![];
        for l in &self.lines {
            if let LogLine::Action(a) = LogLine::parse(l)? {
                out.push(a.action);
            }
        }
        Ok(out)
    }

    /// Recomputes the digest over every line but the footer.
    pub fn digest_matches(&self) -> Result<bool> {
        let footer = self.footer()?;
        let mut h = Sha256::new();
        for l in &self.lines[..self.lines.len() - 1] {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        Ok(hex::encode(h.finalize()) == footer.digest)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        for l in &self.lines {
            w.write_all(l.as_bytes())?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let lines = r.lines().collect::<std::io::Result<Vec<_>>>()?;
        Ok(Self { lines: lines.into_iter().filter(|l| !l.is_empty()).collect() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Checks that a header can be replayed by this build.
pub(crate) fn check_versions(h: &Header) -> Result<()> {
    if h.format != LOG_FORMAT || h.version != LOG_VERSION {
        return Err(Error::VersionMismatch {
            expected: format!("{LOG_FORMAT} v{LOG_VERSION}"),
            found: format!("{} v{}", h.format, h.version),
        });
    }
    if h.config_version != CONFIG_VERSION || h.config.config_version != CONFIG_VERSION {
        return Err(Error::VersionMismatch {
            expected: format!("config v{CONFIG_VERSION}"),
            found: format!("config v{}", h.config_version),
        });
    }
    Ok(())
}
