//! The three scenarios: who starts where, what the agent sees, what it may
//! command, and how an episode is scored.
//!
//! | kind       | threats                         | agent decides every |
//! |------------|---------------------------------|---------------------|
//! | `evade1`   | one missile launched at `t = 0`  | 1 s                 |
//! | `evade2`   | two missiles launched at `t = 0` | 1 s                 |
//! | `dogfight` | a behavior-tree opponent, 2 + 2 missiles | 10 s        |

mod initial;
mod observation;
mod reward;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::wrap_360;
use crate::error::{Error, Result};
use crate::AutopilotSetpointsF64;

pub use initial::{sample_initial_conditions, InitialConditions, LaunchSample};
pub use observation::{build_observation, observation_layout, ObsField, Observation};
pub use reward::{
    auto_launch_check, reward_dogfight, step_reward, terminal_reward, terminal_reward_evade1, terminal_reward_evade2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Evade1,
    Evade2,
    Dogfight,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::Evade1, ScenarioKind::Evade2, ScenarioKind::Dogfight];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Evade1 => "evade1",
            ScenarioKind::Evade2 => "evade2",
            ScenarioKind::Dogfight => "dogfight",
        }
    }

    /// Missiles launched at the agent on reset.
    pub fn threat_count(self) -> usize {
        match self {
            ScenarioKind::Evade1 => 1,
            ScenarioKind::Evade2 => 2,
            ScenarioKind::Dogfight => 0,
        }
    }

    pub fn is_evasion(self) -> bool {
        self != ScenarioKind::Dogfight
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::InvalidConfig(format!("unknown scenario `{s}` (expected evade1, evade2 or dogfight)"))
        })
    }
}

/// Uniform sampling ranges for the evasion scenarios, `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialRanges {
    pub agent_speed: [f64; 2],
    pub agent_altitude: [f64; 2],
    pub agent_heading_deg: [f64; 2],
    pub launch_speed: [f64; 2],
    pub launch_altitude: [f64; 2],
    /// Straight-line distance from the agent to the launch point, m.
    pub firing_distance: [f64; 2],
}

impl Default for InitialRanges {
    fn default() -> Self {
        Self {
            agent_speed: [300.0, 365.0],
            agent_altitude: [6000.0, 10_000.0],
            agent_heading_deg: [0.0, 360.0],
            launch_speed: [280.0, 320.0],
            launch_altitude: [9000.0, 11_000.0],
            firing_distance: [40_000.0, 80_000.0],
        }
    }
}

impl InitialRanges {
    fn validate(&self) -> Result<(), String> {
        let all = [
            ("agent_speed", self.agent_speed),
            ("agent_altitude", self.agent_altitude),
            ("agent_heading_deg", self.agent_heading_deg),
            ("launch_speed", self.launch_speed),
            ("launch_altitude", self.launch_altitude),
            ("firing_distance", self.firing_distance),
        ];
        for (name, [lo, hi]) in all {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(format!("ranges.{name} must be an ordered finite pair"));
            }
        }
        let max_dh = (self.agent_altitude[0] - self.launch_altitude[1])
            .abs()
            .max((self.agent_altitude[1] - self.launch_altitude[0]).abs());
        if self.firing_distance[0] <= max_dh {
            return Err("ranges.firing_distance must exceed any possible altitude difference".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// Default seed when none is given on the command line.
    pub seed: u64,
    /// Physics step, s.
    pub dt: f64,
    /// Seconds between agent decisions; `None` picks 1 s for the evasion
    /// scenarios and 10 s for the dogfight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision_interval: Option<f64>,
    /// Episode time limit, s; `None` picks 600 s (evasion) or 960 s.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub episode_cap: Option<f64>,
    /// Ignore the action's throttle and fly at full power.
    pub throttle_fixed: bool,
    /// Launch the agent's missiles automatically when the gates pass.
    pub auto_launch: bool,
    /// Agent launch gates (mirrors the adversary's defaults).
    pub launch_envelope: f64,
    pub alignment_gate_deg: f64,
    pub missiles_per_aircraft: u32,
    /// Opponent's cadence, s.
    pub red_tick_interval: f64,
    pub dogfight_separation: f64,
    pub dogfight_altitude: f64,
    pub dogfight_speed: f64,
    pub ranges: InitialRanges,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            kind: ScenarioKind::Evade1,
            seed: 0,
            dt: 0.02,
            decision_interval: None,
            episode_cap: None,
            throttle_fixed: true,
            auto_launch: true,
            launch_envelope: 50_000.0,
            alignment_gate_deg: 10.0,
            missiles_per_aircraft: 2,
            red_tick_interval: 1.0,
            dogfight_separation: 100_000.0,
            dogfight_altitude: 10_000.0,
            dogfight_speed: 300.0,
            ranges: InitialRanges::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn for_kind(kind: ScenarioKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn decision_interval(&self) -> f64 {
        self.decision_interval.unwrap_or(if self.kind.is_evasion() { 1.0 } else { 10.0 })
    }

    pub fn episode_cap(&self) -> f64 {
        self.episode_cap.unwrap_or(if self.kind.is_evasion() { 600.0 } else { 960.0 })
    }

    /// Physics ticks per agent decision.
    pub fn decision_ticks(&self) -> u64 {
        ticks(self.decision_interval(), self.dt)
    }

    pub fn red_ticks(&self) -> u64 {
        ticks(self.red_tick_interval, self.dt)
    }

    pub fn cap_ticks(&self) -> u64 {
        (self.episode_cap() / self.dt).round() as u64
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err("dt must be in (0, 0.1]".into());
        }
        for (name, v) in
            [("decision_interval", self.decision_interval()), ("red_tick_interval", self.red_tick_interval)]
        {
            let n = v / self.dt;
            if !(v > 0.0 && n.round() >= 1.0 && (n - n.round()).abs() < 1e-9) {
                return Err(format!("{name} must be a positive multiple of dt"));
            }
        }
        if !(self.episode_cap() > 0.0) {
            return Err("episode_cap must be positive".into());
        }
        if !(self.launch_envelope > 0.0 && self.alignment_gate_deg > 0.0) {
            return Err("launch gates must be positive".into());
        }
        if !(self.dogfight_separation > 0.0 && self.dogfight_altitude > 0.0 && self.dogfight_speed > 0.0) {
            return Err("dogfight start must be positive".into());
        }
        self.ranges.validate()
    }
}

fn ticks(interval: f64, dt: f64) -> u64 {
    (interval / dt).round() as u64
}

/// One agent decision. Heading in degrees, altitude in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PilotAction {
    pub heading_deg: f64,
    pub altitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throttle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub launch: Option<bool>,
}

impl PilotAction {
    pub fn new(heading_deg: f64, altitude: f64) -> Self {
        Self { heading_deg, altitude, throttle: None, launch: None }
    }

    /// Setpoints for the autopilot. Heading is wrapped into `[0, 360)`;
    /// altitude and throttle are clamped, and the flag reports whether
    /// clamping changed anything.
    pub fn decode(&self, cfg: &ScenarioConfig, ceiling: f64) -> Result<(AutopilotSetpointsF64, bool)> {
        let throttle = if cfg.throttle_fixed { 1.0 } else { self.throttle.unwrap_or(1.0) };
        if !(self.heading_deg.is_finite() && self.altitude.is_finite() && throttle.is_finite()) {
            return Err(Error::InvalidAction(format!("non-finite action {self:?}")));
        }
        let mut sp = AutopilotSetpointsF64 {
            heading: wrap_360(self.heading_deg).to_radians(),
            altitude: self.altitude,
            throttle,
        };
        let clamped = sp.clamp(ceiling);
        Ok((sp, clamped))
    }
}
