//! The red-team adversary: evade incoming launches first, engage when the
//! opponent is inside the launch envelope, otherwise close in.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{BtNode, BtStatus, LeafKind, Leaves, NodeSpec};
use crate::angle::{bearing, wrap_pi, wrap_two_pi};
use crate::error::Result;
use crate::{AircraftStateF64, AutopilotSetpointsF64, Vec3F64};

/// Default adversary tree. Evasion sits leftmost so it always wins.
pub const DEFAULT_RED_TREE: &str = "\
(fallback
  (sequence (condition incoming_threat) (action evade))
  (sequence (condition opponent_in_envelope)
    (fallback
      (sequence (condition missile_in_flight) (action crank))
      (sequence (condition has_missile) (condition aligned) (action launch))
      (sequence (condition has_missile) (action align))))
  (action pursue))
";

/// A detected launch: where and when, never where the missile is now.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaunchEvent {
    pub position: Vec3F64,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpponentTrack {
    pub position: Vec3F64,
    pub velocity: Vec3F64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OwnMissileSummary {
    pub time_since_launch: f64,
}

/// Everything the adversary is allowed to know.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Blackboard {
    pub time: f64,
    pub own: AircraftStateF64,
    pub opponent: Option<OpponentTrack>,
    pub incoming_launches: Vec<LaunchEvent>,
    pub missiles_remaining: u32,
    pub own_missiles_in_flight: Vec<OwnMissileSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RedPolicyConfig {
    /// How long a detected launch keeps the evade branch active, s.
    pub threat_window: f64,
    pub launch_envelope: f64,
    pub alignment_gate_deg: f64,
    pub evade_altitude: f64,
    pub cruise_altitude: f64,
    pub crank_angle_deg: f64,
    pub throttle: f64,
    /// Tree text; `None` uses [`DEFAULT_RED_TREE`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
}

impl Default for RedPolicyConfig {
    fn default() -> Self {
        Self {
            threat_window: 120.0,
            launch_envelope: 50_000.0,
            alignment_gate_deg: 10.0,
            evade_altitude: 3000.0,
            cruise_altitude: 10_000.0,
            crank_angle_deg: 50.0,
            throttle: 1.0,
            tree: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Evade,
    Engage,
    Approach,
    /// No action fired (only possible with a custom tree).
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedDecision {
    pub setpoints: AutopilotSetpointsF64,
    pub launch: bool,
    pub branch: Branch,
}

struct Ctx<'a> {
    bb: &'a Blackboard,
    cfg: &'a RedPolicyConfig,
    decision: Option<RedDecision>,
}

impl Ctx<'_> {
    fn bearing_to_opponent(&self) -> Option<f64> {
        self.bb.opponent.as_ref().and_then(|o| bearing(&self.bb.own.position, &o.position))
    }

    fn latest_threat(&self) -> Option<&LaunchEvent> {
        let t = self.bb.time;
        self.bb
            .incoming_launches
            .iter()
            .filter(|e| t - e.time >= 0.0 && t - e.time < self.cfg.threat_window)
            .max_by(|a, b| a.time.total_cmp(&b.time))
    }

    fn command(&mut self, heading: f64, altitude: f64, launch: bool, branch: Branch) -> BtStatus {
        let setpoints = AutopilotSetpointsF64 { heading: wrap_two_pi(heading), altitude, throttle: self.cfg.throttle };
        self.decision = Some(RedDecision { setpoints, launch, branch });
        BtStatus::Success
    }
}

const CONDITIONS: [&str; 5] =
    ["incoming_threat", "opponent_in_envelope", "has_missile", "missile_in_flight", "aligned"];
const ACTIONS: [&str; 5] = ["evade", "crank", "launch", "align", "pursue"];

struct RedLeaves;

impl<'a> Leaves<Ctx<'a>> for RedLeaves {
    fn lookup(&self, kind: LeafKind, name: &str) -> Option<usize> {
        match kind {
            LeafKind::Condition => CONDITIONS.iter().position(|n| *n == name),
            LeafKind::Action => ACTIONS.iter().position(|n| *n == name),
        }
    }

    fn condition(&self, id: usize, ctx: &Ctx<'a>) -> bool {
        let bb = ctx.bb;
        match CONDITIONS[id] {
            "incoming_threat" => ctx.latest_threat().is_some(),
            "opponent_in_envelope" => {
                bb.opponent.is_some_and(|o| (o.position - bb.own.position).norm() < ctx.cfg.launch_envelope)
            }
            "has_missile" => bb.missiles_remaining > 0,
            "missile_in_flight" => !bb.own_missiles_in_flight.is_empty(),
            "aligned" => ctx
                .bearing_to_opponent()
                .is_some_and(|b| wrap_pi(b - bb.own.heading).abs() < ctx.cfg.alignment_gate_deg.to_radians()),
            _ => unreachable!(),
        }
    }

    fn action(&self, id: usize, ctx: &mut Ctx<'a>) -> BtStatus {
        let own = ctx.bb.own;
        let cruise = ctx.cfg.cruise_altitude;
        let to_opp = ctx.bearing_to_opponent().unwrap_or(own.heading);
        match ACTIONS[id] {
            "evade" => {
                let Some(threat) = ctx.latest_threat() else { return BtStatus::Failure };
                let away = bearing(&own.position, &threat.position).map_or(own.heading, |b| b + std::f64::consts::PI);
                let alt = ctx.cfg.evade_altitude;
                ctx.command(away, alt, false, Branch::Evade)
            }
            "crank" => {
                let side = if wrap_pi(own.heading - to_opp) < 0.0 { -1.0 } else { 1.0 };
                let heading = to_opp + side * ctx.cfg.crank_angle_deg.to_radians();
                ctx.command(heading, cruise, false, Branch::Engage)
            }
            "launch" => ctx.command(to_opp, cruise, true, Branch::Engage),
            "align" => ctx.command(to_opp, cruise, false, Branch::Engage),
            "pursue" => ctx.command(to_opp, cruise, false, Branch::Approach),
            _ => unreachable!(),
        }
    }
}

/// A built adversary tree plus its thresholds. Immutable; share freely.
#[derive(Debug, Clone)]
pub struct RedPolicy {
    tree: BtNode,
    config: RedPolicyConfig,
}

impl RedPolicy {
    pub fn new(config: RedPolicyConfig) -> Result<Self> {
        let text = config.tree.as_deref().unwrap_or(DEFAULT_RED_TREE);
        let tree = NodeSpec::parse(text)?.build(&RedLeaves)?;
        Ok(Self { tree, config })
    }

    pub fn config(&self) -> &RedPolicyConfig {
        &self.config
    }

    /// Ticks the tree once. If no action fires, holds the current state.
    pub fn tick(&self, bb: &Blackboard) -> RedDecision {
        red_tick(&self.tree, &self.config, bb)
    }
}

impl Default for RedPolicy {
    fn default() -> Self {
        Self::new(RedPolicyConfig::default()).expect("default tree is well-formed")
    }
}

fn red_tick(tree: &BtNode, cfg: &RedPolicyConfig, bb: &Blackboard) -> RedDecision {
    let mut ctx = Ctx { bb, cfg, decision: None };
    tree.tick(&RedLeaves, &mut ctx);
    ctx.decision.unwrap_or(RedDecision {
        setpoints: AutopilotSetpointsF64::hold(&bb.own, cfg.throttle),
        launch: false,
        branch: Branch::Idle,
    })
}

/// Ticks the default tree with the given thresholds (`cfg.tree` is ignored).
pub fn red_policy_tick(bb: &Blackboard, cfg: &RedPolicyConfig) -> RedDecision {
    static TREE: OnceLock<BtNode> = OnceLock::new();
    let tree = TREE.get_or_init(|| NodeSpec::parse(DEFAULT_RED_TREE).unwrap().build(&RedLeaves).unwrap());
    red_tick(tree, cfg, bb)
}
