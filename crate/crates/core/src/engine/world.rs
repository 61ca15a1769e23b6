use serde::{Deserialize, Serialize};

use crate::bt::{Blackboard, LaunchEvent, OpponentTrack, OwnMissileSummary};
use crate::missile::MissileRack;
use crate::scenario::ScenarioKind;
use crate::unit::{Side, UnitId};
use crate::{AircraftStateF64, AutopilotSetpointsF64, MissileStateF64};

pub const BLUE_ID: UnitId = UnitId(0);
pub const RED_ID: UnitId = UnitId(1);
/// Missile ids start here, in launch order.
pub const FIRST_MISSILE_ID: u32 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftUnit {
    pub id: UnitId,
    pub side: Side,
    pub state: AircraftStateF64,
    pub setpoints: AutopilotSetpointsF64,
    pub rack: MissileRack,
    pub shots_fired: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissileUnit {
    pub id: UnitId,
    /// `None` for the off-board launchers of the evasion scenarios.
    pub shooter: Option<UnitId>,
    pub side: Side,
    pub launch_time: f64,
    pub state: MissileStateF64,
}

/// Why an episode ended. Exactly one per terminal world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalCause {
    /// Evasion: a missile reached the agent.
    Hit,
    /// Evasion: every missile expired.
    Evaded,
    /// Evasion: the agent flew into the ground.
    Crashed,
    RedKilled,
    RedCrashed,
    BlueKilled,
    BlueCrashed,
    Timeout,
}

/// The three dogfight endings the reward distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DogfightResult {
    RedKilled,
    BlueLost,
    Timeout,
}

impl TerminalCause {
    pub fn name(self) -> &'static str {
        match self {
            TerminalCause::Hit => "hit",
            TerminalCause::Evaded => "evaded",
            TerminalCause::Crashed => "crashed",
            TerminalCause::RedKilled => "red-killed",
            TerminalCause::RedCrashed => "red-crashed",
            TerminalCause::BlueKilled => "blue-killed",
            TerminalCause::BlueCrashed => "blue-crashed",
            TerminalCause::Timeout => "timeout",
        }
    }

    pub fn dogfight_result(self) -> Option<DogfightResult> {
        match self {
            TerminalCause::RedKilled | TerminalCause::RedCrashed => Some(DogfightResult::RedKilled),
            TerminalCause::BlueKilled | TerminalCause::BlueCrashed => Some(DogfightResult::BlueLost),
            TerminalCause::Timeout => Some(DogfightResult::Timeout),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Event {
    Launch { missile: UnitId, shooter: Option<UnitId>, target: UnitId },
    Hit { missile: UnitId, target: UnitId },
    Expire { missile: UnitId, miss_distance: f64 },
    Crash { unit: UnitId },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub kind: ScenarioKind,
    /// Physics ticks taken; the clock is `tick · dt`.
    pub tick: u64,
    pub time: f64,
    pub blue: AircraftUnit,
    pub red: Option<AircraftUnit>,
    pub missiles: Vec<MissileUnit>,
    pub terminal: Option<TerminalCause>,
    /// Events of the most recent tick.
    pub events: Vec<Event>,
}

impl World {
    pub fn is_terminal(&self) -> bool {
        self.terminal.is_some()
    }

    pub fn aircraft(&self, side: Side) -> Option<&AircraftUnit> {
        match side {
            Side::Blue => Some(&self.blue),
            Side::Red => self.red.as_ref(),
        }
    }

    pub fn aircraft_mut(&mut self, side: Side) -> Option<&mut AircraftUnit> {
        match side {
            Side::Blue => Some(&mut self.blue),
            Side::Red => self.red.as_mut(),
        }
    }

    /// Missiles fired at `side`, in launch order.
    pub fn threats_to(&self, side: Side) -> impl Iterator<Item = &MissileUnit> {
        self.missiles.iter().filter(move |m| m.side != side)
    }

    /// What `side` may know when deciding: its own state, the opponent's
    /// track, launch points and times of missiles fired at it (never their
    /// current positions), and its own inventory.
    pub fn blackboard(&self, side: Side) -> Blackboard {
        let own = self.aircraft(side).expect("blackboard for a side that is not flying");
        let opponent = self
            .aircraft(side.opponent())
            .filter(|a| a.state.alive)
            .map(|a| OpponentTrack { position: a.state.position, velocity: a.state.velocity });
        Blackboard {
            time: self.time,
            own: own.state,
            opponent,
            incoming_launches: self
                .threats_to(side)
                .map(|m| LaunchEvent { position: m.state.launch_position, time: m.launch_time })
                .collect(),
            missiles_remaining: own.rack.remaining,
            own_missiles_in_flight: self
                .missiles
                .iter()
                .filter(|m| m.side == side && m.state.is_active())
                .map(|m| OwnMissileSummary { time_since_launch: m.state.time_since_launch })
                .collect(),
        }
    }
}
