//! Beyond-visual-range air combat simulation engine.
//!
//! Point-mass aircraft behind a heading/altitude/throttle autopilot, a
//! boost–loft–proportional-navigation missile, a behavior-tree adversary
//! and three reinforcement-learning scenarios (single-missile evasion,
//! dual-missile evasion, one-versus-one), driven through a deterministic
//! reset/step environment with replayable episode logs.
//!
//! The unit models are generic over [`Scalar`] (`f32` or `f64`); the
//! episode engine runs in `f64` and the aliases below name those types.

// `!(x > 0)` guards are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airframe;
pub mod angle;
pub mod atmosphere;
pub mod bt;
pub mod engine;
pub mod integrate;
pub mod missile;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod unit;
pub mod vec3;

mod error;

pub use engine::{Env, SimConfig};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use scenario::{Observation, PilotAction, ScenarioKind};

pub type Vec3F64 = vec3::Vec3<f64>;
pub type Vec3F32 = vec3::Vec3<f32>;
pub type AircraftStateF64 = airframe::AircraftState<f64>;
pub type AircraftStateF32 = airframe::AircraftState<f32>;
pub type AirframeF64 = airframe::Airframe<f64>;
pub type AirframeParamsF64 = airframe::AirframeParams<f64>;
pub type AutopilotSetpointsF64 = airframe::AutopilotSetpoints<f64>;
pub type InnerLoopCommandF64 = airframe::InnerLoopCommand<f64>;
pub type MissileStateF64 = missile::MissileState<f64>;
pub type MissileStateF32 = missile::MissileState<f32>;
pub type MissileF64 = missile::Missile<f64>;
pub type MissileParamsF64 = missile::MissileParams<f64>;
