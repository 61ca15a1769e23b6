//! Episodes: the world stepper, the reset/step environment, logging and
//! replay, scripted policies and the parallel runner.

mod config;
mod env;
pub mod export;
mod log;
pub mod policy;
mod replay;
mod runner;
mod world;

pub use config::{SimConfig, CONFIG_VERSION};
pub use env::{ActionField, Env, EnvSpec, StepInfo, Transition};
pub use log::{
    ActionRecord, AircraftRecord, EpisodeLog, Footer, Header, LogLine, MissileRecord, Shots, TickRecord, LOG_FORMAT,
    LOG_VERSION,
};
pub use policy::{Policy, PolicyKind};
pub use replay::{replay, ReplayReport};
pub use runner::{run_episode, run_episodes, EpisodeOutput, EpisodeSummary, VecEnv};
pub use world::{
    AircraftUnit, DogfightResult, Event, MissileUnit, TerminalCause, World, BLUE_ID, FIRST_MISSILE_ID, RED_ID,
};
