#![allow(dead_code)]

use bvr_core::engine::{Env, World};
use bvr_core::scenario::{InitialConditions, LaunchSample};
use bvr_core::{AircraftStateF64, ScenarioKind, SimConfig, Vec3F64};

pub fn env(kind: ScenarioKind) -> Env {
    Env::new(SimConfig::for_kind(kind)).unwrap()
}

pub fn world(kind: ScenarioKind, seed: u64) -> World {
    let mut e = env(kind);
    e.reset(seed);
    e.world().clone()
}

pub fn level(x: f64, y: f64, alt: f64, heading_deg: f64, speed: f64) -> AircraftStateF64 {
    AircraftStateF64::level(Vec3F64::new(x, y, -alt), heading_deg.to_radians(), speed, 1.0, 9000.0)
}

/// Agent over the origin flying north; launchers at the given azimuths
/// (degrees) and slant distance.
pub fn geometry(alt: f64, azimuths: &[f64], distance: f64, launch_alt: f64) -> InitialConditions {
    let dh = launch_alt - alt;
    let horiz = (distance * distance - dh * dh).sqrt();
    InitialConditions {
        blue: level(0.0, 0.0, alt, 0.0, 330.0),
        red: None,
        launches: azimuths
            .iter()
            .map(|a| {
                let (s, c) = a.to_radians().sin_cos();
                LaunchSample { position: Vec3F64::new(horiz * c, horiz * s, -launch_alt), speed: 300.0 }
            })
            .collect(),
    }
}
