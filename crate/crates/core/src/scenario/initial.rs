use serde::{Deserialize, Serialize};

use super::{ScenarioConfig, ScenarioKind};
use crate::rng::{SimRng, AGENT_STREAM, MISSILE_STREAM_BASE};
use crate::{AircraftStateF64, Vec3F64};

/// Where an off-board shooter fires from, and how fast it is flying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaunchSample {
    pub position: Vec3F64,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    pub blue: AircraftStateF64,
    pub red: Option<AircraftStateF64>,
    /// Evasion threats, launched at the agent at `t = 0`.
    pub launches: Vec<LaunchSample>,
}

/// Draws the starting world for `seed`.
///
/// Evasion: the agent starts wings-level over the origin; each launcher sits
/// at a uniform azimuth around it at the sampled straight-line distance.
/// Every unit draws from its own stream. Dogfight: a fixed head-on start,
/// identical for every seed.
pub fn sample_initial_conditions(seed: u64, cfg: &ScenarioConfig, mass: f64) -> InitialConditions {
    let r = &cfg.ranges;
    match cfg.kind {
        ScenarioKind::Dogfight => {
            let alt = cfg.dogfight_altitude;
            let blue = AircraftStateF64::level(Vec3F64::new(0.0, 0.0, -alt), 0.0, cfg.dogfight_speed, 1.0, mass);
            let red = AircraftStateF64::level(
                Vec3F64::new(cfg.dogfight_separation, 0.0, -alt),
                std::f64::consts::PI,
                cfg.dogfight_speed,
                1.0,
                mass,
            );
            InitialConditions { blue, red: Some(red), launches: vec![] }
        }
        kind => {
            let mut rng = SimRng::new(seed, AGENT_STREAM);
            let speed = rng.uniform(r.agent_speed[0], r.agent_speed[1]);
            let altitude = rng.uniform(r.agent_altitude[0], r.agent_altitude[1]);
            let heading = rng.uniform(r.agent_heading_deg[0], r.agent_heading_deg[1]).to_radians();
            let blue = AircraftStateF64::level(Vec3F64::new(0.0, 0.0, -altitude), heading, speed, 1.0, mass);
            let launches = (0..kind.threat_count() as u64)
                .map(|i| {
                    let mut rng = SimRng::new(seed, MISSILE_STREAM_BASE + i);
                    let azimuth = rng.uniform(0.0, std::f64::consts::TAU);
                    let distance = rng.uniform(r.firing_distance[0], r.firing_distance[1]);
                    let launch_alt = rng.uniform(r.launch_altitude[0], r.launch_altitude[1]);
                    let speed = rng.uniform(r.launch_speed[0], r.launch_speed[1]);
                    let dh = launch_alt - altitude;
                    let horizontal = (distance * distance - dh * dh).sqrt();
                    LaunchSample {
                        position: Vec3F64::new(horizontal * azimuth.cos(), horizontal * azimuth.sin(), -launch_alt),
                        speed,
                    }
                })
                .collect();
            InitialConditions { blue, red: None, launches }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let cfg = ScenarioConfig::for_kind(ScenarioKind::Evade2);
        assert_eq!(sample_initial_conditions(3, &cfg, 9000.0), sample_initial_conditions(3, &cfg, 9000.0));
        assert_ne!(sample_initial_conditions(3, &cfg, 9000.0), sample_initial_conditions(4, &cfg, 9000.0));
    }

    #[test]
    fn second_threat_does_not_perturb_the_first() {
        let one = sample_initial_conditions(11, &ScenarioConfig::for_kind(ScenarioKind::Evade1), 9000.0);
        let two = sample_initial_conditions(11, &ScenarioConfig::for_kind(ScenarioKind::Evade2), 9000.0);
        assert_eq!(one.blue, two.blue);
        assert_eq!(one.launches[0], two.launches[0]);
    }

    #[test]
    fn firing_distance_is_slant_range() {
        let cfg = ScenarioConfig::for_kind(ScenarioKind::Evade1);
        for seed in 0..200 {
            let ic = sample_initial_conditions(seed, &cfg, 9000.0);
            let d = (ic.launches[0].position - ic.blue.position).norm();
            assert!((40_000.0 - 1e-6..=80_000.0 + 1e-6).contains(&d), "{d}");
        }
    }

    #[test]
    fn dogfight_start_is_fixed() {
        let cfg = ScenarioConfig::for_kind(ScenarioKind::Dogfight);
        let a = sample_initial_conditions(1, &cfg, 9000.0);
        assert_eq!(a, sample_initial_conditions(999, &cfg, 9000.0));
        let red = a.red.unwrap();
        assert_eq!((red.position - a.blue.position).norm(), 100_000.0);
        assert!(a.launches.is_empty());
    }
}
