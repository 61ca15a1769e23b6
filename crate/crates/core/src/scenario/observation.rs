use serde::{Deserialize, Serialize};

use super::ScenarioKind;
use crate::angle::{bearing, wrap_pi};
use crate::engine::World;
use crate::unit::Side;
use crate::Vec3F64;

/// How an entry is scaled into `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// m, divided by 20 km.
    Altitude,
    /// m/s, divided by 600.
    Speed,
    /// m, divided by 100 km.
    Distance,
    /// Degrees in `(-180, 180]`, divided by 180.
    Angle,
    /// Compass degrees, wrapped to `(-180, 180]` then divided by 180.
    Heading,
    /// s, divided by 300.
    Time,
}

impl Norm {
    fn apply(self, x: f64) -> f64 {
        let y = match self {
            Norm::Altitude => x / 20_000.0,
            Norm::Speed => x / 600.0,
            Norm::Distance => x / 100_000.0,
            Norm::Angle => x / 180.0,
            Norm::Heading => wrap_pi(x.to_radians()).to_degrees() / 180.0,
            Norm::Time => x / 300.0,
        };
        y.clamp(-1.0, 1.0)
    }

    fn raw_bounds(self) -> (f64, f64) {
        match self {
            Norm::Altitude => (0.0, 25_000.0),
            Norm::Speed => (0.0, 2000.0),
            Norm::Distance => (0.0, 300_000.0),
            Norm::Angle => (-180.0, 180.0),
            Norm::Heading => (0.0, 360.0),
            Norm::Time => (0.0, 3600.0),
        }
    }
}

/// One observation entry: symbol, unit and scaling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObsField {
    pub name: &'static str,
    pub unit: &'static str,
    pub norm: Norm,
    pub low: f64,
    pub high: f64,
}

type Entry = (&'static str, &'static str, Norm);

const EVADE1: [Entry; 9] = [
    ("h", "m", Norm::Altitude),
    ("v_D", "m/s", Norm::Speed),
    ("v", "m/s", Norm::Speed),
    ("psi", "deg", Norm::Heading),
    ("nu", "m/s", Norm::Speed),
    ("tau", "s", Norm::Time),
    ("eta", "deg", Norm::Angle),
    ("beta", "m", Norm::Altitude),
    ("rho", "m", Norm::Distance),
];

const EVADE2: [Entry; 14] = [
    ("h", "m", Norm::Altitude),
    ("v_D", "m/s", Norm::Speed),
    ("v", "m/s", Norm::Speed),
    ("psi", "deg", Norm::Heading),
    ("nu_M1", "m/s", Norm::Speed),
    ("tau_M1", "s", Norm::Time),
    ("eta_M1", "deg", Norm::Angle),
    ("beta_M1", "m", Norm::Altitude),
    ("rho_M1", "m", Norm::Distance),
    ("nu_M2", "m/s", Norm::Speed),
    ("tau_M2", "s", Norm::Time),
    ("eta_M2", "deg", Norm::Angle),
    ("beta_M2", "m", Norm::Altitude),
    ("rho_M2", "m", Norm::Distance),
];

const DOGFIGHT: [Entry; 11] = [
    ("rho_BR", "m", Norm::Distance),
    ("nu_BR", "deg", Norm::Angle),
    ("v_B", "m/s", Norm::Speed),
    ("h_B", "m", Norm::Altitude),
    ("psi_B", "deg", Norm::Heading),
    ("v_R", "m/s", Norm::Speed),
    ("h_R", "m", Norm::Altitude),
    ("rho_BM0", "m", Norm::Distance),
    ("nu_BM0", "deg", Norm::Angle),
    ("v_M0", "m/s", Norm::Speed),
    ("h_M0", "m", Norm::Altitude),
];

fn entries(kind: ScenarioKind) -> &'static [Entry] {
    match kind {
        ScenarioKind::Evade1 => &EVADE1,
        ScenarioKind::Evade2 => &EVADE2,
        ScenarioKind::Dogfight => &DOGFIGHT,
    }
}

/// Entry names, units and scaling for a scenario's observation vector.
pub fn observation_layout(kind: ScenarioKind) -> Vec<ObsField> {
    entries(kind)
        .iter()
        .map(|&(name, unit, norm)| {
            let (low, high) = norm.raw_bounds();
            ObsField { name, unit, norm, low, high }
        })
        .collect()
}

/// Raw values (SI, angles in degrees) and their `[-1, 1]` scaled twins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
}

/// Angle from `heading` to the bearing of `to`, degrees in `(-180, 180]`;
/// zero when `to` is straight above or below.
fn relative_bearing(from: &Vec3F64, heading: f64, to: &Vec3F64) -> f64 {
    bearing(from, to).map_or(0.0, |b| wrap_pi(b - heading).to_degrees())
}

/// Builds the agent's observation. Threats are described only by where,
/// when and how fast they were launched.
pub fn build_observation(world: &World) -> Observation {
    let blue = &world.blue.state;
    let raw = match world.kind {
        ScenarioKind::Evade1 | ScenarioKind::Evade2 => {
            let mut v = vec![blue.altitude(), blue.down_velocity(), blue.airspeed(), blue.heading.to_degrees()];
            for m in world.threats_to(Side::Blue) {
                let launch = m.state.launch_position;
                v.extend([
                    m.state.launch_speed,
                    (world.time - m.launch_time).max(0.0),
                    relative_bearing(&blue.position, blue.heading, &launch),
                    -launch.z,
                    (launch - blue.position).norm(),
                ]);
            }
            v
        }
        ScenarioKind::Dogfight => {
            let red = &world.red.as_ref().expect("dogfight world without an opponent").state;
            let rho_br = (red.position - blue.position).norm();
            let nu_br = relative_bearing(&blue.position, blue.heading, &red.position);
            let m0 = world
                .threats_to(Side::Blue)
                .filter(|m| m.state.is_active())
                .max_by(|a, b| a.launch_time.total_cmp(&b.launch_time).then(a.id.cmp(&b.id)));
            let missile_block = match m0 {
                Some(m) => {
                    let launch = m.state.launch_position;
                    [
                        (launch - blue.position).norm(),
                        relative_bearing(&blue.position, blue.heading, &launch),
                        m.state.launch_speed,
                        -launch.z,
                    ]
                }
                None => [rho_br, nu_br, red.airspeed(), red.altitude()],
            };
            let mut v = vec![
                rho_br,
                nu_br,
                blue.airspeed(),
                blue.altitude(),
                blue.heading.to_degrees(),
                red.airspeed(),
                red.altitude(),
            ];
            v.extend(missile_block);
            v
        }
    };
    let layout = entries(world.kind);
    debug_assert_eq!(raw.len(), layout.len());
    let normalized = raw.iter().zip(layout).map(|(x, e)| e.2.apply(*x)).collect();
    Observation { raw, normalized }
}
