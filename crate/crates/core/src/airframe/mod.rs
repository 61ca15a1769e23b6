//! Point-mass aircraft: state, configuration and the autopilot-level
//! command interface (set heading, set altitude, set throttle).

mod autopilot;
mod dynamics;

use serde::{Deserialize, Serialize};

use crate::angle::wrap_two_pi;
use crate::atmosphere::Atmosphere;
use crate::integrate::Integrator;
use crate::scalar::{c, Scalar};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AircraftState<T> {
    /// North/east/down position, m.
    pub position: Vec3<T>,
    /// North/east/down velocity, m/s.
    pub velocity: Vec3<T>,
    /// Compass heading in `[0, 2π)`.
    pub heading: T,
    pub bank: T,
    pub throttle: T,
    pub mass: T,
    pub alive: bool,
}

impl<T: Scalar> AircraftState<T> {
    /// Wings-level, constant-altitude state.
    pub fn level(position: Vec3<T>, heading: T, speed: T, throttle: T, mass: T) -> Self {
        let heading = wrap_two_pi(heading);
        Self {
            position,
            velocity: Vec3::new(speed * heading.cos(), speed * heading.sin(), T::zero()),
            heading,
            bank: T::zero(),
            throttle,
            mass,
            alive: true,
        }
    }

    pub fn airspeed(&self) -> T {
        self.velocity.norm()
    }

    /// Positive when descending.
    pub fn down_velocity(&self) -> T {
        self.velocity.z
    }

    pub fn climb_rate(&self) -> T {
        -self.velocity.z
    }

    pub fn altitude(&self) -> T {
        -self.position.z
    }
}

/// Autopilot targets: what the pilot (or agent) asks for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutopilotSetpoints<T> {
    /// Radians, any value; wrapped when used.
    pub heading: T,
    pub altitude: T,
    pub throttle: T,
}

impl<T: Scalar> AutopilotSetpoints<T> {
    /// Setpoints that keep flying the current state's heading and altitude.
    pub fn hold(state: &AircraftState<T>, throttle: T) -> Self {
        Self { heading: state.heading, altitude: state.altitude(), throttle }
    }

    /// Forces the setpoints into `[0, ceiling]` and `[0, 1]`; reports
    /// whether anything changed.
    pub fn clamp(&mut self, ceiling: T) -> bool {
        let heading = wrap_two_pi(self.heading);
        let altitude = self.altitude.clamp_to(T::zero(), ceiling);
        let throttle = self.throttle.clamp_to(T::zero(), T::one());
        let changed = altitude != self.altitude || throttle != self.throttle;
        *self = Self { heading, altitude, throttle };
        changed
    }
}

/// Output of the autopilot and input to the point-mass model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerLoopCommand<T> {
    pub bank: T,
    pub climb_rate: T,
    pub thrust: T,
}

impl<T: Scalar> InnerLoopCommand<T> {
    pub fn level(thrust: T) -> Self {
        Self { bank: T::zero(), climb_rate: T::zero(), thrust }
    }
}

/// Airframe and autopilot constants. Angles are degrees, everything else SI.
///
/// The defaults describe a generic single-engine fighter:
/// * full-afterburner level top speed at 10 km of Mach 1.8 (539 m/s),
/// * level flight at 300 m/s and 10 km needing about 70 % throttle, where the
///   lower 80 % of throttle travel covers dry thrust (43 % of maximum) and the
///   remainder the afterburner.
/// * with an altitude gain of 0.1 /s, altitude errors beyond 1 500 m saturate
///   the ±150 m/s climb-rate limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AirframeParams<T> {
    pub mass: T,
    /// Zero-lift drag coefficient times reference area, m².
    pub drag_area: T,
    /// Induced drag factor divided by reference area, 1/m².
    pub induced_drag_factor: T,
    /// Full-afterburner thrust at `thrust_reference_altitude`, N.
    pub max_thrust: T,
    pub thrust_reference_altitude: T,
    /// Thrust scales with (ρ/ρ_ref)^exponent.
    pub thrust_lapse_exponent: T,
    /// Dry thrust as a fraction of `max_thrust`.
    pub military_thrust_fraction: T,
    /// Throttle position where the afterburner range starts.
    pub afterburner_detent: T,
    pub roll_time_constant: T,
    pub max_roll_rate_deg: T,
    pub climb_time_constant: T,
    pub max_bank_deg: T,
    pub max_load_factor: T,
    pub min_load_factor: T,
    pub max_climb_rate: T,
    pub max_flight_path_deg: T,
    /// Commanded turn rate per unit heading error, 1/s.
    pub heading_gain: T,
    /// Commanded climb rate per metre of altitude error, 1/s.
    pub altitude_gain: T,
    pub stall_speed: T,
    /// Upper edge of the speed envelope, m/s.
    pub max_speed: T,
    /// Highest altitude setpoint accepted, m.
    pub ceiling: T,
    pub integrator: Integrator,
}

impl<T: Scalar> Default for AirframeParams<T> {
    fn default() -> Self {
        Self {
            mass: c(9_000.0),
            drag_area: c(0.488),
            induced_drag_factor: c(0.005_382),
            max_thrust: c(30_014.0),
            thrust_reference_altitude: c(10_000.0),
            thrust_lapse_exponent: c(0.5),
            military_thrust_fraction: c(0.43),
            afterburner_detent: c(0.8),
            roll_time_constant: c(0.5),
            max_roll_rate_deg: c(180.0),
            climb_time_constant: c(2.0),
            max_bank_deg: c(75.0),
            max_load_factor: c(9.0),
            min_load_factor: c(-3.0),
            max_climb_rate: c(150.0),
            max_flight_path_deg: c(60.0),
            heading_gain: c(0.25),
            altitude_gain: c(0.1),
            stall_speed: c(110.0),
            max_speed: c(620.0),
            ceiling: c(15_000.0),
            integrator: Integrator::SemiImplicitEuler,
        }
    }
}

impl<T: Scalar> AirframeParams<T> {
    pub fn cast<U: Scalar>(&self) -> AirframeParams<U> {
        let f = |v: T| U::lit(v.to_f64().unwrap_or(f64::NAN));
        AirframeParams {
            mass: f(self.mass),
            drag_area: f(self.drag_area),
            induced_drag_factor: f(self.induced_drag_factor),
            max_thrust: f(self.max_thrust),
            thrust_reference_altitude: f(self.thrust_reference_altitude),
            thrust_lapse_exponent: f(self.thrust_lapse_exponent),
            military_thrust_fraction: f(self.military_thrust_fraction),
            afterburner_detent: f(self.afterburner_detent),
            roll_time_constant: f(self.roll_time_constant),
            max_roll_rate_deg: f(self.max_roll_rate_deg),
            climb_time_constant: f(self.climb_time_constant),
            max_bank_deg: f(self.max_bank_deg),
            max_load_factor: f(self.max_load_factor),
            min_load_factor: f(self.min_load_factor),
            max_climb_rate: f(self.max_climb_rate),
            max_flight_path_deg: f(self.max_flight_path_deg),
            heading_gain: f(self.heading_gain),
            altitude_gain: f(self.altitude_gain),
            stall_speed: f(self.stall_speed),
            max_speed: f(self.max_speed),
            ceiling: f(self.ceiling),
            integrator: self.integrator,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("mass", self.mass),
            ("drag_area", self.drag_area),
            ("max_thrust", self.max_thrust),
            ("roll_time_constant", self.roll_time_constant),
            ("climb_time_constant", self.climb_time_constant),
            ("max_bank_deg", self.max_bank_deg),
            ("max_climb_rate", self.max_climb_rate),
            ("heading_gain", self.heading_gain),
            ("altitude_gain", self.altitude_gain),
            ("stall_speed", self.stall_speed),
            ("ceiling", self.ceiling),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) {
                return Err(format!("airframe.{name} must be positive"));
            }
        }
        if !(self.afterburner_detent > T::zero() && self.afterburner_detent <= T::one()) {
            return Err("airframe.afterburner_detent must be in (0, 1]".into());
        }
        if !(self.max_load_factor > T::one()) {
            return Err("airframe.max_load_factor must exceed 1".into());
        }
        Ok(())
    }
}

/// Airframe model: parameters plus cached atmosphere terms.
#[derive(Debug, Clone, Copy)]
pub struct Airframe<T> {
    pub params: AirframeParams<T>,
    atmosphere: Atmosphere<T>,
    reference_density: T,
    max_bank: T,
    max_roll_rate: T,
    max_flight_path: T,
}

impl<T: Scalar> Airframe<T> {
    pub fn new(params: AirframeParams<T>) -> Self {
        let atmosphere = Atmosphere::standard();
        Self {
            reference_density: atmosphere.density(params.thrust_reference_altitude),
            atmosphere,
            max_bank: params.max_bank_deg.to_radians(),
            max_roll_rate: params.max_roll_rate_deg.to_radians(),
            max_flight_path: params.max_flight_path_deg.to_radians(),
            params,
        }
    }

    pub fn atmosphere(&self) -> &Atmosphere<T> {
        &self.atmosphere
    }
}

impl<T: Scalar> Default for Airframe<T> {
    fn default() -> Self {
        Self::new(AirframeParams::default())
    }
}

pub use autopilot::autopilot;
pub use dynamics::step_aircraft;
