//! Long-range missile: boost, loft to cruise altitude, proportional
//! navigation, and hit/expiry resolution with running miss distance.

mod flight;
mod guidance;

use serde::{Deserialize, Serialize};

use crate::atmosphere::Atmosphere;
use crate::error::{Error, Result};
use crate::integrate::Integrator;
use crate::scalar::{c, Scalar, G0};
use crate::unit::UnitId;
use crate::vec3::Vec3;

pub use flight::{check_terminal, launch_missile, step_missile};
pub use guidance::{los_rate, pn_lateral_accel, proportional_navigation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Boost,
    Climb,
    Guided,
    Terminated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Active,
    Hit,
    Expired,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissileState<T> {
    pub position: Vec3<T>,
    pub velocity: Vec3<T>,
    pub phase: Phase,
    pub launch_position: Vec3<T>,
    /// Shooter airspeed at launch, m/s.
    pub launch_speed: T,
    pub time_since_launch: T,
    pub burn_time_remaining: T,
    pub target: UnitId,
    /// Smallest separation from the target seen so far, m.
    pub miss_distance: T,
    pub outcome: Outcome,
    /// Target minus missile position at the end of the last step.
    pub relative_position: Vec3<T>,
    /// Closest approach within the last step, m.
    pub step_closest_approach: T,
    /// Seconds the range has been strictly increasing without interruption.
    pub opening_time: T,
}

impl<T: Scalar> MissileState<T> {
    pub fn speed(&self) -> T {
        self.velocity.norm()
    }

    pub fn altitude(&self) -> T {
        -self.position.z
    }

    pub fn launch_altitude(&self) -> T {
        -self.launch_position.z
    }

    pub fn range(&self) -> T {
        self.relative_position.norm()
    }

    pub fn is_active(&self) -> bool {
        self.outcome == Outcome::Active
    }

    pub fn burned_out(&self) -> bool {
        self.burn_time_remaining <= T::zero()
    }
}

/// Missiles carried by one shooter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissileRack {
    pub remaining: u32,
}

impl MissileRack {
    pub fn new(count: u32) -> Self {
        Self { remaining: count }
    }

    pub fn take(&mut self) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::OutOfWeapons);
        }
        self.remaining -= 1;
        Ok(())
    }
}

/// Missile constants. Angles in degrees, everything else SI.
///
/// The boost acceleration is sized so a launch at 300 m/s from 10 km
/// burns out close to Mach 4 near the 12 km cruise altitude. The drag area
/// gives a level unpowered glide at 12 km from Mach 4 down to 300 m/s of
/// more than 60 km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissileParams<T> {
    pub launch_mass: T,
    pub burnout_mass: T,
    pub burn_time: T,
    /// Axial thrust acceleration while the motor burns, m/s².
    pub boost_accel: T,
    /// Drag coefficient times reference area, m².
    pub drag_area: T,
    /// Induced drag factor over reference area, 1/m².
    pub induced_drag_factor: T,
    /// Lift capability: lateral force per unit dynamic pressure, m².
    pub lift_area: T,
    pub max_lateral_g: T,
    pub navigation_constant: T,
    pub hit_radius: T,
    /// Seconds of opening range (after burnout, slower than the target)
    /// before the missile gives up.
    pub giveup_time: T,
    pub cruise_altitude: T,
    /// PN engages once within this height band of the cruise altitude...
    pub guidance_altitude_window: T,
    /// ...or once the range drops below this.
    pub guidance_override_range: T,
    /// Horizontal distance over which the loft closes the altitude error.
    pub loft_length: T,
    pub max_loft_angle_deg: T,
    /// Time constant of the velocity-direction tracking before PN, s.
    pub steering_time_constant: T,
    pub integrator: Integrator,
}

impl<T: Scalar> Default for MissileParams<T> {
    fn default() -> Self {
        Self {
            launch_mass: c(160.0),
            burnout_mass: c(110.0),
            burn_time: c(10.0),
            boost_accel: c(95.0),
            drag_area: c(0.005),
            induced_drag_factor: c(0.0),
            lift_area: c(0.2),
            max_lateral_g: c(40.0),
            navigation_constant: c(4.0),
            hit_radius: c(100.0),
            giveup_time: c(10.0),
            cruise_altitude: c(12_000.0),
            guidance_altitude_window: c(500.0),
            guidance_override_range: c(20_000.0),
            loft_length: c(5_000.0),
            max_loft_angle_deg: c(30.0),
            steering_time_constant: c(1.0),
            integrator: Integrator::SemiImplicitEuler,
        }
    }
}

impl<T: Scalar> MissileParams<T> {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("launch_mass", self.launch_mass),
            ("burnout_mass", self.burnout_mass),
            ("burn_time", self.burn_time),
            ("drag_area", self.drag_area),
            ("lift_area", self.lift_area),
            ("max_lateral_g", self.max_lateral_g),
            ("giveup_time", self.giveup_time),
            ("loft_length", self.loft_length),
            ("steering_time_constant", self.steering_time_constant),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) {
                return Err(format!("missile.{name} must be positive"));
            }
        }
        if self.burnout_mass > self.launch_mass {
            return Err("missile.burnout_mass exceeds launch_mass".into());
        }
        if !(self.navigation_constant >= c(3.0) && self.navigation_constant <= c(5.0)) {
            return Err("missile.navigation_constant must be within [3, 5]".into());
        }
        if self.hit_radius < T::zero() {
            return Err("missile.hit_radius must be non-negative".into());
        }
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> MissileParams<U> {
        let f = |v: T| U::lit(v.to_f64().unwrap_or(f64::NAN));
        MissileParams {
            launch_mass: f(self.launch_mass),
            burnout_mass: f(self.burnout_mass),
            burn_time: f(self.burn_time),
            boost_accel: f(self.boost_accel),
            drag_area: f(self.drag_area),
            induced_drag_factor: f(self.induced_drag_factor),
            lift_area: f(self.lift_area),
            max_lateral_g: f(self.max_lateral_g),
            navigation_constant: f(self.navigation_constant),
            hit_radius: f(self.hit_radius),
            giveup_time: f(self.giveup_time),
            cruise_altitude: f(self.cruise_altitude),
            guidance_altitude_window: f(self.guidance_altitude_window),
            guidance_override_range: f(self.guidance_override_range),
            loft_length: f(self.loft_length),
            max_loft_angle_deg: f(self.max_loft_angle_deg),
            steering_time_constant: f(self.steering_time_constant),
            integrator: self.integrator,
        }
    }

    pub fn max_lateral_accel(&self) -> T {
        self.max_lateral_g * c(G0)
    }
}

/// Missile model: parameters plus cached atmosphere.
#[derive(Debug, Clone, Copy)]
pub struct Missile<T> {
    pub params: MissileParams<T>,
    atmosphere: Atmosphere<T>,
}

impl<T: Scalar> Missile<T> {
    pub fn new(params: MissileParams<T>) -> Self {
        Self { params, atmosphere: Atmosphere::standard() }
    }

    pub fn atmosphere(&self) -> &Atmosphere<T> {
        &self.atmosphere
    }
}

impl<T: Scalar> Default for Missile<T> {
    fn default() -> Self {
        Self::new(MissileParams::default())
    }
}
