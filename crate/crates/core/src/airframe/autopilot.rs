use super::{AircraftState, Airframe, AutopilotSetpoints, InnerLoopCommand};
use crate::angle::wrap_pi;
use crate::scalar::{c, Scalar, G0};

impl<T: Scalar> Airframe<T> {
    /// Largest bank the autopilot will command: the configured bank limit
    /// or the bank whose level-turn load factor hits `max_load_factor`.
    pub fn bank_limit(&self) -> T {
        let n = self.params.max_load_factor;
        self.max_bank.min((n * n - T::one()).sqrt().atan())
    }

    /// Climb-rate limit at `speed`: the configured rate or the rate at the
    /// maximum flight-path angle, whichever is smaller.
    pub fn climb_limit(&self, speed: T) -> T {
        self.params.max_climb_rate.min(speed * self.max_flight_path.sin())
    }

    /// Heading and altitude hold. Heading error maps to a commanded turn
    /// rate, realised as the coordinated-turn bank angle; altitude error
    /// maps to a climb rate. Both saturate.
    pub fn autopilot(&self, state: &AircraftState<T>, sp: &AutopilotSetpoints<T>) -> InnerLoopCommand<T> {
        let p = &self.params;
        let g = c::<T>(G0);
        let speed = state.airspeed().max(p.stall_speed);

        let heading_error = wrap_pi(sp.heading - state.heading);
        let turn_rate = p.heading_gain * heading_error;
        let limit = self.bank_limit();
        let bank = (speed * turn_rate / g).atan().clamp_to(-limit, limit);

        let climb_limit = self.climb_limit(speed);
        let mut climb_rate = (p.altitude_gain * (sp.altitude - state.altitude())).clamp_to(-climb_limit, climb_limit);
        if state.airspeed() < p.stall_speed * c(1.15) {
            // Trade altitude for speed near the stall.
            climb_rate = climb_rate.min(T::zero());
        }

        InnerLoopCommand { bank, climb_rate, thrust: sp.throttle.clamp_to(T::zero(), T::one()) }
    }
}

/// Free-function form of [`Airframe::autopilot`].
pub fn autopilot<T: Scalar>(
    airframe: &Airframe<T>,
    state: &AircraftState<T>,
    setpoints: &AutopilotSetpoints<T>,
) -> InnerLoopCommand<T> {
    airframe.autopilot(state, setpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3;

    fn cruise() -> (Airframe<f64>, AircraftState<f64>) {
        let af = Airframe::default();
        let s = AircraftState::level(Vec3::new(0.0, 0.0, -8_000.0), 0.3, 320.0, 1.0, 9_000.0);
        (af, s)
    }

    #[test]
    fn zero_error_is_fixed_point() {
        let (af, s) = cruise();
        let cmd = af.autopilot(&s, &AutopilotSetpoints::hold(&s, 0.7));
        assert_eq!(cmd.bank, 0.0);
        assert_eq!(cmd.climb_rate, 0.0);
        assert_eq!(cmd.thrust, 0.7);
    }

    #[test]
    fn ninety_degree_error_saturates_bank() {
        let (af, s) = cruise();
        let mut sp = AutopilotSetpoints::hold(&s, 1.0);
        sp.heading = s.heading + 90f64.to_radians();
        let cmd = af.autopilot(&s, &sp);
        assert_eq!(cmd.bank, 75f64.to_radians());
        sp.heading = s.heading - 90f64.to_radians();
        assert_eq!(af.autopilot(&s, &sp).bank, -75f64.to_radians());
    }

    #[test]
    fn large_descent_saturates_climb_rate() {
        // Saturation threshold: 150 m/s / 0.1 /s = 1 500 m.
        let (af, s) = cruise();
        let threshold = af.params.max_climb_rate / af.params.altitude_gain;
        assert!((threshold - 1_500.0).abs() < 1e-9);
        let mut sp = AutopilotSetpoints::hold(&s, 1.0);
        sp.altitude = s.altitude() - 2_000.0;
        assert_eq!(af.autopilot(&s, &sp).climb_rate, -150.0);
        sp.altitude = s.altitude() - 1_000.0;
        assert!((af.autopilot(&s, &sp).climb_rate + 100.0).abs() < 1e-9);
    }

    #[test]
    fn commands_are_continuous_in_error() {
        let (af, s) = cruise();
        let mut prev: Option<InnerLoopCommand<f64>> = None;
        for i in -2000..=2000 {
            let e = i as f64 * 1e-3;
            let sp = AutopilotSetpoints { heading: s.heading + e, altitude: s.altitude() + e * 1000.0, throttle: 1.0 };
            let cmd = af.autopilot(&s, &sp);
            if let Some(p) = prev {
                assert!((cmd.bank - p.bank).abs() < 0.02);
                assert!((cmd.climb_rate - p.climb_rate).abs() < 0.2);
            }
            prev = Some(cmd);
        }
    }

    #[test]
    fn bank_never_exceeds_limits() {
        let (af, mut s) = cruise();
        for v in [120.0, 250.0, 600.0] {
            s.velocity = Vec3::new(v, 0.0, 0.0);
            s.heading = 0.0;
            for h in [-3.0, -1.0, 1.0, 3.0] {
                let sp = AutopilotSetpoints { heading: h, altitude: 0.0, throttle: 1.0 };
                let cmd = af.autopilot(&s, &sp);
                assert!(cmd.bank.abs() <= af.bank_limit());
                assert!(cmd.climb_rate.abs() <= af.climb_limit(v));
            }
        }
    }
}
