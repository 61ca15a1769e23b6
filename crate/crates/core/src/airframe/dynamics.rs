use super::{AircraftState, Airframe, InnerLoopCommand};
use crate::angle::wrap_two_pi;
use crate::integrate::Integrator;
use crate::scalar::{c, Scalar, G0};
use crate::vec3::Vec3;

/// Integrated quantities of the point-mass model.
#[derive(Debug, Clone, Copy)]
struct Kinematics<T> {
    position: Vec3<T>,
    speed: T,
    heading: T,
    climb_rate: T,
    bank: T,
}

/// Time derivatives of [`Kinematics`].
#[derive(Debug, Clone, Copy)]
struct Rates<T> {
    position: Vec3<T>,
    speed: T,
    heading: T,
    climb_rate: T,
    bank: T,
}

impl<T: Scalar> Kinematics<T> {
    fn from_state(s: &AircraftState<T>) -> Self {
        Self { position: s.position, speed: s.airspeed(), heading: s.heading, climb_rate: s.climb_rate(), bank: s.bank }
    }

    fn advanced(&self, r: &Rates<T>, h: T) -> Self {
        Self {
            position: self.position + r.position * h,
            speed: self.speed + r.speed * h,
            heading: self.heading + r.heading * h,
            climb_rate: self.climb_rate + r.climb_rate * h,
            bank: self.bank + r.bank * h,
        }
    }

    fn ground_velocity(&self) -> Vec3<T> {
        let horizontal = (self.speed * self.speed - self.climb_rate * self.climb_rate).max(T::zero()).sqrt();
        Vec3::new(horizontal * self.heading.cos(), horizontal * self.heading.sin(), -self.climb_rate)
    }
}

impl<T: Scalar> Airframe<T> {
    /// Thrust fraction of `max_thrust` for a throttle position: linear dry
    /// range up to the detent, then linear afterburner range to 1.
    pub fn thrust_fraction(&self, throttle: T) -> T {
        let p = &self.params;
        let t = throttle.clamp_to(T::zero(), T::one());
        if t <= p.afterburner_detent {
            t / p.afterburner_detent * p.military_thrust_fraction
        } else {
            let ab = (t - p.afterburner_detent) / (T::one() - p.afterburner_detent);
            p.military_thrust_fraction + ab * (T::one() - p.military_thrust_fraction)
        }
    }

    /// Inverse of [`Airframe::thrust_fraction`].
    pub fn throttle_for_fraction(&self, fraction: T) -> T {
        let p = &self.params;
        let f = fraction.clamp_to(T::zero(), T::one());
        if f <= p.military_thrust_fraction {
            f / p.military_thrust_fraction * p.afterburner_detent
        } else {
            p.afterburner_detent
                + (f - p.military_thrust_fraction) / (T::one() - p.military_thrust_fraction)
                    * (T::one() - p.afterburner_detent)
        }
    }

    pub fn thrust(&self, throttle: T, altitude: T) -> T {
        let rho = self.atmosphere.density(altitude);
        self.thrust_fraction(throttle)
            * self.params.max_thrust
            * (rho / self.reference_density).powf(self.params.thrust_lapse_exponent)
    }

    /// Parasitic plus induced drag at load factor squared `n2`, N.
    pub fn drag(&self, speed: T, altitude: T, n2: T) -> T {
        let p = &self.params;
        let rho = self.atmosphere.density(altitude);
        let q = c::<T>(0.5) * rho * speed * speed;
        let weight = p.mass * c(G0);
        let induced = if q > T::zero() { p.induced_drag_factor * n2 * weight * weight / q } else { T::zero() };
        q * p.drag_area + induced
    }

    /// Level, wings-level speed where full-range thrust at `throttle`
    /// balances drag (upper branch), found by bisection.
    pub fn level_trim_speed(&self, throttle: T, altitude: T) -> Option<T> {
        let excess = |v: T| self.thrust(throttle, altitude) - self.drag(v, altitude, T::one());
        let mut lo = self.params.stall_speed;
        let mut hi = c::<T>(1_500.0);
        if excess(lo) <= T::zero() || excess(hi) >= T::zero() {
            return None;
        }
        for _ in 0..200 {
            let mid = (lo + hi) * c(0.5);
            if excess(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo + hi) * c(0.5))
    }

    /// Throttle that holds `speed` in level flight at `altitude`.
    pub fn level_trim_throttle(&self, speed: T, altitude: T) -> Option<T> {
        let full = self.thrust(T::one(), altitude);
        let fraction = self.drag(speed, altitude, T::one()) / full;
        (fraction <= T::one()).then(|| self.throttle_for_fraction(fraction))
    }

    fn rates(&self, k: &Kinematics<T>, cmd: &InnerLoopCommand<T>) -> Rates<T> {
        let p = &self.params;
        let g = c::<T>(G0);
        let speed = k.speed.max(c(1.0));

        let bank_rate = ((cmd.bank - k.bank) / p.roll_time_constant).clamp_to(-self.max_roll_rate, self.max_roll_rate);

        // Vertical acceleration: first-order lag on climb rate, bounded by
        // the load factor left over after the turn.
        let tan_bank = k.bank.tan();
        let n_max = p.max_load_factor;
        let vertical_headroom = (n_max * n_max - tan_bank * tan_bank).max(T::zero()).sqrt();
        let accel_hi = (vertical_headroom - T::one()) * g;
        let accel_lo = (p.min_load_factor - T::one()) * g;
        let vertical_accel =
            ((cmd.climb_rate - k.climb_rate) / p.climb_time_constant).clamp_to(accel_lo, accel_hi.max(accel_lo));

        let n_vertical = T::one() + vertical_accel / g;
        let n2 = tan_bank * tan_bank + n_vertical * n_vertical;
        let altitude = -k.position.z;
        let thrust = self.thrust(cmd.thrust, altitude);
        let drag = self.drag(speed, altitude, n2);
        let speed_rate = (thrust - drag) / p.mass - g * k.climb_rate / speed;

        Rates {
            position: k.ground_velocity(),
            speed: speed_rate,
            heading: g * tan_bank / speed,
            climb_rate: vertical_accel,
            bank: bank_rate,
        }
    }

    /// Advances one fixed step. Dead aircraft are returned unchanged;
    /// reaching the ground kills the aircraft.
    pub fn step(&self, state: &AircraftState<T>, cmd: &InnerLoopCommand<T>, dt: T) -> AircraftState<T> {
        if !state.alive {
            return *state;
        }
        let k0 = Kinematics::from_state(state);
        let mut k = match self.params.integrator {
            Integrator::SemiImplicitEuler => {
                let r = self.rates(&k0, cmd);
                let mut k = Kinematics {
                    position: k0.position,
                    speed: k0.speed + r.speed * dt,
                    heading: k0.heading + r.heading * dt,
                    climb_rate: k0.climb_rate + r.climb_rate * dt,
                    bank: k0.bank + r.bank * dt,
                };
                k.position = k0.position + k.ground_velocity() * dt;
                k
            }
            Integrator::Rk4 => {
                let half = dt * c(0.5);
                let r1 = self.rates(&k0, cmd);
                let r2 = self.rates(&k0.advanced(&r1, half), cmd);
                let r3 = self.rates(&k0.advanced(&r2, half), cmd);
                let r4 = self.rates(&k0.advanced(&r3, dt), cmd);
                let two = c::<T>(2.0);
                let sixth = dt / c(6.0);
                Kinematics {
                    position: k0.position + (r1.position + r2.position * two + r3.position * two + r4.position) * sixth,
                    speed: k0.speed + (r1.speed + two * r2.speed + two * r3.speed + r4.speed) * sixth,
                    heading: k0.heading + (r1.heading + two * r2.heading + two * r3.heading + r4.heading) * sixth,
                    climb_rate: k0.climb_rate
                        + (r1.climb_rate + two * r2.climb_rate + two * r3.climb_rate + r4.climb_rate) * sixth,
                    bank: k0.bank + (r1.bank + two * r2.bank + two * r3.bank + r4.bank) * sixth,
                }
            }
        };
        k.speed = k.speed.max(c(1.0));
        k.climb_rate = k.climb_rate.clamp_to(-k.speed, k.speed);
        k.heading = wrap_two_pi(k.heading);

        let mut next = AircraftState {
            position: k.position,
            velocity: k.ground_velocity(),
            heading: k.heading,
            bank: k.bank,
            throttle: cmd.thrust.clamp_to(T::zero(), T::one()),
            mass: state.mass,
            alive: true,
        };
        if next.position.z >= T::zero() {
            next.position.z = T::zero();
            next.alive = false;
        }
        next
    }
}

/// Free-function form of [`Airframe::step`].
pub fn step_aircraft<T: Scalar>(
    airframe: &Airframe<T>,
    state: &AircraftState<T>,
    cmd: &InnerLoopCommand<T>,
    dt: T,
) -> AircraftState<T> {
    airframe.step(state, cmd, dt)
}
