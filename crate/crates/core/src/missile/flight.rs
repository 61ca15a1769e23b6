use super::guidance::proportional_navigation;
use super::{Missile, MissileRack, MissileState, Outcome, Phase};
use crate::airframe::AircraftState;
use crate::error::Result;
use crate::integrate::Integrator;
use crate::scalar::{c, Scalar, G0};
use crate::unit::UnitId;
use crate::vec3::Vec3;

/// Closest point to the origin on the segment `a → b`.
fn segment_min_distance<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    let d = *b - *a;
    let len2 = d.norm_squared();
    if !(len2 > T::zero()) {
        return a.norm();
    }
    let s = (-a.dot(&d) / len2).clamp_to(T::zero(), T::one());
    (*a + d * s).norm()
}

impl<T: Scalar> Missile<T> {
    pub fn mass(&self, s: &MissileState<T>) -> T {
        let p = &self.params;
        let burned = (s.time_since_launch / p.burn_time).clamp_to(T::zero(), T::one());
        p.launch_mass - (p.launch_mass - p.burnout_mass) * burned
    }

    /// Fires a missile from `shooter` at `target`, pointing the initial
    /// velocity horizontally at the target.
    pub fn launch(
        &self,
        shooter: &AircraftState<T>,
        target: &AircraftState<T>,
        target_id: UnitId,
        rack: &mut MissileRack,
    ) -> Result<MissileState<T>> {
        rack.take()?;
        let relative = target.position - shooter.position;
        let speed = shooter.airspeed();
        let direction = relative
            .horizontal()
            .try_normalize()
            .or_else(|| shooter.velocity.try_normalize())
            .unwrap_or(Vec3::new(T::one(), T::zero(), T::zero()));
        let range = relative.norm();
        Ok(MissileState {
            position: shooter.position,
            velocity: direction * speed,
            phase: Phase::Boost,
            launch_position: shooter.position,
            launch_speed: speed,
            time_since_launch: T::zero(),
            burn_time_remaining: self.params.burn_time,
            target: target_id,
            miss_distance: range,
            outcome: Outcome::Active,
            relative_position: relative,
            step_closest_approach: range,
            opening_time: T::zero(),
        })
    }

    /// Lateral acceleration available at the current dynamic pressure.
    pub fn lateral_limit(&self, s: &MissileState<T>) -> T {
        let rho = self.atmosphere.density(s.altitude());
        let q = c::<T>(0.5) * rho * s.velocity.norm_squared();
        (q * self.params.lift_area / self.mass(s)).min(self.params.max_lateral_accel())
    }

    /// Flight-path command for the boost and climb phases: head for the
    /// target horizontally while closing the cruise-altitude error.
    fn loft_accel(&self, s: &MissileState<T>, target: &AircraftState<T>, unit_v: &Vec3<T>, speed: T) -> Vec3<T> {
        let p = &self.params;
        let horizontal = (target.position - s.position).horizontal().try_normalize().unwrap_or_else(|| {
            unit_v.horizontal().try_normalize().unwrap_or(Vec3::new(T::one(), T::zero(), T::zero()))
        });
        let max_angle = p.max_loft_angle_deg.to_radians();
        let gamma = ((p.cruise_altitude - s.altitude()) / p.loft_length).atan().clamp_to(-max_angle, max_angle);
        let up = Vec3::new(T::zero(), T::zero(), -T::one());
        let desired = (horizontal * gamma.cos() + up * gamma.sin()) * speed;
        ((desired - s.velocity) / p.steering_time_constant).reject_unit(unit_v)
    }

    fn acceleration(
        &self,
        position: &Vec3<T>,
        velocity: &Vec3<T>,
        lateral: &Vec3<T>,
        thrust_accel: T,
        mass: T,
    ) -> Vec3<T> {
        let g = Vec3::new(T::zero(), T::zero(), c(G0));
        let speed = velocity.norm();
        let Some(unit_v) = velocity.try_normalize() else {
            return g + *lateral;
        };
        let rho = self.atmosphere.density(-position.z);
        let q = c::<T>(0.5) * rho * speed * speed;
        let lift = mass * lateral.norm();
        let induced = if q > T::zero() { self.params.induced_drag_factor * lift * lift / q } else { T::zero() };
        let drag = q * self.params.drag_area + induced;
        unit_v * (thrust_accel - drag / mass) + g + *lateral
    }

    /// Advances the missile by `dt` against `target` (the target's state at
    /// the end of the same tick). Terminated missiles are returned unchanged.
    pub fn step(&self, s: &MissileState<T>, target: &AircraftState<T>, dt: T) -> MissileState<T> {
        if !s.is_active() {
            return *s;
        }
        let p = &self.params;
        let speed = s.speed();
        let unit_v = s.velocity.try_normalize().unwrap_or(Vec3::new(T::one(), T::zero(), T::zero()));
        let mass = self.mass(s);

        let command = match s.phase {
            Phase::Boost | Phase::Climb => self.loft_accel(s, target, &unit_v, speed),
            Phase::Guided => proportional_navigation(
                &(target.position - s.position),
                &(target.velocity - s.velocity),
                &s.velocity,
                p.navigation_constant,
                p.max_lateral_accel(),
            )
            .unwrap_or_else(|_| Vec3::zero()),
            Phase::Terminated => Vec3::zero(),
        };
        let gravity_comp = -Vec3::new(T::zero(), T::zero(), c(G0)).reject_unit(&unit_v);
        let mut lateral = command + gravity_comp;
        let limit = self.lateral_limit(s);
        let lat_mag = lateral.norm();
        if lat_mag > limit {
            lateral = lateral * (limit / lat_mag);
        }

        let burn = s.burn_time_remaining.min(dt).max(T::zero());
        let thrust_accel = if dt > T::zero() { p.boost_accel * burn / dt } else { T::zero() };

        let (position, velocity) = match p.integrator {
            Integrator::SemiImplicitEuler => {
                let a = self.acceleration(&s.position, &s.velocity, &lateral, thrust_accel, mass);
                let v = s.velocity + a * dt;
                (s.position + v * dt, v)
            }
            Integrator::Rk4 => {
                let f = |x: &Vec3<T>, v: &Vec3<T>| self.acceleration(x, v, &lateral, thrust_accel, mass);
                let half = dt * c(0.5);
                let (x1, v1) = (s.position, s.velocity);
                let a1 = f(&x1, &v1);
                let (x2, v2) = (x1 + v1 * half, v1 + a1 * half);
                let a2 = f(&x2, &v2);
                let (x3, v3) = (x1 + v2 * half, v1 + a2 * half);
                let a3 = f(&x3, &v3);
                let (x4, v4) = (x1 + v3 * dt, v1 + a3 * dt);
                let a4 = f(&x4, &v4);
                let two = c::<T>(2.0);
                let sixth = dt / c(6.0);
                (x1 + (v1 + v2 * two + v3 * two + v4) * sixth, v1 + (a1 + a2 * two + a3 * two + a4) * sixth)
            }
        };

        let mut next = *s;
        next.position = position;
        next.velocity = velocity;
        next.time_since_launch = s.time_since_launch + dt;
        next.burn_time_remaining = (s.burn_time_remaining - dt).max(T::zero());
        if next.burn_time_remaining < c(1e-9) {
            next.burn_time_remaining = T::zero();
        }

        let relative = target.position - position;
        let range = relative.norm();
        next.step_closest_approach = segment_min_distance(&s.relative_position, &relative);
        next.miss_distance = s.miss_distance.min(next.step_closest_approach);
        next.opening_time = if range > s.range() { s.opening_time + dt } else { T::zero() };
        next.relative_position = relative;

        if next.phase == Phase::Boost && next.burned_out() {
            next.phase = Phase::Climb;
        }
        if next.phase == Phase::Climb
            && ((next.altitude() - p.cruise_altitude).abs() < p.guidance_altitude_window
                || range < p.guidance_override_range)
        {
            next.phase = Phase::Guided;
        }
        next
    }

    /// Terminal classification of the current state; does not modify it.
    pub fn check_terminal(&self, s: &MissileState<T>, target: &AircraftState<T>) -> Outcome {
        if !s.is_active() {
            return s.outcome;
        }
        if s.step_closest_approach < self.params.hit_radius {
            Outcome::Hit
        } else if s.altitude() <= T::zero()
            || (s.burned_out() && s.speed() < target.airspeed() && s.opening_time >= self.params.giveup_time)
        {
            Outcome::Expired
        } else {
            Outcome::Active
        }
    }

    /// Applies [`Missile::check_terminal`]: terminal missiles switch to the
    /// `Terminated` phase and a hit zeroes the miss distance.
    pub fn resolve(&self, s: &mut MissileState<T>, target: &AircraftState<T>) -> Outcome {
        let outcome = self.check_terminal(s, target);
        if s.is_active() && outcome != Outcome::Active {
            s.outcome = outcome;
            s.phase = Phase::Terminated;
            if outcome == Outcome::Hit {
                s.miss_distance = T::zero();
            }
        }
        outcome
    }
}

pub fn launch_missile<T: Scalar>(
    model: &Missile<T>,
    shooter: &AircraftState<T>,
    target: &AircraftState<T>,
    target_id: UnitId,
    rack: &mut MissileRack,
) -> Result<MissileState<T>> {
    model.launch(shooter, target, target_id, rack)
}

pub fn step_missile<T: Scalar>(
    model: &Missile<T>,
    missile: &MissileState<T>,
    target: &AircraftState<T>,
    dt: T,
) -> MissileState<T> {
    model.step(missile, target, dt)
}

pub fn check_terminal<T: Scalar>(model: &Missile<T>, missile: &MissileState<T>, target: &AircraftState<T>) -> Outcome {
    model.check_terminal(missile, target)
}
