//! Proportional navigation.

use super::MissileState;
use crate::airframe::AircraftState;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vec3::Vec3;

/// Line-of-sight angular velocity, `(r × v_rel) / (r · r)`, where `r` is
/// target minus missile position and `v_rel` target minus missile velocity.
pub fn los_rate<T: Scalar>(relative_position: &Vec3<T>, relative_velocity: &Vec3<T>) -> Result<Vec3<T>> {
    let r2 = relative_position.norm_squared();
    if !(r2 > T::zero()) {
        return Err(Error::TargetCoincident);
    }
    Ok(relative_position.cross(relative_velocity) / r2)
}

/// Vector proportional navigation: `N · Ω × v_missile`, perpendicular to the
/// missile velocity, scaled down to `max_accel` if it exceeds it.
pub fn proportional_navigation<T: Scalar>(
    relative_position: &Vec3<T>,
    relative_velocity: &Vec3<T>,
    missile_velocity: &Vec3<T>,
    navigation_constant: T,
    max_accel: T,
) -> Result<Vec3<T>> {
    let omega = los_rate(relative_position, relative_velocity)?;
    let a = omega.cross(missile_velocity) * navigation_constant;
    let mag = a.norm();
    Ok(if mag > max_accel { a * (max_accel / mag) } else { a })
}

/// PN command for `missile` chasing `target`, clamped to `max_accel`.
pub fn pn_lateral_accel<T: Scalar>(
    missile: &MissileState<T>,
    target: &AircraftState<T>,
    navigation_constant: T,
    max_accel: T,
) -> Result<Vec3<T>> {
    proportional_navigation(
        &(target.position - missile.position),
        &(target.velocity - missile.velocity),
        &missile.velocity,
        navigation_constant,
        max_accel,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn receding_along_los_needs_no_correction() {
        let r = Vec3::new(10_000.0, 0.0, 0.0);
        let vm = Vec3::new(900.0, 0.0, 0.0);
        let vt = Vec3::new(300.0, 0.0, 0.0);
        let a = proportional_navigation(&r, &(vt - vm), &vm, 4.0, 1e9).unwrap();
        assert_eq!(a, Vec3::zero());
    }

    #[test]
    fn linear_in_navigation_constant() {
        let r = Vec3::new(20_000.0_f64, 3_000.0, -500.0);
        let vm = Vec3::new(1_000.0, 50.0, 10.0);
        let vt = Vec3::new(-200.0, 250.0, 0.0);
        let a2 = proportional_navigation(&r, &(vt - vm), &vm, 2.0, 1e9).unwrap();
        let a4 = proportional_navigation(&r, &(vt - vm), &vm, 4.0, 1e9).unwrap();
        assert!((a4.norm() - 2.0 * a2.norm()).abs() < 1e-12 * a4.norm());
    }

    #[test]
    fn clamp_preserves_direction() {
        let r = Vec3::new(2_000.0_f64, 0.0, 0.0);
        let vm = Vec3::new(1_000.0, 0.0, 0.0);
        let vt = Vec3::new(0.0, 400.0, 0.0);
        let free = proportional_navigation(&r, &(vt - vm), &vm, 4.0, 1e9).unwrap();
        let clamped = proportional_navigation(&r, &(vt - vm), &vm, 4.0, 100.0).unwrap();
        assert!((clamped.norm() - 100.0).abs() < 1e-9);
        assert!((clamped.cross(&free)).norm() < 1e-6 * free.norm());
    }

    #[test]
    fn coincident_target_is_an_error() {
        let z = Vec3::<f64>::zero();
        assert!(matches!(
            proportional_navigation(&z, &Vec3::new(1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0), 4.0, 1.0),
            Err(Error::TargetCoincident)
        ));
    }
}
