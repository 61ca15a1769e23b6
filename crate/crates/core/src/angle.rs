//! Compass angle helpers. Headings are radians internally, 0 = north,
//! increasing clockwise (toward east).

use crate::scalar::Scalar;
use crate::vec3::Vec3;

/// Wraps to `[0, 2π)`.
pub fn wrap_two_pi<T: Scalar>(a: T) -> T {
    let tau = T::TAU();
    let mut r = a % tau;
    if r < T::zero() {
        r = r + tau;
    }
    // `r + tau` can round up to exactly tau for tiny negative inputs.
    if r >= tau {
        r = T::zero();
    }
    r
}

/// Wraps to `(-π, π]`.
pub fn wrap_pi<T: Scalar>(a: T) -> T {
    let pi = T::PI();
    let r = wrap_two_pi(a);
    if r > pi {
        r - T::TAU()
    } else {
        r
    }
}

/// Wraps degrees to `[0, 360)`.
pub fn wrap_360<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let mut r = deg % full;
    if r < T::zero() {
        r = r + full;
    }
    if r >= full {
        r = T::zero();
    }
    r
}

/// Compass bearing from `from` to `to` in `[0, 2π)`. Returns `None` when
/// the points are horizontally coincident.
pub fn bearing<T: Scalar>(from: &Vec3<T>, to: &Vec3<T>) -> Option<T> {
    let d = *to - *from;
    if d.x == T::zero() && d.y == T::zero() {
        None
    } else {
        Some(wrap_two_pi(d.y.atan2(d.x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_ranges() {
        assert_eq!(wrap_two_pi(-0.5 * PI), 1.5 * PI);
        assert_eq!(wrap_pi(1.5 * PI), -0.5 * PI);
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
        assert!(wrap_two_pi(-1e-300_f64) < 2.0 * PI);
    }

    #[test]
    fn bearing_east_is_ninety_degrees() {
        let b: f64 = bearing(&Vec3::zero(), &Vec3::new(0.0, 1000.0, -50.0)).unwrap();
        assert!((b.to_degrees() - 90.0).abs() < 1e-12);
        assert!(bearing(&Vec3::new(1.0, 2.0, 3.0), &Vec3::new(1.0, 2.0, -9.0)).is_none());
    }

    #[test]
    fn wrap_degrees() {
        assert!((wrap_360(-90.0_f64) - 270.0).abs() < 1e-9);
        assert!(wrap_360(720.0_f64) < 1e-9);
        assert!(wrap_360(359.999_999_999_999_9_f64) < 360.0);
    }
}
