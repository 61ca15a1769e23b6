//! International Standard Atmosphere, 0 to 25 km.
//!
//! Layers are piecewise-linear in temperature; pressure follows the
//! barometric formula within each layer and density comes from the ideal
//! gas law. Queries outside the supported altitude band are clamped.

use serde::{Deserialize, Serialize};

use crate::scalar::{c, Scalar, G0};

/// Lowest supported geopotential altitude, m.
pub const MIN_ALTITUDE: f64 = 0.0;
/// Highest supported geopotential altitude, m.
pub const MAX_ALTITUDE: f64 = 25_000.0;

/// Specific gas constant of dry air, J/(kg·K).
pub const GAS_CONSTANT_AIR: f64 = 287.052_87;
/// Ratio of specific heats for air.
pub const HEAT_CAPACITY_RATIO: f64 = 1.4;

/// One atmospheric layer: base altitude (m) and temperature lapse (K/m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer<T> {
    pub base_altitude: T,
    pub lapse_rate: T,
}

/// Number of temperature layers covering 0 to 25 km.
pub const LAYERS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atmosphere<T> {
    pub sea_level_temperature: T,
    pub sea_level_pressure: T,
    /// Ordered by increasing base altitude; the first layer starts at 0.
    pub layers: [Layer<T>; LAYERS],
    /// (temperature, pressure) at each layer base.
    bases: [(T, T); LAYERS],
}

impl<T: Scalar> Atmosphere<T> {
    /// The standard troposphere, tropopause and lower stratosphere.
    pub fn standard() -> Self {
        Self::new(
            c(288.15),
            c(101_325.0),
            [
                Layer { base_altitude: c(0.0), lapse_rate: c(-0.0065) },
                Layer { base_altitude: c(11_000.0), lapse_rate: c(0.0) },
                Layer { base_altitude: c(20_000.0), lapse_rate: c(0.001) },
            ],
        )
    }

    pub fn new(sea_level_temperature: T, sea_level_pressure: T, layers: [Layer<T>; LAYERS]) -> Self {
        let mut bases = [(sea_level_temperature, sea_level_pressure); LAYERS];
        for i in 1..LAYERS {
            let dh = layers[i].base_altitude - layers[i - 1].base_altitude;
            let (t, p) = bases[i - 1];
            bases[i] = Self::propagate(t, p, layers[i - 1].lapse_rate, dh);
        }
        Self { sea_level_temperature, sea_level_pressure, layers, bases }
    }

    fn propagate(t_base: T, p_base: T, lapse: T, dh: T) -> (T, T) {
        let g = c::<T>(G0);
        let r = c::<T>(GAS_CONSTANT_AIR);
        if lapse == T::zero() {
            (t_base, p_base * (-g * dh / (r * t_base)).exp())
        } else {
            let t = t_base + lapse * dh;
            (t, p_base * (t / t_base).powf(-g / (lapse * r)))
        }
    }

    /// Density at the sea-level datum, kg/m³.
    pub fn sea_level_density(&self) -> T {
        self.sea_level_pressure / (c::<T>(GAS_CONSTANT_AIR) * self.sea_level_temperature)
    }

    /// Whether `h` lies outside the supported band and will be clamped.
    pub fn is_clamped(h: T) -> bool {
        !(h >= c(MIN_ALTITUDE) && h <= c(MAX_ALTITUDE))
    }

    fn clamp_altitude(h: T) -> T {
        if h.is_nan() {
            return T::zero();
        }
        h.clamp_to(c(MIN_ALTITUDE), c(MAX_ALTITUDE))
    }

    /// Temperature (K) and pressure (Pa) at altitude `h` (m).
    pub fn temperature_pressure(&self, h: T) -> (T, T) {
        let h = Self::clamp_altitude(h);
        let idx = self.layers.iter().rposition(|l| h >= l.base_altitude).unwrap_or(0);
        let layer = &self.layers[idx];
        let (tb, pb) = self.bases[idx];
        Self::propagate(tb, pb, layer.lapse_rate, h - layer.base_altitude)
    }

    pub fn temperature(&self, h: T) -> T {
        self.temperature_pressure(h).0
    }

    /// Air density in kg/m³.
    pub fn density(&self, h: T) -> T {
        let (t, p) = self.temperature_pressure(h);
        p / (c::<T>(GAS_CONSTANT_AIR) * t)
    }

    /// Density plus a flag telling whether the altitude had to be clamped.
    pub fn density_checked(&self, h: T) -> (T, bool) {
        (self.density(h), Self::is_clamped(h))
    }

    pub fn speed_of_sound(&self, h: T) -> T {
        (c::<T>(HEAT_CAPACITY_RATIO) * c::<T>(GAS_CONSTANT_AIR) * self.temperature(h)).sqrt()
    }

    pub fn mach(&self, speed: T, h: T) -> T {
        speed / self.speed_of_sound(h)
    }
}

/// Standard-atmosphere density at `h` metres.
pub fn isa_density<T: Scalar>(h: T) -> T {
    Atmosphere::standard().density(h)
}

/// Mach number of `speed` m/s at altitude `h` in the standard atmosphere.
pub fn mach<T: Scalar>(speed: T, h: T) -> T {
    Atmosphere::standard().mach(speed, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Closed-form tropospheric barometric formula, written out longhand.
    fn troposphere_density(h: f64) -> f64 {
        let t = 288.15 - 0.0065 * h;
        let p = 101_325.0 * (t / 288.15).powf(9.80665 / (0.0065 * 287.05287));
        p / (287.05287 * t)
    }

    #[test]
    fn sea_level_density_is_defining_constant() {
        assert!((isa_density(0.0_f64) - 1.225).abs() < 1e-4);
        assert!((Atmosphere::<f64>::standard().sea_level_density() - 1.225).abs() < 1e-4);
    }

    #[test]
    fn tropopause_density_matches_barometric_formula() {
        let expected = troposphere_density(11_000.0);
        assert!((expected - 0.364).abs() < 1e-3);
        assert!((isa_density(11_000.0_f64) - expected).abs() < 1e-9);
        assert!((isa_density(11_000.0_f64) - 0.364).abs() < 1e-3);
    }

    #[test]
    fn continuous_at_layer_boundaries() {
        for hb in [11_000.0_f64, 20_000.0] {
            let below = isa_density(hb - 1e-6);
            let above = isa_density(hb + 1e-6);
            assert!((below - above).abs() < 1e-9, "jump at {hb}");
        }
    }

    #[test]
    fn mid_troposphere_is_between_endpoints() {
        let d5 = isa_density(5_000.0_f64);
        assert!(d5 < isa_density(0.0) && d5 > isa_density(11_000.0));
    }

    #[test]
    fn strictly_decreasing_up_to_twenty_km() {
        let atm = Atmosphere::<f64>::standard();
        let mut prev = atm.density(0.0);
        for i in 1..=2000 {
            let d = atm.density(i as f64 * 10.0);
            assert!(d > 0.0 && d < prev);
            prev = d;
        }
    }

    #[test]
    fn out_of_range_is_clamped_and_flagged() {
        let atm = Atmosphere::<f64>::standard();
        assert_eq!(atm.density_checked(-50.0), (atm.density(0.0), true));
        assert_eq!(atm.density_checked(30_000.0), (atm.density(25_000.0), true));
        assert!(!atm.density_checked(100.0).1);
    }

    #[test]
    fn mach_examples() {
        assert!((mach(340.29_f64, 0.0) - 1.0).abs() < 1e-4);
        assert_eq!(mach(0.0_f64, 7_000.0), 0.0);
        // a(10 km) = sqrt(1.4 · 287.05287 · 223.15) = 299.463 m/s
        let a10 = (1.4_f64 * 287.05287 * 223.15).sqrt();
        assert!((mach(1360.0_f64, 10_000.0) - 1360.0 / a10).abs() < 1e-9);
        assert!((mach(1360.0_f64, 10_000.0) - 4.54).abs() < 1e-2);
    }

    #[test]
    fn single_precision_agrees() {
        let d32 = isa_density(8_000.0_f32) as f64;
        assert!((d32 - isa_density(8_000.0_f64)).abs() < 1e-5);
    }
}
