//! Physical constants and unit-conversion factors.
//!
//! Every frequency-like quantity inside the library is an *angular* rate in
//! rad/s; user-facing layers (config files, CSV headers, report printing)
//! speak cyclic Hz and convert on ingestion/egress.

/// Speed of light used throughout the resonator design pipeline, m/s.
///
/// This is deliberately the rounded design value rather than the CODATA
/// figure: the reference resonator table this library reproduces was
/// generated with c = 3.0e8 m/s, and the exact value misses the tabulated
/// mirror spacings by more than the table's own precision.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// One Debye in C·m.
pub const DEBYE: f64 = 3.335_64e-30;

/// 2π, for cyclic ↔ angular conversions.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Convert a cyclic frequency in Hz to an angular rate in rad/s.
#[inline]
pub fn angular(hz: f64) -> f64 {
    TWO_PI * hz
}

/// Convert an angular rate in rad/s to a cyclic frequency in Hz.
#[inline]
pub fn cyclic(rad_per_s: f64) -> f64 {
    rad_per_s / TWO_PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_cyclic_roundtrip() {
        let f = 5.78109e9;
        assert!((cyclic(angular(f)) - f).abs() / f < 1e-15);
    }

    #[test]
    fn debye_is_si_small() {
        // 1 D ≈ 3.34e-30 C·m; a sign error in the exponent would make this huge.
        assert!(DEBYE > 0.0 && DEBYE < 1e-29);
    }
}
