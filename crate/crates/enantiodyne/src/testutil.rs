//! Shared fixtures for the in-crate test suites.
//!
//! The constants are the q = 0 reference design (R_m = 40 mm cavity tuned
//! to the |2⟩↔|3⟩ transition); the cavity tests pin them down
//! independently from the geometry pipeline.

use crate::constants::{angular, TWO_PI};
use crate::dynamics::{DissipationParams, DriveConfig, SampleConfig, Scenario};
use crate::integrator::IntegratorOptions;

/// Single-photon coupling g₀ of the q = 0 design (rad/s).
pub(crate) const G0: f64 = TWO_PI * 3.679682;
/// Cavity decay rate κ of the q = 0 design (rad/s).
pub(crate) const KAPPA: f64 = TWO_PI * 121.68636;
/// Waist w₀ of the q = 0 design (m).
pub(crate) const W0: f64 = 11.59407e-3;

/// A standard transit scenario on the q = 0 design: Ȳ₀ = −4w₀, resonant
/// probe, no dissipation, default integrator tolerances.
pub(crate) fn scenario(n_m: f64, lambda: f64, v: f64, delta_m_hz: f64, sigma_z0: f64) -> Scenario {
    Scenario {
        drive: DriveConfig::from_lambda(lambda, angular(delta_m_hz), 0.0, KAPPA, G0),
        sample: SampleConfig {
            n_m,
            v,
            ybar0: -4.0 * W0,
            trapped: false,
            sigma_z0,
            l_sample: 0.1 * W0,
        },
        dissipation: DissipationParams::default(),
        g0: G0,
        w0: W0,
        kappa: KAPPA,
        options: IntegratorOptions::default(),
    }
}
