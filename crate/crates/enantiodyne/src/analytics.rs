//! Closed-form dispersive-limit results.
//!
//! These expressions serve as analytic cross-checks for the numerical
//! pipeline: the enantioselective phase shift picked up by the cavity
//! field, the single-shot SNR of a moving sample and its detection-window
//! optimum, the simplified SNR with its cavity figure of merit, the
//! trapped-molecule SNR with the critical trapping time, and the
//! dipole–dipole / free-space-decay bounds that justify neglecting
//! molecule–molecule interactions.
//!
//! All rates are angular (rad/s); the error function comes from
//! [`crate::special`] at 1e-12 accuracy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special::erf;

/// Inputs of the dispersive-limit formulas.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DispersiveInputs {
    /// Single-photon coupling g₀ (rad/s).
    pub g0: f64,
    /// Cavity decay rate κ (rad/s).
    pub kappa: f64,
    /// Molecule–probe detuning Δ_m (rad/s).
    pub delta_m: f64,
    /// Molecule number N_m.
    pub n_m: f64,
    /// Cavity waist w₀ (m).
    pub w0: f64,
    /// Sample speed v (m/s).
    pub v: f64,
    /// Drive strength ratio λ.
    pub lambda: f64,
    /// Detection half-window in units of τ.
    pub m_y: f64,
    /// Initial inversion σᶻ(0).
    pub sigma_z0: f64,
}

impl DispersiveInputs {
    /// Whether the dispersive closed forms are trustworthy here: a weak
    /// drive (λ ≤ 0.1) and a collective pull small against the cavity
    /// linewidth (|ḡ²N_m/Δ_m| < 0.1κ at the peak coupling ḡ = g₀/2).
    pub fn is_dispersive(&self) -> bool {
        if self.delta_m == 0.0 {
            return false;
        }
        let gbar = 0.5 * self.g0;
        let pull = (gbar * gbar * self.n_m / self.delta_m).abs();
        self.lambda <= 0.1 && pull < 0.1 * self.kappa
    }
}

/// Quasi-steady cavity phase φ = −σᶻ(0)·ḡ²N_m/(κΔ_m) (rad) at
/// instantaneous coupling ḡ.  Opposite hypotheses give opposite phases.
pub fn dispersive_phase(gbar: f64, n_m: f64, kappa: f64, delta_m: f64, sigma_z0: f64) -> f64 {
    -sigma_z0 * gbar * gbar * n_m / (kappa * delta_m)
}

/// Single-shot SNR of a moving sample,
/// SNR = √(κN₀w₀π)/(4√(2vM_Y)) · Erf(√2·M_Y) · g₀²N_m/(κ|Δ_m|),
/// with the empty-cavity photon number N₀ = λ·4Δ_m²/g₀².
pub fn snr_moving(inputs: &DispersiveInputs) -> f64 {
    if inputs.n_m == 0.0 {
        return 0.0;
    }
    let n0 = inputs.lambda * critical_photon_number(inputs.delta_m, inputs.g0);
    (inputs.kappa * n0 * inputs.w0 * PI).sqrt() / (4.0 * (2.0 * inputs.v * inputs.m_y).sqrt())
        * erf(std::f64::consts::SQRT_2 * inputs.m_y)
        * inputs.g0 * inputs.g0 * inputs.n_m
        / (inputs.kappa * inputs.delta_m.abs())
}

/// Window-shape factor Erf(√2·M)/√M whose maximum sets the optimal
/// detection half-window; [`snr_moving`] = [`snr_simplified`] × this.
pub fn window_gain(m_y: f64) -> f64 {
    erf(std::f64::consts::SQRT_2 * m_y) / m_y.sqrt()
}

/// Derivative sign function of [`window_gain`]: g'(M) ∝
/// (4√2/√π)·M·e^(−2M²) − Erf(√2·M), positive left of the optimum.
fn window_gain_slope(m_y: f64) -> f64 {
    4.0 * std::f64::consts::SQRT_2 / PI.sqrt() * m_y * (-2.0 * m_y * m_y).exp()
        - erf(std::f64::consts::SQRT_2 * m_y)
}

/// Half-window M_Y* maximizing the SNR of a moving sample, found by
/// bisecting the stationarity condition to 1e-12.
pub fn optimal_window() -> f64 {
    let (mut lo, mut hi) = (0.3_f64, 1.5_f64);
    debug_assert!(window_gain_slope(lo) > 0.0 && window_gain_slope(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if window_gain_slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cavity figure of merit ℱ = (g₀/2)·√(w₀π/κ), in √(m·Hz).
pub fn figure_of_merit(g0: f64, w0: f64, kappa: f64) -> f64 {
    0.5 * g0 * (w0 * PI / kappa).sqrt()
}

/// Simplified moving-sample SNR ≃ ℱ·√(λ/(2v))·N_m (the optimal-window
/// form up to the ≈1.002 window-gain factor).
pub fn snr_simplified(inputs: &DispersiveInputs) -> f64 {
    figure_of_merit(inputs.g0, inputs.w0, inputs.kappa)
        * (inputs.lambda / (2.0 * inputs.v)).sqrt()
        * inputs.n_m
}

/// SNR of a trapped sample probed for time t:
/// SNR = g₀·N_m·√(λt/(2κ)).
pub fn snr_trapped(g0: f64, n_m: f64, lambda: f64, kappa: f64, t: f64) -> f64 {
    g0 * n_m * (lambda * t / (2.0 * kappa)).sqrt()
}

/// Trapping time needed to reach `target_snr`:
/// t_c = 2κ·(target/(g₀N_m))²/λ; for target 3 and a single molecule this
/// is 18κ/(g₀²λ).
pub fn critical_trap_time(g0: f64, lambda: f64, kappa: f64, n_m: f64, target_snr: f64) -> f64 {
    2.0 * kappa * (target_snr / (g0 * n_m)).powi(2) / lambda
}

/// Interaction bounds justifying the independent-molecule model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InteractionBounds {
    /// Dipole–dipole strength bound V_max = 3γN_m/(2(k_m·L)³) (rad/s).
    pub v_max: f64,
    /// Incoherent-broadening bound, the free-space rate γ itself (rad/s).
    pub gamma_bound: f64,
}

/// Bound the near-field dipole–dipole interaction of N_m molecules spread
/// over a region of size L, for a transition at wavenumber k_m with
/// free-space decay rate γ.
pub fn dipole_bound(gamma: f64, n_m: f64, l: f64, k_m: f64) -> InteractionBounds {
    InteractionBounds {
        v_max: 3.0 * gamma * n_m / (2.0 * (k_m * l).powi(3)),
        gamma_bound: gamma,
    }
}

/// Critical intracavity photon number N_cr = 4Δ_m²/g₀² at which the drive
/// saturates the molecules (λ = N₀/N_cr measures drive strength).
pub fn critical_photon_number(delta_m: f64, g0: f64) -> f64 {
    4.0 * delta_m * delta_m / (g0 * g0)
}
