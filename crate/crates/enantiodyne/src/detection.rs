//! Balanced homodyne detection and single-shot hypothesis testing.
//!
//! The cavity output is beaten against a strong local oscillator; the
//! instantaneous signal 𝒩(t) = √(2κ)·Re(e^(−iφ_lo)·c(t)) is integrated
//! over a detection window into a single count n, Gaussian-distributed by
//! the strong-field approximation.  Counts are tracked **per unit
//! local-oscillator amplitude**, and √N_lo is reattached only when a shot
//! is actually drawn — this makes the analytic cancellation of N_lo in the
//! SNR explicit:
//!
//! SNR = |n̄_L − n̄_R|·√N_lo / (2δ) = |n̄_L − n̄_R| / (2√(t_f − t₀)),
//!
//! with δ = √(N_lo(t_f − t₀)).  The decision threshold sits at n = 0
//! (where the two Gaussians cross for n̄_L = −n̄_R), giving the error
//! probability P_err = erfc(SNR/√2)/2.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molecule::Chirality;
use crate::special::erfc;
use crate::trajectory::Trajectory;

/// Default local-oscillator phase: the quadrature where the dispersive
/// signal lives and a positive detuning gives n̄_L > 0.
pub const DEFAULT_PHI_LO: f64 = -FRAC_PI_2;

/// Default local-oscillator incident rate (photons/s).  The SNR does not
/// depend on it (see module docs); it only sets the absolute count scale,
/// and no reference value exists — this default is arbitrary.
pub const DEFAULT_N_LO: f64 = 1e8;

/// Default detection half-window in units of the transit time τ.
pub const DEFAULT_M_Y: f64 = 0.7;

/// Below this many local-oscillator photons in the window the Gaussian
/// shot model is dubious.
pub const GAUSSIAN_COUNT_FLOOR: f64 = 100.0;

/// Homodyne detector settings and detection window.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HomodyneConfig {
    /// Local-oscillator phase φ_lo (rad).
    pub phi_lo: f64,
    /// Local-oscillator incident rate N_lo (photons/s).
    pub n_lo: f64,
    /// Window start t₀ (s).
    pub t0: f64,
    /// Window end t_f (s).
    pub tf: f64,
    /// Half-window in units of τ that generated [t₀, t_f] (kept for
    /// reporting).
    pub m_y: f64,
}

impl HomodyneConfig {
    /// The standard window for a transit from Ȳ₀ at speed v: centered on
    /// the waist crossing −Ȳ₀/v, extending M_Y·τ to each side (for
    /// Ȳ₀ = −4w₀ this is [(4−M_Y)τ, (4+M_Y)τ]).
    pub fn for_transit(ybar0: f64, v: f64, w0: f64, m_y: f64) -> Self {
        let tau = w0 / v;
        let center = -ybar0 / v;
        Self {
            phi_lo: DEFAULT_PHI_LO,
            n_lo: DEFAULT_N_LO,
            t0: center - m_y * tau,
            tf: center + m_y * tau,
            m_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tf > self.t0) {
            return Err(Error::InvalidInput(format!(
                "detection window must have tf > t0 (got [{}, {}])",
                self.t0, self.tf
            )));
        }
        if self.n_lo <= 0.0 {
            return Err(Error::InvalidInput(
                "local-oscillator rate must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Window duration t_f − t₀ (s).
    pub fn duration(&self) -> f64 {
        self.tf - self.t0
    }

    /// Local-oscillator photons collected in the window.
    pub fn gaussian_count(&self) -> f64 {
        self.n_lo * self.duration()
    }

    /// Whether the Gaussian shot model is trustworthy (≥ 100 photons in
    /// the window); callers should warn when this is false.
    pub fn is_gaussian_valid(&self) -> bool {
        self.gaussian_count() >= GAUSSIAN_COUNT_FLOOR
    }
}

/// Instantaneous homodyne signal 𝒩 = √(2κ)·Re(e^(−iφ_lo)·c), in √Hz per
/// unit local-oscillator amplitude.
pub fn instantaneous_signal(c: Complex64, kappa: f64, phi_lo: f64) -> f64 {
    (2.0 * kappa).sqrt() * ((-Complex64::i() * phi_lo).exp() * c).re
}

/// Integrated mean count n̄ per unit local-oscillator amplitude:
/// trapezoidal quadrature of 𝒩(t) over [t₀, t_f] on the trajectory grid.
pub fn integrate_signal(trajectory: &Trajectory, config: &HomodyneConfig) -> Result<f64> {
    config.validate()?;
    let (i0, i1) = trajectory.index_range(config.t0, config.tf)?;
    let mut acc = 0.0;
    for k in i0..i1 {
        let dt = trajectory.t[k + 1] - trajectory.t[k];
        acc += 0.5
            * dt
            * (trajectory.signal_at(k, config.phi_lo) + trajectory.signal_at(k + 1, config.phi_lo));
    }
    Ok(acc)
}

/// Shot-noise standard deviation δ = √(N_lo(t_f − t₀)).
pub fn noise_stddev(config: &HomodyneConfig) -> f64 {
    config.gaussian_count().sqrt()
}

/// SNR from the two per-unit mean counts: |n̄_L − n̄_R|/(2√(t_f − t₀)) —
/// the local-oscillator rate cancels.
pub fn snr_from_counts(n_bar_l: f64, n_bar_r: f64, duration: f64) -> f64 {
    (n_bar_l - n_bar_r).abs() / (2.0 * duration.sqrt())
}

/// Single-shot discrimination error probability P_err = erfc(SNR/√2)/2.
pub fn error_probability(snr: f64) -> f64 {
    0.5 * erfc(snr / SQRT_2)
}

/// The full single-shot statistics of a Left/Right trajectory pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShotStatistics {
    /// Mean count under H_L, per unit local-oscillator amplitude.
    pub n_bar_l: f64,
    /// Mean count under H_R, per unit local-oscillator amplitude.
    pub n_bar_r: f64,
    /// Shot-noise standard deviation δ (at the configured N_lo).
    pub delta: f64,
    /// Window duration (s), kept so shots can be re-drawn.
    pub duration: f64,
    /// Signal-to-noise ratio (N_lo-independent).
    pub snr: f64,
    /// Analytic single-shot error probability.
    pub p_err: f64,
}

impl ShotStatistics {
    /// Integrate both hypotheses' trajectories over the same window.
    pub fn from_trajectories(
        left: &Trajectory,
        right: &Trajectory,
        config: &HomodyneConfig,
    ) -> Result<Self> {
        let n_bar_l = integrate_signal(left, config)?;
        let n_bar_r = integrate_signal(right, config)?;
        let snr = snr_from_counts(n_bar_l, n_bar_r, config.duration());
        Ok(Self {
            n_bar_l,
            n_bar_r,
            delta: noise_stddev(config),
            duration: config.duration(),
            snr,
            p_err: error_probability(snr),
        })
    }

    /// Relative asymmetry |n̄_L + n̄_R|/|n̄_L| — zero for a perfectly
    /// antisymmetric (dispersive) signal pair.
    pub fn antisymmetry_defect(&self) -> f64 {
        (self.n_bar_l + self.n_bar_r).abs() / self.n_bar_l.abs()
    }
}

/// Draw one shot: n ~ Normal(n̄_unit·√N_lo, √(N_lo(t_f − t₀))).
pub fn sample_shot<R: Rng + ?Sized>(n_bar_unit: f64, config: &HomodyneConfig, rng: &mut R) -> f64 {
    let normal = Normal::new(n_bar_unit * config.n_lo.sqrt(), noise_stddev(config))
        .expect("shot-noise stddev is non-negative");
    normal.sample(rng)
}

/// Decision rule at the optimal threshold n_c = 0: positive counts mean
/// Left, negative mean Right, and the measure-zero tie is resolved by a
/// fair coin so the code path is defined.
pub fn decide<R: Rng + ?Sized>(n: f64, rng: &mut R) -> Chirality {
    match n.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => Chirality::Left,
        Some(std::cmp::Ordering::Less) => Chirality::Right,
        _ => {
            if rng.random::<bool>() {
                Chirality::Left
            } else {
                Chirality::Right
            }
        }
    }
}

/// Result of a Monte-Carlo validation run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonteCarloOutcome {
    /// Misclassification fraction over both hypotheses.
    pub error_rate: f64,
    /// Binomial standard error of `error_rate`.
    pub standard_error: f64,
    /// Shots drawn per hypothesis (total trials = 2 × shots).
    pub shots_per_hypothesis: u64,
}

/// Draw `shots_per_hypothesis` Gaussian outcomes under each hypothesis and
/// report the empirical misclassification fraction with its binomial
/// standard error — an end-to-end check of the analytic P_err chain.
pub fn monte_carlo_error_rate<R: Rng + ?Sized>(
    stats: &ShotStatistics,
    config: &HomodyneConfig,
    shots_per_hypothesis: u64,
    rng: &mut R,
) -> Result<MonteCarloOutcome> {
    if shots_per_hypothesis < 1000 {
        return Err(Error::InvalidInput(
            "Monte-Carlo validation needs at least 1000 shots per hypothesis".into(),
        ));
    }
    config.validate()?;
    let mut errors: u64 = 0;
    for (truth, n_bar) in [
        (Chirality::Left, stats.n_bar_l),
        (Chirality::Right, stats.n_bar_r),
    ] {
        for _ in 0..shots_per_hypothesis {
            let n = sample_shot(n_bar, config, rng);
            if decide(n, rng) != truth {
                errors += 1;
            }
        }
    }
    let total = (2 * shots_per_hypothesis) as f64;
    let error_rate = errors as f64 / total;
    Ok(MonteCarloOutcome {
        error_rate,
        standard_error: (error_rate * (1.0 - error_rate) / total).sqrt(),
        shots_per_hypothesis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate_transit, Model};
    use crate::testutil::{scenario, W0};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_window() -> HomodyneConfig {
        HomodyneConfig {
            phi_lo: DEFAULT_PHI_LO,
            n_lo: 1.0,
            t0: 0.0,
            tf: 1.0,
            m_y: 0.5,
        }
    }

    #[test]
    fn instantaneous_signal_quadratures() {
        let kappa = 4.5; // √(2κ) = 3
        assert!(instantaneous_signal(Complex64::from(2.0), kappa, FRAC_PI_2).abs() < 1e-12);
        let s = instantaneous_signal(Complex64::new(0.0, 2.0), kappa, FRAC_PI_2);
        assert!((s - 6.0).abs() < 1e-12);
        let s = instantaneous_signal(Complex64::new(0.0, 2.0), kappa, -FRAC_PI_2);
        assert!((s + 6.0).abs() < 1e-12);
    }

    #[test]
    fn noise_stddev_arithmetic() {
        assert_eq!(noise_stddev(&unit_window()), 1.0);
        let mut config = unit_window();
        config.n_lo = 50.0;
        config.tf = 2.0;
        assert!((noise_stddev(&config) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn window_validation() {
        let mut config = unit_window();
        config.tf = config.t0;
        assert!(config.validate().is_err());
        let mut config = unit_window();
        config.n_lo = 0.0;
        assert!(config.validate().is_err());
        assert!(!HomodyneConfig { n_lo: 10.0, ..unit_window() }.is_gaussian_valid());
        assert!(HomodyneConfig { n_lo: 1000.0, ..unit_window() }.is_gaussian_valid());
    }

    #[test]
    fn transit_window_placement() {
        let config = HomodyneConfig::for_transit(-4.0 * W0, 1.0, W0, 0.7);
        let tau = W0;
        assert!((config.t0 - 3.3 * tau).abs() < 1e-12 * tau);
        assert!((config.tf - 4.7 * tau).abs() < 1e-12 * tau);
        assert!((config.duration() - 1.4 * tau).abs() < 1e-12 * tau);
    }

    #[test]
    fn error_probability_values_and_shape() {
        assert!((error_probability(0.0) - 0.5).abs() < 1e-15);
        let p3 = error_probability(3.0);
        assert!((p3 - 1.3499e-3).abs() < 1e-7, "P_err(3) = {p3}");
        assert!((p3 - 1.34989803e-3).abs() < 1e-10, "P_err(3) = {p3}");
        assert!(error_probability(10.0) < 1e-20);
        // Strictly decreasing; the SNR-3 convention sits just above 1e-3.
        let mut prev = 0.6;
        for k in 0..=60 {
            let p = error_probability(0.1 * k as f64);
            assert!(p < prev);
            prev = p;
        }
        assert!(error_probability(3.1) < 1e-3 && 1e-3 < error_probability(3.0));
    }

    #[test]
    fn integrate_signal_quadrature() {
        // Constant amplitude: trapezoid is exact.
        let mut traj = Trajectory::with_capacity(11, 0.5); // √(2κ) = 1
        for k in 0..=10 {
            traj.push(0.1 * k as f64, Complex64::from(2.0), Complex64::from(0.0), 1.0, 0.0);
        }
        let mut config = unit_window();
        config.phi_lo = FRAC_PI_2; // orthogonal quadrature reads zero
        assert!(integrate_signal(&traj, &config).unwrap().abs() < 1e-14);
        config.phi_lo = 0.0;
        let n_bar = integrate_signal(&traj, &config).unwrap();
        assert!((n_bar - 2.0).abs() < 1e-12);
        // Sub-window scales linearly.
        config.t0 = 0.2;
        config.tf = 0.7;
        let n_bar = integrate_signal(&traj, &config).unwrap();
        assert!((n_bar - 1.0).abs() < 1e-12);
        // Out-of-range windows are refused.
        config.tf = 1.7;
        assert!(integrate_signal(&traj, &config).is_err());
    }

    #[test]
    fn transit_statistics_frozen() {
        let left = integrate_transit(Model::First, &scenario(1000.0, 0.01, 1.0, 822.7, 1.0)).unwrap();
        let right =
            integrate_transit(Model::First, &scenario(1000.0, 0.01, 1.0, 822.7, -1.0)).unwrap();
        let config = HomodyneConfig::for_transit(-4.0 * W0, 1.0, W0, DEFAULT_M_Y);
        let stats = ShotStatistics::from_trajectories(&left, &right, &config).unwrap();
        assert!((stats.n_bar_l - 0.691967).abs() < 1e-4, "n_bar_l {}", stats.n_bar_l);
        assert!((stats.n_bar_r + 0.691655).abs() < 1e-4, "n_bar_r {}", stats.n_bar_r);
        assert!(stats.antisymmetry_defect() < 0.01, "defect {}", stats.antisymmetry_defect());
        assert!((stats.snr - 5.4301).abs() < 2e-3, "snr {}", stats.snr);
        assert!((stats.p_err - error_probability(stats.snr)).abs() < 1e-15);
        assert!(stats.delta > 0.0 && stats.p_err <= 0.5);
    }

    #[test]
    fn snr_is_local_oscillator_invariant() {
        let left = integrate_transit(Model::First, &scenario(200.0, 0.01, 1.0, 882.7, 1.0)).unwrap();
        let right =
            integrate_transit(Model::First, &scenario(200.0, 0.01, 1.0, 882.7, -1.0)).unwrap();
        let mut config = HomodyneConfig::for_transit(-4.0 * W0, 1.0, W0, DEFAULT_M_Y);
        let base = ShotStatistics::from_trajectories(&left, &right, &config).unwrap();
        config.n_lo *= 1e3;
        let scaled = ShotStatistics::from_trajectories(&left, &right, &config).unwrap();
        assert_eq!(base.snr, scaled.snr);
        assert!((scaled.delta / base.delta - 1e3_f64.sqrt()).abs() < 1e-12 * 1e3_f64.sqrt());
    }

    #[test]
    fn local_oscillator_flip_flips_counts() {
        let left = integrate_transit(Model::First, &scenario(200.0, 0.01, 1.0, 882.7, 1.0)).unwrap();
        let right =
            integrate_transit(Model::First, &scenario(200.0, 0.01, 1.0, 882.7, -1.0)).unwrap();
        let mut config = HomodyneConfig::for_transit(-4.0 * W0, 1.0, W0, DEFAULT_M_Y);
        let base = ShotStatistics::from_trajectories(&left, &right, &config).unwrap();
        config.phi_lo = -config.phi_lo;
        let flipped = ShotStatistics::from_trajectories(&left, &right, &config).unwrap();
        assert!((flipped.n_bar_l + base.n_bar_l).abs() < 1e-12 * base.n_bar_l.abs());
        assert!((flipped.n_bar_r + base.n_bar_r).abs() < 1e-12 * base.n_bar_r.abs());
        assert!((flipped.snr - base.snr).abs() < 1e-12 * base.snr);
    }

    #[test]
    fn shot_sampling_statistics() {
        let config = unit_window();
        // Zero-variance limit returns the mean itself.
        let mut degenerate = config;
        degenerate.n_lo = 1e-30;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = sample_shot(3.0, &degenerate, &mut rng);
        assert!((n - 3.0 * degenerate.n_lo.sqrt()).abs() < 1e-12);
        // Fixed seed: reproducible sequence.
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            assert_eq!(sample_shot(1.0, &config, &mut a), sample_shot(1.0, &config, &mut b));
        }
        // Law of large numbers: 10⁶ draws, mean within 4 σ/√n of n̄√N_lo.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shots = 1_000_000;
        let mean: f64 =
            (0..shots).map(|_| sample_shot(2.0, &config, &mut rng)).sum::<f64>() / shots as f64;
        let tol = 4.0 * noise_stddev(&config) / (shots as f64).sqrt();
        assert!((mean - 2.0).abs() < tol, "mean {mean}");
    }

    #[test]
    fn decision_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(decide(5.0, &mut rng), Chirality::Left);
        assert_eq!(decide(-5.0, &mut rng), Chirality::Right);
        // Ties resolve by a fair coin.
        let lefts = (0..10_000).filter(|_| decide(0.0, &mut rng) == Chirality::Left).count();
        assert!((4500..=5500).contains(&lefts), "{lefts} lefts");
    }

    #[test]
    fn monte_carlo_matches_analytic_error() {
        // Synthetic statistics with SNR exactly 3 over a 1 s window.
        let config = unit_window();
        let stats = ShotStatistics {
            n_bar_l: 3.0,
            n_bar_r: -3.0,
            delta: noise_stddev(&config),
            duration: config.duration(),
            snr: 3.0,
            p_err: error_probability(3.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let outcome = monte_carlo_error_rate(&stats, &config, 500_000, &mut rng).unwrap();
        let dev = (outcome.error_rate - 1.34989803e-3).abs();
        assert!(dev < 3.0 * outcome.standard_error, "rate {} ± {}", outcome.error_rate, outcome.standard_error);
        // Degenerate hypotheses: the coin is fair.
        let null = ShotStatistics { n_bar_l: 0.0, n_bar_r: 0.0, snr: 0.0, p_err: 0.5, ..stats };
        let outcome = monte_carlo_error_rate(&null, &config, 100_000, &mut rng).unwrap();
        assert!((outcome.error_rate - 0.5).abs() < 3.0 * outcome.standard_error);
        // Too few shots is an input error.
        assert!(monte_carlo_error_rate(&stats, &config, 10, &mut rng).is_err());
    }

    #[test]
    fn decisions_invariant_under_local_oscillator_scale() {
        let config = unit_window();
        let mut scaled = config;
        scaled.n_lo *= 1e4;
        let mut rng_a = ChaCha8Rng::seed_from_u64(11);
        let mut rng_b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = decide(sample_shot(0.3, &config, &mut rng_a), &mut rng_a);
            let b = decide(sample_shot(0.3, &scaled, &mut rng_b), &mut rng_b);
            assert_eq!(a, b);
        }
    }
}
