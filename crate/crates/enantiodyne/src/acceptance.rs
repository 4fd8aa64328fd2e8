//! Built-in verification suite: eleven end-to-end criteria covering the
//! cavity design table, transfer-sequence exactness, transit dynamics,
//! SNR oracles, critical molecule numbers, trapped-molecule analytics,
//! conservation laws, cumulant convergence, dissipation budgets and the
//! statistical decision chain.
//!
//! Every criterion reports one pass/fail line via [`CriterionResult::line`];
//! the `check` subcommand prints them all, and the `acceptance` integration
//! test asserts them one by one.  Two sub-checks fail on physical grounds
//! and are expected to stay red — the weak-drive inversion-excursion bound
//! and the tabulated dipole-interaction bound.  The README's
//! "known deviations" section walks through both.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytics::{
    critical_trap_time, dipole_bound, optimal_window, snr_simplified, DispersiveInputs,
};
use crate::cavity::{CavityDesign, MirrorReference};
use crate::config::RunConfig;
use crate::constants::{angular, SPEED_OF_LIGHT, TWO_PI};
use crate::detection::{
    error_probability, monte_carlo_error_rate, noise_stddev, snr_from_counts, HomodyneConfig,
    ShotStatistics,
};
use crate::dynamics::{
    integrate, steady_state_dispersive, DissipationParams, DriveConfig, Model, SampleConfig,
    Scenario,
};
use crate::error::Result;
use crate::harness::{critical_nm, dissipation_check, hypothesis_statistics, order_comparison};
use crate::integrator::{uniform_grid, IntegratorOptions};
use crate::molecule::{
    apply_pulse_sequence, hypothesis_inversion, Chirality, MoleculeSpec, ThreeLevelState,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Sub-check summaries, `"; "`-joined, each tagged `[ok]` or `[FAIL]`.
    pub detail: String,
}

impl CriterionResult {
    /// The one-line report: `criterion 04 [PASS] snr-oracle — ...`.
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} [{}] {} — {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Default)]
struct Checks {
    parts: Vec<String>,
    failed: bool,
}

impl Checks {
    fn check(&mut self, passed: bool, label: String) {
        self.failed |= !passed;
        self.parts
            .push(format!("{label} [{}]", if passed { "ok" } else { "FAIL" }));
    }

    /// A non-scoring annotation.
    fn note(&mut self, label: String) {
        self.parts.push(label);
    }
}

fn criterion(
    index: u32,
    name: &'static str,
    body: impl FnOnce(&mut Checks) -> Result<()>,
) -> CriterionResult {
    let mut checks = Checks::default();
    if let Err(error) = body(&mut checks) {
        checks.check(false, format!("aborted: {error}"));
    }
    CriterionResult {
        index,
        name,
        passed: !checks.failed,
        detail: checks.parts.join("; "),
    }
}

fn rel_dev(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn transit_config(lambda: f64, n_m: f64, delta_m_hz: f64) -> Result<RunConfig> {
    RunConfig::from_str(
        &format!("[drive]\nlambda = {lambda}\ndelta_m = {delta_m_hz} Hz\n\n[sample]\nn_m = {n_m}\n"),
        false,
    )
}

/// 1 — the three tabulated cavity designs, all seven columns within 0.5%.
pub fn cavity_table() -> CriterionResult {
    criterion(1, "cavity-design-table", |checks| {
        let mu_b = MoleculeSpec::propanediol(Chirality::Left).mu_b;
        let reference = MirrorReference::default();
        // Columns: d (mm), w₀ (mm), g₀/2π (Hz), Q (10⁹), κ/2π (Hz),
        // Δf (kHz), δf (Hz).  The third-row spacing uses the value
        // consistent with the rest of its row (see note below).
        let table: [(u32, [f64; 7]); 3] = [
            (0, [3.460970, 11.5941, 3.67942, 0.298502, 121.686, 205.68, 822.7]),
            (1, [38.638907, 18.1706, 0.702688, 3.33253, 10.8997, 29.67, 118.7]),
            (2, [72.810999, 13.7462, 0.676651, 6.27981, 5.78419, 12.68, 50.7]),
        ];
        let labels = ["d", "w0", "g0", "Q", "kappa", "coarse tuning", "fine tuning"];
        for (q, reference_row) in table {
            let design = CavityDesign::solve(40e-3, q, 5.78109e9, &reference, mu_b)?;
            let computed = [
                design.geometry.d * 1e3,
                design.w0 * 1e3,
                design.g0_column_hz(),
                design.q_factor / 1e9,
                design.kappa_column_hz(),
                design.tuning_range / 1e3,
                design.tuning_precision,
            ];
            let mut worst = (0.0f64, "");
            for ((got, want), label) in computed.iter().zip(reference_row).zip(labels) {
                let dev = rel_dev(*got, want);
                if dev > worst.0 {
                    worst = (dev, label);
                }
            }
            checks.check(
                worst.0 < 0.005,
                format!(
                    "q={q}: all 7 columns within 0.5% (worst: {} at {:.4}%)",
                    worst.1,
                    worst.0 * 100.0
                ),
            );
        }
        checks.note(
            "note: the third row is tabulated with spacing 73.810999 mm, which is \
             inconsistent with its own waist/Q/decay columns and puts the mode at \
             5.7305 GHz; 72.810999 mm reproduces both, so that value is used"
                .to_string(),
        );
        Ok(())
    })
}

/// 2 — transfer-sequence exactness at the perfect-transfer phases.
pub fn state_transfer() -> CriterionResult {
    criterion(2, "state-transfer-exactness", |checks| {
        // (φ, chirality) → target level of the final state from |1⟩.
        let cases = [
            (FRAC_PI_2, Chirality::Left, 2usize),
            (FRAC_PI_2, Chirality::Right, 3),
            (-FRAC_PI_2, Chirality::Left, 3),
            (-FRAC_PI_2, Chirality::Right, 2),
        ];
        let mut worst = 0.0f64;
        for (phi, chirality, target) in cases {
            let outcome = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, chirality);
            let error = 1.0 - outcome.final_state.fidelity(&ThreeLevelState::basis(target));
            worst = worst.max(error.abs());
        }
        checks.check(
            worst < 1e-12,
            format!("four transfer outcomes hit their target levels (max fidelity error {worst:.1e})"),
        );
        let mut worst_overlap = 0.0f64;
        for phi in [FRAC_PI_2, -FRAC_PI_2] {
            let left = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, Chirality::Left);
            let right = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, Chirality::Right);
            worst_overlap = worst_overlap.max(
                left.final_state
                    .overlap(&right.final_state)
                    .norm(),
            );
        }
        checks.check(
            worst_overlap < 1e-12,
            format!("left/right outcomes orthogonal (max overlap {worst_overlap:.1e})"),
        );
        let left = hypothesis_inversion(Chirality::Left, -FRAC_PI_2)?;
        let right = hypothesis_inversion(Chirality::Right, -FRAC_PI_2)?;
        checks.check(
            left == 1.0 && right == -1.0,
            format!("hypothesis inversions at φ = −π/2: left → {left}, right → {right}"),
        );
        Ok(())
    })
}

/// 3 — weak/strong-drive transit regression at N_m = 1000, v = 1 m/s.
///
/// The weak-drive inversion-excursion bound (< 10⁻²) is tighter than the
/// adiabatic floor 1 − (1 + 4λ)^(−1/2) ≈ 1.9×10⁻² that the dynamics actually
/// attain, so that sub-check fails by physics and is expected to stay red.
pub fn transit_regression() -> CriterionResult {
    criterion(3, "transit-regression", |checks| {
        for lambda in [0.01, 100.0] {
            let config = transit_config(lambda, 1000.0, 822.7)?;
            let (left, right, stats) = hypothesis_statistics(&config, None)?;
            let signal_left = left.signal(config.homodyne.phi_lo);
            let signal_right = right.signal(config.homodyne.phi_lo);
            let scale = signal_left.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            let defect = signal_left
                .iter()
                .zip(&signal_right)
                .fold(0.0f64, |m, (l, r)| m.max((l + r).abs()))
                / scale;
            checks.check(
                defect < 0.05,
                format!("λ={lambda}: homodyne signals antisymmetric between hypotheses (pointwise defect {defect:.1e})"),
            );
            checks.check(
                stats.n_bar_l * stats.n_bar_r < 0.0,
                format!(
                    "λ={lambda}: windowed counts have opposite signs ({:+.4} / {:+.4})",
                    stats.n_bar_l, stats.n_bar_r
                ),
            );
            if lambda < 1.0 {
                let excursion = left.sigma_z_excursion();
                let floor = 1.0 - (1.0 + 4.0 * lambda).powf(-0.5);
                checks.check(
                    excursion < 1e-2,
                    format!(
                        "λ={lambda}: inversion excursion {excursion:.4} < 1e-2 — unattainable: \
                         the adiabatic dressing floor is 1−(1+4λ)^(−1/2) = {floor:.4}"
                    ),
                );
            } else {
                let tau = config.scenario().tau();
                let ret = left.sigma_z_return_deviation(7.0 * tau);
                checks.check(
                    ret < 5e-2,
                    format!("λ={lambda}: inversion returns to initial value after 7τ (residual {ret:.1e})"),
                );
            }
        }
        Ok(())
    })
}

/// 4 — numeric vs analytic SNR at N_m = 3000, λ = 0.01, Δ_m = 2π×882.7 Hz.
pub fn snr_oracle() -> CriterionResult {
    criterion(4, "snr-oracle", |checks| {
        let config = transit_config(0.01, 3000.0, 882.7)?;
        let (_, _, stats) = hypothesis_statistics(&config, None)?;
        checks.check(
            rel_dev(stats.snr, 16.2) < 0.05,
            format!("numeric SNR {:.4} = 16.2 ± 5%", stats.snr),
        );
        let scenario = config.scenario();
        let analytic = snr_simplified(&DispersiveInputs {
            g0: scenario.g0,
            kappa: scenario.kappa,
            delta_m: scenario.drive.delta_m,
            n_m: 3000.0,
            w0: scenario.w0,
            v: scenario.sample.v,
            lambda: scenario.drive.lambda,
            m_y: config.homodyne.m_y,
            sigma_z0: 1.0,
        });
        checks.check(
            rel_dev(analytic, 16.8) < 0.02,
            format!("analytic SNR {analytic:.4} = 16.8 ± 2%"),
        );
        let ratio = stats.snr / analytic;
        checks.check(
            (0.93..=1.0).contains(&ratio),
            format!("numeric/analytic ratio {ratio:.4} within [0.93, 1.00]"),
        );
        Ok(())
    })
}

/// 5 — critical molecule numbers at weak and strong drive.
pub fn critical_numbers() -> CriterionResult {
    criterion(5, "critical-molecule-numbers", |checks| {
        let weak = critical_nm(&transit_config(0.01, 1000.0, 822.7)?, 3.0)?;
        checks.check(
            rel_dev(weak.n_m as f64, 552.0) < 0.05,
            format!("critical N_m(λ=0.01, v=1) = {} = 552 ± 5%", weak.n_m),
        );
        let strong = critical_nm(&transit_config(100.0, 1000.0, 822.7)?, 3.0)?;
        checks.check(
            rel_dev(strong.n_m as f64, 95.0) < 0.10,
            format!("critical N_m(λ=100, v=1) = {} = 95 ± 10%", strong.n_m),
        );
        Ok(())
    })
}

/// 6 — the optimal detection half-window.
pub fn window_optimum() -> CriterionResult {
    criterion(6, "window-optimum", |checks| {
        let m = optimal_window();
        checks.check(
            (0.69..=0.71).contains(&m),
            format!("optimal half-window M* = {m:.8} within [0.69, 0.71]"),
        );
        Ok(())
    })
}

/// 7 — trapped-molecule analytics and the driven steady state.
pub fn trapped_analytics() -> CriterionResult {
    criterion(7, "trapped-molecule-analytics", |checks| {
        let mu_b = MoleculeSpec::propanediol(Chirality::Left).mu_b;
        let design = CavityDesign::solve(40e-3, 0, 5.78109e9, &MirrorReference::default(), mu_b)?;
        let t0 = 18.0 * design.kappa / (design.g0 * design.g0);
        checks.check(
            rel_dev(t0, 26.0) < 0.05,
            format!("single-molecule integration time 18κ/g₀² = {t0:.2} s = 26 s ± 5%"),
        );
        let t_c = critical_trap_time(design.g0, 0.01, design.kappa, 1.0, 3.0);
        checks.check(
            rel_dev(t_c, 2600.0) < 0.05,
            format!("critical trap time t_c(λ=0.01, N_m=1) = {t_c:.1} s = 2600 s ± 5%"),
        );
        // A trapped molecule that entered from Ȳ₀ = −4w₀: after the
        // transient the cavity amplitude settles on the dispersive steady
        // state.
        let config = RunConfig::from_str(
            "[drive]\nlambda = 0.01\ndelta_m = 822.7 Hz\n\n\
             [sample]\nn_m = 1\ntrapped = true\nybar0_waists = -4\n\n\
             [integrator]\nrtol = 1e-11\natol = 1e-13\n\n\
             [run]\nt_end = 10\n",
            false,
        )?;
        let scenario = config.scenario();
        let trajectory = integrate(Model::First, &scenario, &config.grid())?;
        let quotient = steady_state_dispersive(
            scenario.g0 / 2.0,
            &scenario.drive,
            1.0,
            1.0,
            scenario.kappa,
        )
        .norm();
        let late_dev = trajectory
            .t
            .iter()
            .zip(&trajectory.c)
            .filter(|(t, _)| **t > 9.5)
            .map(|(_, c)| (c.norm() - quotient).abs() / quotient)
            .fold(0.0f64, f64::max);
        checks.check(
            late_dev < 1e-6,
            format!("trapped |c| matches the closed steady-state quotient to {late_dev:.1e} after the transient"),
        );
        Ok(())
    })
}

/// 8 — Bloch-invariant conservation over 50 random lossless configs.
pub fn bloch_conservation() -> CriterionResult {
    criterion(8, "bloch-conservation", |checks| {
        let mu_b = MoleculeSpec::propanediol(Chirality::Left).mu_b;
        let design = CavityDesign::solve(40e-3, 0, 5.78109e9, &MirrorReference::default(), mu_b)?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let lambda = 10f64.powf(rng.random_range(-3.0..2.0));
            let n_m = rng.random_range(1.0..5000.0_f64).round();
            let v = rng.random_range(0.25..5.0);
            let delta_m =
                angular(rng.random_range(200.0..2000.0)) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let sigma_z0 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let drive = DriveConfig::from_lambda(lambda, delta_m, 0.0, design.kappa, design.g0);
            let scenario = Scenario {
                drive,
                sample: SampleConfig {
                    n_m,
                    v,
                    ybar0: -4.0 * design.w0,
                    trapped: false,
                    sigma_z0,
                    l_sample: 0.1 * design.w0,
                },
                dissipation: DissipationParams::default(),
                g0: design.g0,
                w0: design.w0,
                kappa: design.kappa,
                options: IntegratorOptions::default(),
            };
            let grid = uniform_grid(0.0, 8.0 * scenario.tau(), 400);
            let trajectory = integrate(Model::First, &scenario, &grid)?;
            worst = worst.max(trajectory.bloch_max_deviation());
        }
        checks.check(
            worst < 1e-6,
            format!("(σᶻ)² + 4|σ|² conserved over 50 random configs (worst drift {worst:.1e})"),
        );
        Ok(())
    })
}

/// 9 — first- vs second-order cumulant agreement, plus the collective-decay
/// control that only the second order resolves.
pub fn cumulant_convergence() -> CriterionResult {
    criterion(9, "cumulant-convergence", |checks| {
        for lambda in [0.01, 100.0] {
            let report = order_comparison(&transit_config(lambda, 3000.0, 882.7)?)?;
            checks.check(
                report.max_dev_sigma_z < 0.01,
                format!(
                    "λ={lambda}: max inversion deviation between orders {:.1e} < 0.01",
                    report.max_dev_sigma_z
                ),
            );
        }
        // Undriven control at N_m = 5×10⁴: collective decay is a pure
        // second-order effect.
        let config = RunConfig::from_str(
            "[drive]\nlambda = 0\ndelta_m = 882.7 Hz\n\n[sample]\nn_m = 50000\ntrapped = true\n",
            false,
        )?;
        let scenario = config.scenario();
        let grid = uniform_grid(0.0, 4.0 * scenario.tau(), 400);
        let first = integrate(Model::First, &scenario, &grid)?;
        let second = integrate(Model::Second, &scenario, &grid)?;
        let first_drift = first
            .sigma_z
            .iter()
            .fold(0.0f64, |m, z| m.max((z - 1.0).abs()));
        let second_final = *second.sigma_z.last().expect("nonempty grid");
        checks.check(
            first_drift < 1e-9,
            format!("undriven first-order inversion stays put (drift {first_drift:.1e})"),
        );
        checks.check(
            second_final < 0.9,
            format!("second order resolves collective decay: σᶻ(4τ) = {second_final:.4}"),
        );
        Ok(())
    })
}

/// 10 — dissipation negligibility and the free-space/dipole-bound values.
///
/// The tabulated interaction bound 2π×14.4×10⁻⁵ Hz is not reproducible
/// within 3% from the stated inputs (see README); that sub-check is
/// expected to stay red.
pub fn dissipation_negligibility() -> CriterionResult {
    criterion(10, "dissipation-negligibility", |checks| {
        let molecule = MoleculeSpec::propanediol(Chirality::Left);
        let gamma = molecule.decay_rate_32();
        let k_m = molecule.omega_32() / SPEED_OF_LIGHT;
        let config = transit_config(0.01, 3000.0, 882.7)?;
        let bounds_mm = dipole_bound(gamma, 3000.0, 1.0e-3, k_m);
        let report = dissipation_check(
            &config,
            DissipationParams {
                gamma,
                v_max: bounds_mm.v_max,
            },
        )?;
        checks.check(
            report.passes,
            format!(
                "free-space decay and dipole coupling shift the transit by {:.1e} (cavity) / {:.1e} (inversion), both < 1e-3",
                report.max_rel_dev_c, report.max_dev_sigma_z
            ),
        );
        let target = TWO_PI * 14.4e-5;
        let bounds_waist = dipole_bound(gamma, 3000.0, 0.1 * config.design.w0, k_m);
        let devs = [
            rel_dev(bounds_mm.v_max, target),
            rel_dev(bounds_waist.v_max, target),
        ];
        checks.check(
            devs.iter().any(|d| *d < 0.03),
            format!(
                "V_max = 2π×14.4e-5 Hz ± 3% — unattainable from the stated inputs: \
                 L = 1 mm gives 2π×{:.3e} Hz ({:+.1}%), L = w₀/10 gives 2π×{:.3e} Hz ({:+.1}%)",
                bounds_mm.v_max / TWO_PI,
                devs[0] * 100.0,
                bounds_waist.v_max / TWO_PI,
                -devs[1] * 100.0
            ),
        );
        let rates = [
            (molecule.decay_rate_21(), 1.8e-10, "2→1"),
            (molecule.decay_rate_31(), 3.64e-11, "3→1"),
            (molecule.decay_rate_32(), 8.06e-11, "3→2"),
        ];
        let mut worst = (0.0f64, "");
        for (got, want_hz, label) in rates {
            let dev = rel_dev(got, TWO_PI * want_hz);
            if dev > worst.0 {
                worst = (dev, label);
            }
        }
        checks.check(
            worst.0 < 0.03,
            format!(
                "free-space decay rates match their reference values within 3% (worst: {} at {:.2}%)",
                worst.1,
                worst.0 * 100.0
            ),
        );
        Ok(())
    })
}

/// 11 — the statistical decision chain: Monte-Carlo error rate against the
/// Gaussian closed form, and local-oscillator invariance of the SNR.
pub fn statistical_chain() -> CriterionResult {
    criterion(11, "statistical-chain", |checks| {
        let homodyne = HomodyneConfig {
            phi_lo: -FRAC_PI_2,
            n_lo: 1e8,
            t0: 0.0,
            tf: 1.0,
            m_y: 0.7,
        };
        let stats = ShotStatistics {
            n_bar_l: 3.0,
            n_bar_r: -3.0,
            delta: noise_stddev(&homodyne),
            duration: homodyne.duration(),
            snr: snr_from_counts(3.0, -3.0, homodyne.duration()),
            p_err: error_probability(3.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let outcome = monte_carlo_error_rate(&stats, &homodyne, 500_000, &mut rng)?;
        let p = error_probability(3.0);
        let band = 3.0 * (p * (1.0 - p) / 1e6).sqrt();
        checks.check(
            (outcome.error_rate - p).abs() <= band,
            format!(
                "Monte-Carlo error rate {:.4e} vs analytic {p:.4e} within 3 binomial standard errors (±{band:.1e}) over 10⁶ shots",
                outcome.error_rate
            ),
        );
        // SNR must not depend on the local-oscillator strength.
        let config = transit_config(0.01, 1000.0, 822.7)?;
        let cache = crate::harness::TrajectoryCache::new();
        let (_, _, base) = hypothesis_statistics(&config, Some(&cache))?;
        let mut scaled_config = config.clone();
        scaled_config.homodyne.n_lo *= 1e4;
        let (_, _, scaled) = hypothesis_statistics(&scaled_config, Some(&cache))?;
        let rel = (base.snr - scaled.snr).abs() / base.snr;
        checks.check(
            rel <= 1e-9,
            format!("SNR invariant under 10⁴× local-oscillator scaling (relative shift {rel:.1e})"),
        );
        let delta_ratio = scaled.delta / base.delta;
        checks.check(
            (delta_ratio - 100.0).abs() < 1e-9,
            format!("shot noise scales as √N_lo (ratio {delta_ratio:.6})"),
        );
        Ok(())
    })
}

/// Run all eleven criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        cavity_table(),
        state_transfer(),
        transit_regression(),
        snr_oracle(),
        critical_numbers(),
        window_optimum(),
        trapped_analytics(),
        bloch_conservation(),
        cumulant_convergence(),
        dissipation_negligibility(),
        statistical_chain(),
    ]
}
