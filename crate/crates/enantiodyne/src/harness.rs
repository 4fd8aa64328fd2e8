//! Sweep harness: batched parameter scans over the full simulate → detect
//! pipeline, with deterministic CSV output and a trajectory cache.
//!
//! A sweep runs the two-hypothesis pipeline (σᶻ(0) = ±1 from the transfer
//! sequence at φ = −π/2) at every grid point and tabulates the homodyne
//! statistics.  Grids evaluate in parallel via a worker pool, but results
//! are gathered in grid order, so serial and parallel runs emit identical
//! bytes; only the per-point wall-time column and the timestamp metadata
//! line are volatile, and [`SweepResult::canonical_csv`] strips them.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::analytics::DispersiveInputs;
use crate::config::RunConfig;
use crate::detection::{integrate_signal, HomodyneConfig, ShotStatistics};
use crate::dynamics::{integrate, DissipationParams, DriveConfig, Model, Scenario};
use crate::error::{Error, Result};
use crate::molecule::{hypothesis_inversion, Chirality};
use crate::trajectory::Trajectory;

/// Deviation budget for the dissipation self-check.
pub const DISSIPATION_TOLERANCE: f64 = 1e-3;
/// Largest molecule number the order-comparison report accepts.
pub const ORDER_COMPARISON_NM_MAX: f64 = 5e4;
/// Upper search bound for the critical-molecule-number bisection.
const CRITICAL_NM_MAX: f64 = 1e4;

/// One sweep axis: a parameter name and the values to visit.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    /// Parameter name: `n_m`, or `lambda`/`v` for the 2-D map.
    pub name: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            values,
        }
    }
}

/// A declarative sweep request: axes, the base configuration every point
/// perturbs, the SNR target for critical-number searches, worker count and
/// an optional output path.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub config: RunConfig,
    pub target_snr: f64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(config: RunConfig, axes: Vec<SweepAxis>) -> Self {
        Self {
            axes,
            config,
            target_snr: 3.0,
            jobs: None,
            out: None,
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Axis coordinates, in axis order.
    pub coords: Vec<f64>,
    /// Value columns, matching [`SweepResult::value_names`]; NaN on failure.
    pub values: Vec<f64>,
    /// Evaluation wall time (s) — volatile, excluded from canonical output.
    pub wall_time_s: f64,
    /// Failure description when the point could not be evaluated.
    pub failure: Option<String>,
}

/// Least-squares line fit with its coefficient of determination.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fit y = slope·x + intercept by least squares.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidInput(
            "linear fit needs two equal-length samples of at least 2 points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let syy: f64 = y.iter().map(|yi| (yi - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("linear fit: x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// A completed sweep: points in grid order plus provenance metadata.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axes: Vec<String>,
    pub value_names: Vec<String>,
    pub points: Vec<SweepPoint>,
    pub config_hash: u64,
    pub seed: u64,
    pub target_snr: f64,
    pub version: String,
    pub timestamp_unix_s: u64,
    /// SNR-vs-N_m linearity fit, when that sweep produced one.
    pub linearity: Option<LinearFit>,
}

impl SweepResult {
    fn new(spec_config: &RunConfig, target_snr: f64, axes: Vec<String>, value_names: Vec<String>) -> Self {
        Self {
            axes,
            value_names,
            points: Vec::new(),
            config_hash: spec_config.config_hash,
            seed: spec_config.seed,
            target_snr,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            linearity: None,
        }
    }

    fn csv(&self, volatile: bool) -> String {
        let mut out = String::new();
        out.push_str("# enantiodyne sweep\n");
        out.push_str(&format!("# version = {}\n", self.version));
        out.push_str(&format!("# config_hash = {:#018x}\n", self.config_hash));
        out.push_str(&format!("# seed = {}\n", self.seed));
        out.push_str(&format!("# target_snr = {:.6e}\n", self.target_snr));
        if let Some(fit) = self.linearity {
            out.push_str(&format!(
                "# linear_fit = slope {:.12e} intercept {:.12e} r2 {:.9}\n",
                fit.slope, fit.intercept, fit.r_squared
            ));
        }
        if volatile {
            out.push_str(&format!("# timestamp_unix_s = {}\n", self.timestamp_unix_s));
        }
        out.push_str(&self.axes.join(","));
        for name in &self.value_names {
            out.push(',');
            out.push_str(name);
        }
        if volatile {
            out.push_str(",wall_time_s");
        }
        out.push_str(",failure\n");
        for point in &self.points {
            let mut fields: Vec<String> =
                point.coords.iter().map(|c| format!("{c:.12e}")).collect();
            fields.extend(point.values.iter().map(|v| format!("{v:.12e}")));
            if volatile {
                fields.push(format!("{:.3e}", point.wall_time_s));
            }
            fields.push(match &point.failure {
                Some(message) => message.replace(',', ";"),
                None => String::new(),
            });
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Full CSV including the volatile timestamp and wall-time columns.
    pub fn to_csv(&self) -> String {
        self.csv(true)
    }

    /// Deterministic CSV: identical bytes for identical configs, whatever
    /// the worker count or clock.
    pub fn canonical_csv(&self) -> String {
        self.csv(false)
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Shared trajectory cache keyed by a content hash of scenario, model and
/// output grid, so repeated pipeline stages (detection statistics, then a
/// Monte-Carlo pass) integrate each hypothesis only once.
#[derive(Debug, Default)]
pub struct TrajectoryCache {
    map: Mutex<HashMap<u64, Arc<Trajectory>>>,
}

fn hash_f64(hash: u64, value: f64) -> u64 {
    let mut h = hash;
    for b in value.to_bits().to_le_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

fn scenario_key(scenario: &Scenario, model: Model, grid: &[f64]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for value in [
        scenario.drive.eta,
        scenario.drive.delta_m,
        scenario.drive.delta_c,
        scenario.drive.lambda,
        scenario.sample.n_m,
        scenario.sample.v,
        scenario.sample.ybar0,
        if scenario.sample.trapped { 1.0 } else { 0.0 },
        scenario.sample.sigma_z0,
        scenario.sample.l_sample,
        scenario.dissipation.gamma,
        scenario.dissipation.v_max,
        scenario.g0,
        scenario.w0,
        scenario.kappa,
        scenario.options.rtol,
        scenario.options.atol,
        scenario.options.max_step,
        match model {
            Model::First => 1.0,
            Model::Dissipative => 2.0,
            Model::Second => 3.0,
        },
        grid.len() as f64,
    ] {
        h = hash_f64(h, value);
    }
    for t in grid {
        h = hash_f64(h, *t);
    }
    h
}

impl TrajectoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fetch or integrate the trajectory for this exact problem.
    pub fn trajectory(
        &self,
        scenario: &Scenario,
        model: Model,
        grid: &[f64],
    ) -> Result<Arc<Trajectory>> {
        let key = scenario_key(scenario, model, grid);
        if let Some(found) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(found));
        }
        let computed = Arc::new(integrate(model, scenario, grid)?);
        self.map
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&computed));
        Ok(computed)
    }
}

/// Integrate both detection hypotheses: σᶻ(0) = +1 for H_L and −1 for H_R,
/// as prepared by the transfer sequence at φ = −π/2.
pub fn run_hypothesis_pair(
    scenario: &Scenario,
    model: Model,
    grid: &[f64],
    cache: Option<&TrajectoryCache>,
) -> Result<(Arc<Trajectory>, Arc<Trajectory>)> {
    let run = |chirality| -> Result<Arc<Trajectory>> {
        let mut hypothesis = scenario.clone();
        hypothesis.sample.sigma_z0 = hypothesis_inversion(chirality, -FRAC_PI_2)?;
        match cache {
            Some(cache) => cache.trajectory(&hypothesis, model, grid),
            None => Ok(Arc::new(integrate(model, &hypothesis, grid)?)),
        }
    };
    Ok((run(Chirality::Left)?, run(Chirality::Right)?))
}

/// Run the full pipeline for one configuration: both hypothesis
/// trajectories plus the homodyne statistics over the configured window.
pub fn hypothesis_statistics(
    config: &RunConfig,
    cache: Option<&TrajectoryCache>,
) -> Result<(Arc<Trajectory>, Arc<Trajectory>, ShotStatistics)> {
    let grid = config.grid();
    let (left, right) = run_hypothesis_pair(&config.scenario(), config.model, &grid, cache)?;
    let stats = ShotStatistics::from_trajectories(&left, &right, &config.homodyne)?;
    Ok((left, right, stats))
}

fn with_pool<T: Send>(jobs: Option<usize>, task: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(task()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
            Ok(pool.install(task))
        }
    }
}

fn dispersive_inputs(scenario: &Scenario, homodyne: &HomodyneConfig, n_m: f64) -> DispersiveInputs {
    DispersiveInputs {
        g0: scenario.g0,
        kappa: scenario.kappa,
        delta_m: scenario.drive.delta_m,
        n_m,
        w0: scenario.w0,
        v: scenario.sample.v,
        lambda: scenario.drive.lambda,
        m_y: homodyne.m_y,
        sigma_z0: 1.0,
    }
}

/// SNR as a function of molecule number at fixed drive and speed.
///
/// Columns: `snr, n_bar_l, n_bar_r, p_err, sigma_z_excursion`.  Any point
/// failure aborts the sweep and names the offending grid point.  When every
/// point sits in the dispersive regime and there are at least three of
/// them, the SNR must fit a line with R² > 0.999 — the fit is recorded in
/// the result metadata.
pub fn snr_vs_nm(
    config: &RunConfig,
    nm_values: &[f64],
    jobs: Option<usize>,
) -> Result<SweepResult> {
    let base = config.scenario();
    let grid = config.grid();
    let homodyne = config.homodyne;
    let evaluated: Vec<Result<SweepPoint>> = with_pool(jobs, || {
        nm_values
            .par_iter()
            .map(|&n_m| {
                let started = Instant::now();
                let mut scenario = base.clone();
                scenario.sample.n_m = n_m;
                let (left, right) =
                    run_hypothesis_pair(&scenario, config.model, &grid, None).map_err(|e| {
                        Error::Sweep {
                            point: format!("n_m = {n_m}"),
                            source: Box::new(e),
                        }
                    })?;
                let stats =
                    ShotStatistics::from_trajectories(&left, &right, &homodyne).map_err(|e| {
                        Error::Sweep {
                            point: format!("n_m = {n_m}"),
                            source: Box::new(e),
                        }
                    })?;
                Ok(SweepPoint {
                    coords: vec![n_m],
                    values: vec![
                        stats.snr,
                        stats.n_bar_l,
                        stats.n_bar_r,
                        stats.p_err,
                        left.sigma_z_excursion(),
                    ],
                    wall_time_s: started.elapsed().as_secs_f64(),
                    failure: None,
                })
            })
            .collect()
    })?;
    let mut result = SweepResult::new(
        config,
        3.0,
        vec!["n_m".into()],
        vec![
            "snr".into(),
            "n_bar_l".into(),
            "n_bar_r".into(),
            "p_err".into(),
            "sigma_z_excursion".into(),
        ],
    );
    result.points = evaluated.into_iter().collect::<Result<Vec<_>>>()?;

    let all_dispersive = nm_values
        .iter()
        .all(|&n_m| dispersive_inputs(&base, &homodyne, n_m).is_dispersive());
    if all_dispersive && nm_values.len() >= 3 {
        let snrs: Vec<f64> = result.points.iter().map(|p| p.values[0]).collect();
        let fit = linear_fit(nm_values, &snrs)?;
        if fit.r_squared <= 0.999 {
            return Err(Error::InvalidInput(format!(
                "snr_vs_nm: dispersive-regime SNR is not linear in N_m (R² = {:.6})",
                fit.r_squared
            )));
        }
        result.linearity = Some(fit);
    }
    Ok(result)
}

/// Result of the critical-molecule-number search.
#[derive(Debug, Clone, Copy)]
pub struct CriticalNm {
    /// Smallest integer molecule number reaching the target SNR.
    pub n_m: u64,
    /// Final real-valued bisection bracket (width < 0.5).
    pub bracket: (f64, f64),
    /// Number of SNR evaluations spent.
    pub evaluations: u32,
}

/// Bisect the real-valued molecule number until the SNR crosses
/// `target_snr`, then round up to an integer count.
///
/// SNR(0) = 0 anchors the lower end; if even 10⁴ molecules miss the target
/// the search reports a bracketing failure rather than extrapolating.
pub fn critical_nm(config: &RunConfig, target_snr: f64) -> Result<CriticalNm> {
    if !(target_snr > 0.0) {
        return Err(Error::InvalidInput("target SNR must be positive".into()));
    }
    let base = config.scenario();
    let grid = config.grid();
    let mut evaluations = 0u32;
    let mut snr_at = |n_m: f64| -> Result<f64> {
        evaluations += 1;
        let mut scenario = base.clone();
        scenario.sample.n_m = n_m;
        let (left, right) = run_hypothesis_pair(&scenario, config.model, &grid, None)?;
        Ok(ShotStatistics::from_trajectories(&left, &right, &config.homodyne)?.snr)
    };
    let mut lo = 0.0;
    let mut hi = CRITICAL_NM_MAX;
    if snr_at(hi)? < target_snr {
        return Err(Error::BracketNotFound {
            what: format!("SNR(N_m) = {target_snr}"),
            lo,
            hi,
        });
    }
    while hi - lo >= 0.5 {
        let mid = 0.5 * (lo + hi);
        if snr_at(mid)? >= target_snr {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalNm {
        n_m: (0.5 * (lo + hi)).ceil() as u64,
        bracket: (lo, hi),
        evaluations,
    })
}

fn config_for_cell(base: &RunConfig, lambda: f64, v: f64) -> RunConfig {
    let mut cell = base.clone();
    cell.drive = DriveConfig::from_lambda(
        lambda,
        cell.drive.delta_m,
        cell.drive.delta_c,
        cell.design.kappa,
        cell.design.g0,
    );
    cell.sample.v = v;
    cell.homodyne = HomodyneConfig {
        phi_lo: cell.homodyne.phi_lo,
        n_lo: cell.homodyne.n_lo,
        ..HomodyneConfig::for_transit(cell.sample.ybar0, v, cell.design.w0, cell.homodyne.m_y)
    };
    cell
}

/// Critical molecule number over a (λ, v) grid.
///
/// Column: `critical_n_m`.  Cell failures (e.g. targets out of reach) are
/// recorded in the failure column as NaN rows and the sweep continues.
pub fn lambda_v_map(
    config: &RunConfig,
    lambdas: &[f64],
    speeds: &[f64],
    target_snr: f64,
    jobs: Option<usize>,
) -> Result<SweepResult> {
    if config.sample.trapped {
        return Err(Error::InvalidInput(
            "the λ–v map is defined for moving samples".into(),
        ));
    }
    let cells: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| speeds.iter().map(move |&v| (l, v)))
        .collect();
    let evaluated: Vec<SweepPoint> = with_pool(jobs, || {
        cells
            .par_iter()
            .map(|&(lambda, v)| {
                let started = Instant::now();
                let cell = config_for_cell(config, lambda, v);
                match critical_nm(&cell, target_snr) {
                    Ok(critical) => SweepPoint {
                        coords: vec![lambda, v],
                        values: vec![critical.n_m as f64],
                        wall_time_s: started.elapsed().as_secs_f64(),
                        failure: None,
                    },
                    Err(error) => SweepPoint {
                        coords: vec![lambda, v],
                        values: vec![f64::NAN],
                        wall_time_s: started.elapsed().as_secs_f64(),
                        failure: Some(error.to_string()),
                    },
                }
            })
            .collect()
    })?;
    let mut result = SweepResult::new(
        config,
        target_snr,
        vec!["lambda".into(), "v".into()],
        vec!["critical_n_m".into()],
    );
    result.points = evaluated;
    Ok(result)
}

/// Validate that the critical number does not grow with drive strength:
/// along each speed row, N_crit(λ) must be non-increasing within 2% slack.
pub fn check_lambda_monotonicity(map: &SweepResult) -> Result<()> {
    if map.axes != ["lambda", "v"] {
        return Err(Error::InvalidInput(
            "monotonicity check expects a λ–v map".into(),
        ));
    }
    let mut by_speed: HashMap<u64, Vec<(f64, f64)>> = HashMap::new();
    for point in &map.points {
        if point.failure.is_some() {
            continue;
        }
        by_speed
            .entry(point.coords[1].to_bits())
            .or_default()
            .push((point.coords[0], point.values[0]));
    }
    for row in by_speed.values_mut() {
        row.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in row.windows(2) {
            let ((l0, n0), (l1, n1)) = (pair[0], pair[1]);
            if n1 > n0 * 1.02 {
                return Err(Error::ConfigValidation(format!(
                    "critical N_m grew with λ: N({l1}) = {n1} > 1.02·N({l0}) = {:.1}",
                    n0 * 1.02
                )));
            }
        }
    }
    Ok(())
}

/// Dispatch a [`SweepSpec`] by its axis names: `n_m` runs the SNR table,
/// `lambda` × `v` runs the critical-number map.  Saves CSV when an output
/// path is set.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let names: Vec<&str> = spec.axes.iter().map(|a| a.name.as_str()).collect();
    let result = match names.as_slice() {
        ["n_m"] => snr_vs_nm(&spec.config, &spec.axes[0].values, spec.jobs)?,
        ["lambda", "v"] => lambda_v_map(
            &spec.config,
            &spec.axes[0].values,
            &spec.axes[1].values,
            spec.target_snr,
            spec.jobs,
        )?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unsupported sweep axes {other:?}: expected [n_m] or [lambda, v]"
            )))
        }
    };
    if let Some(path) = &spec.out {
        result.save_csv(path)?;
    }
    Ok(result)
}

/// Maximum pointwise deviations between the first-order and second-order
/// cumulant models on the same scenario.
#[derive(Debug, Clone, Copy)]
pub struct OrderComparison {
    /// max_t |c₁ − c₂| / max_t |c₁|.
    pub max_rel_dev_c: f64,
    /// max_t of the wrapped |arg c₁ − arg c₂| (rad).
    pub max_dev_arg_c: f64,
    /// max_t |σᶻ₁ − σᶻ₂|.
    pub max_dev_sigma_z: f64,
    /// Homodyne-count contrast |n̄₁ − n̄₂| / |n̄₁ + n̄₂| over the window.
    pub eta_cmp: f64,
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % std::f64::consts::TAU;
    if x > std::f64::consts::PI {
        x -= std::f64::consts::TAU;
    } else if x < -std::f64::consts::PI {
        x += std::f64::consts::TAU;
    }
    x
}

/// Integrate the scenario at both cumulant orders and report the largest
/// pointwise disagreements plus the homodyne-count contrast.
pub fn order_comparison(config: &RunConfig) -> Result<OrderComparison> {
    if config.sample.n_m > ORDER_COMPARISON_NM_MAX {
        return Err(Error::InvalidInput(format!(
            "order comparison supports N_m ≤ {ORDER_COMPARISON_NM_MAX:.0}: \
             beyond that the truncation error estimate is itself unreliable",
        )));
    }
    let scenario = config.scenario();
    let grid = config.grid();
    let first = integrate(Model::First, &scenario, &grid)?;
    let second = integrate(Model::Second, &scenario, &grid)?;
    let c_scale = first
        .c
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut max_rel_dev_c = 0.0f64;
    let mut max_dev_arg_c = 0.0f64;
    let mut max_dev_sigma_z = 0.0f64;
    for i in 0..grid.len() {
        let (c1, c2) = (first.c[i], second.c[i]);
        max_rel_dev_c = max_rel_dev_c.max((c1 - c2).norm() / c_scale);
        if c1.norm() > 1e-9 * c_scale && c2.norm() > 1e-9 * c_scale {
            max_dev_arg_c = max_dev_arg_c.max(wrap_angle(c1.arg() - c2.arg()).abs());
        }
        max_dev_sigma_z = max_dev_sigma_z.max((first.sigma_z[i] - second.sigma_z[i]).abs());
    }
    let n1 = integrate_signal(&first, &config.homodyne)?;
    let n2 = integrate_signal(&second, &config.homodyne)?;
    let eta_cmp = (n1 - n2).abs() / (n1 + n2).abs().max(f64::MIN_POSITIVE);
    Ok(OrderComparison {
        max_rel_dev_c,
        max_dev_arg_c,
        max_dev_sigma_z,
        eta_cmp,
    })
}

/// Deviations induced by switching dissipation on at fixed drive.
#[derive(Debug, Clone, Copy)]
pub struct DissipationReport {
    /// max_t |c_γ − c₀| / max_t |c₀|.
    pub max_rel_dev_c: f64,
    /// max_t |σᶻ_γ − σᶻ₀|.
    pub max_dev_sigma_z: f64,
    /// Budget both deviations are judged against.
    pub tolerance: f64,
    pub passes: bool,
}

/// Compare the ideal first-order run against the dissipative model with the
/// given rates on the same scenario and grid.
pub fn dissipation_check(
    config: &RunConfig,
    dissipation: DissipationParams,
) -> Result<DissipationReport> {
    let grid = config.grid();
    let mut ideal = config.scenario();
    ideal.dissipation = DissipationParams::default();
    let mut lossy = ideal.clone();
    lossy.dissipation = dissipation;
    let base = integrate(Model::First, &ideal, &grid)?;
    let damped = integrate(Model::Dissipative, &lossy, &grid)?;
    let c_scale = base
        .c
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut max_rel_dev_c = 0.0f64;
    let mut max_dev_sigma_z = 0.0f64;
    for i in 0..grid.len() {
        max_rel_dev_c = max_rel_dev_c.max((base.c[i] - damped.c[i]).norm() / c_scale);
        max_dev_sigma_z = max_dev_sigma_z.max((base.sigma_z[i] - damped.sigma_z[i]).abs());
    }
    let passes = max_rel_dev_c < DISSIPATION_TOLERANCE && max_dev_sigma_z < DISSIPATION_TOLERANCE;
    Ok(DissipationReport {
        max_rel_dev_c,
        max_dev_sigma_z,
        tolerance: DISSIPATION_TOLERANCE,
        passes,
    })
}
