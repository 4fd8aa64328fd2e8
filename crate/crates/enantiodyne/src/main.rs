//! Command-line front end.
//!
//! Every subcommand prints its primary artifact (CSV table, trajectory,
//! or JSON report) to stdout; `--out FILE` additionally writes the same
//! bytes to a file, and when `--out` is omitted the `ENANTIODYNE_OUT_DIR`
//! environment variable, if set, supplies a directory for a default file
//! name.  Runtime failures are reported as a single JSON object on stderr
//! with a nonzero exit code; configuration notices go to stderr as plain
//! `notice:` lines.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use enantiodyne::acceptance;
use enantiodyne::analytics::{
    critical_photon_number, critical_trap_time, dipole_bound, dispersive_phase, figure_of_merit,
    optimal_window, snr_moving, snr_simplified, snr_trapped, window_gain, DispersiveInputs,
};
use enantiodyne::cavity::{CavityDesign, MirrorReference};
use enantiodyne::config::RunConfig;
use enantiodyne::constants::SPEED_OF_LIGHT;
use enantiodyne::detection::monte_carlo_error_rate;
use enantiodyne::dynamics::{integrate, Model};
use enantiodyne::error::{Error, Result};
use enantiodyne::harness::{
    hypothesis_statistics, run_sweep, SweepAxis, SweepSpec, TrajectoryCache,
};
use enantiodyne::molecule::{
    apply_pulse_sequence, hypothesis_inversion, Chirality, MoleculeSpec, ThreeLevelState,
};

const OUT_DIR_ENV: &str = "ENANTIODYNE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "enantiodyne",
    version,
    about = "Cavity-QED toolkit for single-shot microwave discrimination of molecular handedness",
    after_help = "Primary output goes to stdout; --out FILE writes the same bytes to a file.\n\
                  When --out is omitted, ENANTIODYNE_OUT_DIR (if set) receives a default file.\n\
                  Runtime failures print one JSON object on stderr and exit nonzero."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design symmetric Fabry-Pérot modes for a target frequency (CSV table)
    DesignCavity(DesignCavityArgs),
    /// Propagate the three-pulse enantioselective transfer sequence (JSON)
    Esst(EsstArgs),
    /// Integrate the cavity-molecule dynamics and emit the trajectory (CSV)
    Simulate(SimulateArgs),
    /// Run both hypotheses and report homodyne shot statistics (JSON)
    Detect(DetectArgs),
    /// Closed-form figures of merit for a configuration (JSON)
    Analytics(AnalyticsArgs),
    /// Parameter sweeps: SNR vs molecule number, or critical number over (lambda, v) (CSV)
    Sweep(SweepArgs),
    /// Monte-Carlo validation of the decision error rate (JSON)
    Montecarlo(MontecarloArgs),
    /// Run the built-in acceptance criteria and exit nonzero on any failure
    Check(CheckArgs),
}

/// Options shared by every subcommand that loads a run configuration.
#[derive(Args)]
struct ConfigOpts {
    /// Run configuration file (sectioned key=value text, or .json)
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Override the dynamics model: first | dissipative | second
    #[arg(long, value_name = "MODEL")]
    model: Option<String>,
    /// Override the PRNG seed
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Override the integrator relative tolerance (absolute follows at 1/100)
    #[arg(long, value_name = "RTOL")]
    tolerance: Option<f64>,
}

impl ConfigOpts {
    fn load(&self) -> Result<RunConfig> {
        let mut config = RunConfig::load(&self.config)?;
        if let Some(model) = &self.model {
            config.model = model.parse()?;
            if config.model == Model::Dissipative
                && config.dissipation.gamma == 0.0
                && config.dissipation.v_max == 0.0
            {
                let (derived, notice) = config.derive_dissipation();
                config.dissipation = derived;
                config.notices.push(format!("--model dissipative: {notice}"));
            }
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(rtol) = self.tolerance {
            if !(rtol > 0.0) {
                return Err(Error::InvalidInput(
                    "--tolerance must be a positive relative tolerance".into(),
                ));
            }
            config.options.rtol = rtol;
            config.options.atol = rtol * 1e-2;
        }
        for notice in &config.notices {
            eprintln!("notice: {notice}");
        }
        Ok(config)
    }
}

fn resolve_out(explicit: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    if let Some(path) = explicit {
        return Some(path.clone());
    }
    std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name))
}

/// Print the payload to stdout and mirror the same bytes to the resolved
/// output file, if any.  A closed stdout (e.g. piping into `head`) is not
/// an error: the file, when requested, is still written in full.
fn emit(payload: &str, explicit: &Option<PathBuf>, default_name: &str) -> Result<()> {
    use std::io::Write;
    let text = if payload.ends_with('\n') {
        payload.to_string()
    } else {
        format!("{payload}\n")
    };
    if let Err(error) = std::io::stdout().write_all(text.as_bytes()) {
        if error.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(error.into());
        }
    }
    if let Some(path) = resolve_out(explicit, default_name) {
        std::fs::write(path, text.as_bytes())?;
    }
    Ok(())
}

#[derive(Args)]
struct DesignCavityArgs {
    /// Longitudinal mode indices to design (comma-separated)
    #[arg(long, value_name = "Q", value_delimiter = ',', default_values_t = [0u32, 1, 2])]
    q: Vec<u32>,
    /// Mirror curvature radius (mm)
    #[arg(long, value_name = "MM", default_value_t = 40.0)]
    mirror_radius_mm: f64,
    /// Target mode frequency (GHz)
    #[arg(long, value_name = "GHZ", default_value_t = 5.78109)]
    target_ghz: f64,
    /// Also write the table to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn design_cavity(args: &DesignCavityArgs) -> Result<()> {
    let mu_b = MoleculeSpec::propanediol(Chirality::Left).mu_b;
    let reference = MirrorReference::default();
    let mut table = String::new();
    table.push_str(&format!(
        "# enantiodyne design-cavity (R_m = {} mm, f_target = {} GHz)\n",
        args.mirror_radius_mm, args.target_ghz
    ));
    table.push_str(CavityDesign::csv_header());
    table.push('\n');
    for &q in &args.q {
        let design = CavityDesign::solve(
            args.mirror_radius_mm * 1e-3,
            q,
            args.target_ghz * 1e9,
            &reference,
            mu_b,
        )?;
        table.push_str(&design.csv_row());
        table.push('\n');
    }
    emit(&table, &args.out, "cavity_designs.csv")
}

#[derive(Args)]
struct EsstArgs {
    /// Closed-loop drive phase (rad)
    #[arg(long, value_name = "RAD", default_value_t = -FRAC_PI_2, allow_negative_numbers = true)]
    phi: f64,
    /// Enantiomer(s) to propagate: left | right | both
    #[arg(long, default_value = "both")]
    chirality: String,
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn state_json(state: &ThreeLevelState) -> serde_json::Value {
    let amplitudes: Vec<[f64; 2]> = (0..3).map(|k| [state.0[k].re, state.0[k].im]).collect();
    let populations: Vec<f64> = (0..3).map(|k| state.0[k].norm_sqr()).collect();
    json!({ "amplitudes_re_im": amplitudes, "populations": populations })
}

fn esst(args: &EsstArgs) -> Result<()> {
    let requested: Vec<Chirality> = match args.chirality.as_str() {
        "both" => vec![Chirality::Left, Chirality::Right],
        other => vec![other.parse()?],
    };
    let mut entries = Vec::new();
    for chirality in requested {
        let outcome = apply_pulse_sequence(&ThreeLevelState::basis(1), args.phi, chirality);
        let inversion = hypothesis_inversion(chirality, args.phi).ok();
        entries.push(json!({
            "chirality": chirality.to_string(),
            "after_first_pulse": state_json(&outcome.intermediate_i),
            "after_second_pulse": state_json(&outcome.intermediate_ii),
            "final_state": state_json(&outcome.final_state),
            "sigma_z0": inversion,
        }));
    }
    let report = serde_json::to_string_pretty(&json!({
        "phi_rad": args.phi,
        "initial_state": "level 1",
        "outcomes": entries,
    }))?;
    emit(&report, &args.out, "esst.json")
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigOpts,
    /// Hypothesis to integrate: left | right | config (the configured σᶻ(0))
    #[arg(long, default_value = "config")]
    hypothesis: String,
    /// Also write the trajectory to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let config = args.config.load()?;
    let mut scenario = config.scenario();
    match args.hypothesis.as_str() {
        "config" => {}
        other => {
            let chirality: Chirality = other.parse()?;
            scenario.sample.sigma_z0 = hypothesis_inversion(chirality, -FRAC_PI_2)?;
        }
    }
    let trajectory = integrate(config.model, &scenario, &config.grid())?;
    let mut csv = Vec::new();
    trajectory.write_csv(&mut csv, config.homodyne.phi_lo)?;
    let csv = String::from_utf8(csv).expect("CSV is UTF-8");
    emit(&csv, &args.out, "trajectory.csv")
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    config: ConfigOpts,
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn detect(args: &DetectArgs) -> Result<()> {
    let config = args.config.load()?;
    let (left, right, stats) = hypothesis_statistics(&config, None)?;
    let report = serde_json::to_string_pretty(&json!({
        "model": config.model.to_string(),
        "config_hash": format!("{:#018x}", config.config_hash),
        "window": {
            "t0_s": config.homodyne.t0,
            "tf_s": config.homodyne.tf,
            "phi_lo_rad": config.homodyne.phi_lo,
            "n_lo_per_s": config.homodyne.n_lo,
            "m_y": config.homodyne.m_y,
            "gaussian_count": config.homodyne.gaussian_count(),
            "gaussian_valid": config.homodyne.is_gaussian_valid(),
        },
        "n_bar_left": stats.n_bar_l,
        "n_bar_right": stats.n_bar_r,
        "noise_stddev": stats.delta,
        "snr": stats.snr,
        "p_err": stats.p_err,
        "antisymmetry_defect": stats.antisymmetry_defect(),
        "sigma_z_excursion_left": left.sigma_z_excursion(),
        "sigma_z_excursion_right": right.sigma_z_excursion(),
    }))?;
    emit(&report, &args.out, "detect.json")
}

#[derive(Args)]
struct AnalyticsArgs {
    #[command(flatten)]
    config: ConfigOpts,
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn analytics(args: &AnalyticsArgs) -> Result<()> {
    let config = args.config.load()?;
    let scenario = config.scenario();
    let inputs = DispersiveInputs {
        g0: scenario.g0,
        kappa: scenario.kappa,
        delta_m: scenario.drive.delta_m,
        n_m: scenario.sample.n_m,
        w0: scenario.w0,
        v: scenario.sample.v,
        lambda: scenario.drive.lambda,
        m_y: config.homodyne.m_y,
        sigma_z0: scenario.sample.sigma_z0,
    };
    let gbar_peak = scenario.g0 / 2.0;
    let molecule = &config.molecule;
    let gamma = molecule.decay_rate_32();
    let k_m = molecule.omega_32() / SPEED_OF_LIGHT;
    let bounds = dipole_bound(gamma, scenario.sample.n_m, scenario.sample.l_sample, k_m);
    let m_star = optimal_window();
    let report = serde_json::to_string_pretty(&json!({
        "design": {
            "d_m": config.design.geometry.d,
            "f_q_hz": config.design.f_q,
            "w0_m": config.design.w0,
            "g0_rad_per_s": config.design.g0,
            "kappa_rad_per_s": config.design.kappa,
            "q_factor": config.design.q_factor,
        },
        "drive": {
            "lambda": scenario.drive.lambda,
            "eta_rad_per_s": scenario.drive.eta,
            "delta_m_rad_per_s": scenario.drive.delta_m,
            "critical_photon_number": critical_photon_number(scenario.drive.delta_m, scenario.g0),
            "initial_photon_number": scenario.drive.photon_number(scenario.kappa),
        },
        "dispersive": {
            "valid": inputs.is_dispersive(),
            "phase_left_rad": dispersive_phase(gbar_peak, inputs.n_m, inputs.kappa, inputs.delta_m, 1.0),
            "phase_right_rad": dispersive_phase(gbar_peak, inputs.n_m, inputs.kappa, inputs.delta_m, -1.0),
            "snr_moving": snr_moving(&inputs),
            "snr_simplified": snr_simplified(&inputs),
            "figure_of_merit": figure_of_merit(scenario.g0, scenario.w0, scenario.kappa),
            "optimal_window": m_star,
            "window_gain_at_optimum": window_gain(m_star),
        },
        "trapped": {
            "single_molecule_time_s": 18.0 * scenario.kappa / (scenario.g0 * scenario.g0),
            "critical_trap_time_s":
                critical_trap_time(scenario.g0, scenario.drive.lambda, scenario.kappa, scenario.sample.n_m, 3.0),
            "snr_at_t_end": snr_trapped(
                scenario.g0, scenario.sample.n_m, scenario.drive.lambda, scenario.kappa, config.t_end),
        },
        "interaction_bounds": {
            "gamma_rad_per_s": bounds.gamma_bound,
            "v_max_rad_per_s": bounds.v_max,
            "k_m_rad_per_m": k_m,
            "l_sample_m": scenario.sample.l_sample,
        },
    }))?;
    emit(&report, &args.out, "analytics.json")
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigOpts,
    /// Sweep kind: snr-vs-nm | lambda-v
    #[arg(long, value_name = "KIND")]
    kind: String,
    /// Molecule numbers for snr-vs-nm (comma-separated)
    #[arg(long, value_delimiter = ',', value_name = "N")]
    nm: Vec<f64>,
    /// Drive ratios λ for lambda-v (comma-separated)
    #[arg(long, value_delimiter = ',', value_name = "L")]
    lambdas: Vec<f64>,
    /// Sample speeds in m/s for lambda-v (comma-separated)
    #[arg(long, value_delimiter = ',', value_name = "V")]
    speeds: Vec<f64>,
    /// Target SNR for critical-number searches
    #[arg(long, default_value_t = 3.0)]
    target_snr: f64,
    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Also write the table to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let config = args.config.load()?;
    let axes = match args.kind.as_str() {
        "snr-vs-nm" => {
            if args.nm.is_empty() {
                return Err(Error::InvalidInput(
                    "snr-vs-nm needs --nm with at least one molecule number".into(),
                ));
            }
            vec![SweepAxis::new("n_m", args.nm.clone())]
        }
        "lambda-v" => {
            if args.lambdas.is_empty() || args.speeds.is_empty() {
                return Err(Error::InvalidInput(
                    "lambda-v needs --lambdas and --speeds".into(),
                ));
            }
            vec![
                SweepAxis::new("lambda", args.lambdas.clone()),
                SweepAxis::new("v", args.speeds.clone()),
            ]
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown sweep kind `{other}`: expected snr-vs-nm or lambda-v"
            )))
        }
    };
    let mut spec = SweepSpec::new(config, axes);
    spec.target_snr = args.target_snr;
    spec.jobs = args.jobs;
    let result = run_sweep(&spec)?;
    emit(&result.to_csv(), &args.out, "sweep.csv")
}

#[derive(Args)]
struct MontecarloArgs {
    #[command(flatten)]
    config: ConfigOpts,
    /// Shots drawn per hypothesis (at least 1000)
    #[arg(long, default_value_t = 500_000)]
    shots: u64,
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn montecarlo(args: &MontecarloArgs) -> Result<()> {
    let config = args.config.load()?;
    let cache = TrajectoryCache::new();
    let (_, _, stats) = hypothesis_statistics(&config, Some(&cache))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let outcome = monte_carlo_error_rate(&stats, &config.homodyne, args.shots, &mut rng)?;
    // Consistency band from the binomial error of the *analytic* rate over
    // all decisions, so a clean zero-error run at tiny p still reads as
    // consistent rather than tripping on a degenerate sampled error bar.
    let total_decisions = 2.0 * outcome.shots_per_hypothesis as f64;
    let analytic_se = (stats.p_err * (1.0 - stats.p_err) / total_decisions).sqrt();
    let consistent = (outcome.error_rate - stats.p_err).abs() <= 3.0 * analytic_se;
    let report = serde_json::to_string_pretty(&json!({
        "seed": config.seed,
        "shots_per_hypothesis": outcome.shots_per_hypothesis,
        "snr": stats.snr,
        "analytic_p_err": stats.p_err,
        "error_rate": outcome.error_rate,
        "standard_error": outcome.standard_error,
        "consistent_within_3_se": consistent,
    }))?;
    emit(&report, &args.out, "montecarlo.json")
}

#[derive(Args)]
struct CheckArgs {
    /// Emit the criteria as a JSON array instead of text lines
    #[arg(long)]
    json: bool,
}

fn check(args: &CheckArgs) -> Result<ExitCode> {
    let results = acceptance::run_all();
    if args.json {
        let entries: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for result in &results {
            println!("{}", result.line());
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        eprintln!("{failed} of {} criteria failed", results.len());
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::DesignCavity(args) => design_cavity(args)?,
        Command::Esst(args) => esst(args)?,
        Command::Simulate(args) => simulate(args)?,
        Command::Detect(args) => detect(args)?,
        Command::Analytics(args) => analytics(args)?,
        Command::Sweep(args) => sweep(args)?,
        Command::Montecarlo(args) => montecarlo(args)?,
        Command::Check(args) => return check(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("{}", json!({ "error": error.to_string() }));
            ExitCode::FAILURE
        }
    }
}
