//! Driven Tavis–Cummings mean-field dynamics.
//!
//! Three model tiers integrate the cavity amplitude c, the collective
//! coherence σ and the inversion σ^z of N_m identical molecules crossing (or
//! trapped at) the cavity waist:
//!
//! * `First` — first-order cumulant (factorized) equations,
//! * `Dissipative` — first order plus free-space decay γ, the dipole–dipole
//!   interaction bound V_max, collective decay and a cavity–probe detuning,
//! * `Second` — the full homogenized second-order cumulant hierarchy
//!   (see [`crate::second_order`]).
//!
//! All rates are angular (rad/s); time is in seconds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::averaged_coupling;
use crate::error::{Error, Result};
use crate::integrator::{solve_on_grid, uniform_grid, IntegratorOptions, OdeSystem};
use crate::second_order;
use crate::trajectory::Trajectory;

/// Which equations of motion to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    First,
    Dissipative,
    Second,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" => Ok(Model::First),
            "dissipative" => Ok(Model::Dissipative),
            "second" => Ok(Model::Second),
            other => Err(Error::InvalidInput(format!(
                "unknown model '{other}' (expected first|dissipative|second)"
            ))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::First => write!(f, "first"),
            Model::Dissipative => write!(f, "dissipative"),
            Model::Second => write!(f, "second"),
        }
    }
}

/// Probe drive parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DriveConfig {
    /// Pump amplitude η (rad/s); the empty-cavity amplitude is c = η/κ.
    pub eta: f64,
    /// Molecule–probe detuning Δ_m (rad/s).
    pub delta_m: f64,
    /// Cavity–probe detuning Δ_c (rad/s, 0 for the resonant probe).
    pub delta_c: f64,
    /// Drive strength ratio λ = N₀/N_cr.
    pub lambda: f64,
}

impl DriveConfig {
    /// Build a drive at strength ratio λ: η = κ√(λ·N_cr) with
    /// N_cr = 4Δ_m²/g₀².
    pub fn from_lambda(lambda: f64, delta_m: f64, delta_c: f64, kappa: f64, g0: f64) -> Self {
        let n_cr = crate::analytics::critical_photon_number(delta_m, g0);
        Self {
            eta: kappa * (lambda * n_cr).sqrt(),
            delta_m,
            delta_c,
            lambda,
        }
    }

    /// Empty-cavity photon number N₀ = η²/κ².
    pub fn photon_number(&self, kappa: f64) -> f64 {
        (self.eta / kappa).powi(2)
    }
}

/// Molecular sample parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Number of molecules (real-valued: root finders treat it as a
    /// continuous ODE parameter).
    pub n_m: f64,
    /// Forward speed v (m/s).
    pub v: f64,
    /// Initial mean position Ȳ₀ relative to the waist (m); −4w₀ for the
    /// standard transit.
    pub ybar0: f64,
    /// Trapped sample: the coupling stops growing once the sample reaches
    /// the waist center (a sample starting there sees a constant ḡ = g₀/2).
    pub trapped: bool,
    /// Initial inversion σ^z(0) ∈ {+1, −1} selected by the ESST hypothesis.
    pub sigma_z0: f64,
    /// Transverse sample size (m); diagnostic only (dipole–dipole bound).
    pub l_sample: f64,
}

impl SampleConfig {
    /// Transit time scale τ = w₀/v.
    pub fn tau(&self, w0: f64) -> f64 {
        w0 / self.v
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_m < 0.0 {
            return Err(Error::InvalidInput("molecule number must be ≥ 0".into()));
        }
        if !self.trapped && self.v <= 0.0 {
            return Err(Error::InvalidInput(
                "moving samples need a positive speed".into(),
            ));
        }
        if self.sigma_z0.abs() > 1.0 + 1e-12 {
            return Err(Error::InvalidInput("|σ^z(0)| must be ≤ 1".into()));
        }
        Ok(())
    }
}

/// Dissipation channels of the `Dissipative` model.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct DissipationParams {
    /// Free-space decay rate γ of the cavity-coupled transition (rad/s).
    pub gamma: f64,
    /// Upper bound V_max of the dipole–dipole interaction strength (rad/s).
    pub v_max: f64,
}

/// First-order mean-field state (c, σ, σ^z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState {
    /// Cavity amplitude (√photons).
    pub c: Complex64,
    /// Mean single-molecule coherence ⟨σ̂⟩.
    pub sigma: Complex64,
    /// Mean inversion ⟨σ̂^z⟩.
    pub sigma_z: f64,
}

impl MeanFieldState {
    /// Bloch invariant (σ^z)² + 4|σ|², conserved by the first-order flow.
    pub fn bloch_norm(&self) -> f64 {
        self.sigma_z * self.sigma_z + 4.0 * self.sigma.norm_sqr()
    }
}

/// Sample-averaged coupling at time t: a Gaussian transit for moving
/// samples; for trapped samples the approach is clamped at the waist center
/// (ḡ = g₀/2 from the moment of arrival, constant for a sample that starts
/// there).
pub fn coupling_profile(sample: &SampleConfig, g0: f64, w0: f64, t: f64) -> f64 {
    let y = sample.ybar0 + sample.v * t;
    let y_eff = if sample.trapped { y.min(0.0) } else { y };
    averaged_coupling(g0, y_eff, w0)
}

/// First-order cumulant derivatives:
/// ċ = −κc − iḡN_mσ + η, σ̇ = −iΔ_mσ + iḡcσ^z, σ̇^z = 2iḡ(c*σ − cσ*).
pub fn deriv_first_order(
    state: &MeanFieldState,
    gbar: f64,
    kappa: f64,
    drive: &DriveConfig,
    sample: &SampleConfig,
) -> MeanFieldState {
    let ig = Complex64::i() * gbar;
    let dc = -kappa * state.c - ig * sample.n_m * state.sigma + drive.eta;
    let dsigma = -Complex64::i() * drive.delta_m * state.sigma + ig * state.c * state.sigma_z;
    let dsigma_z =
        (2.0 * ig * (state.c.conj() * state.sigma - state.c * state.sigma.conj())).re;
    MeanFieldState {
        c: dc,
        sigma: dsigma,
        sigma_z: dsigma_z,
    }
}

/// Dissipative mean-field derivatives:
/// ċ = −(κ + iΔ_c)c − iḡN_mσ + η,
/// σ̇ = −(γ + iΔ_m)σ + iḡcσ^z + (N_m−1)(iV_max + γ)σ^zσ,
/// σ̇^z = −2γ(σ^z + 1) + 2iḡ(c*σ − cσ*) − 4(N_m−1)γσ*σ.
///
/// With γ = V_max = Δ_c = 0 this *is* the first-order derivative — the same
/// code path runs, so the reduction is bitwise exact.
pub fn deriv_dissipative(
    state: &MeanFieldState,
    gbar: f64,
    kappa: f64,
    drive: &DriveConfig,
    sample: &SampleConfig,
    diss: &DissipationParams,
) -> MeanFieldState {
    if diss.gamma == 0.0 && diss.v_max == 0.0 && drive.delta_c == 0.0 {
        return deriv_first_order(state, gbar, kappa, drive, sample);
    }
    let ig = Complex64::i() * gbar;
    let pair = sample.n_m - 1.0;
    let dc = -(Complex64::new(kappa, drive.delta_c)) * state.c - ig * sample.n_m * state.sigma
        + drive.eta;
    let dsigma = -Complex64::new(diss.gamma, drive.delta_m) * state.sigma
        + ig * state.c * state.sigma_z
        + pair * Complex64::new(diss.gamma, diss.v_max) * state.sigma_z * state.sigma;
    let dsigma_z = -2.0 * diss.gamma * (state.sigma_z + 1.0)
        + (2.0 * ig * (state.c.conj() * state.sigma - state.c * state.sigma.conj())).re
        - 4.0 * pair * diss.gamma * state.sigma.norm_sqr();
    MeanFieldState {
        c: dc,
        sigma: dsigma,
        sigma_z: dsigma_z,
    }
}

/// Closed-form quasi-steady cavity amplitude
/// c = η/(κ + iḡ²N_mσ^z/Δ_m) of the dispersive regime.
pub fn steady_state_dispersive(
    gbar: f64,
    drive: &DriveConfig,
    n_m: f64,
    sigma_z: f64,
    kappa: f64,
) -> Complex64 {
    drive.eta / Complex64::new(kappa, gbar * gbar * n_m * sigma_z / drive.delta_m)
}

/// Everything needed to integrate one scenario.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub drive: DriveConfig,
    pub sample: SampleConfig,
    pub dissipation: DissipationParams,
    /// Single-photon coupling of the design (rad/s).
    pub g0: f64,
    /// Cavity waist (m).
    pub w0: f64,
    /// Cavity decay rate (rad/s).
    pub kappa: f64,
    pub options: IntegratorOptions,
}

impl Scenario {
    /// Transit time scale τ = w₀/v.
    pub fn tau(&self) -> f64 {
        self.sample.tau(self.w0)
    }

    /// Initial mean-field state: filled cavity c(0) = η/κ, ground coherence,
    /// hypothesis-selected inversion.
    pub fn initial_state(&self) -> MeanFieldState {
        MeanFieldState {
            c: Complex64::from(self.drive.eta / self.kappa),
            sigma: Complex64::from(0.0),
            sigma_z: self.sample.sigma_z0,
        }
    }

    /// Default output grid for a transit: t ∈ [0, 8τ], spacing τ/1000.
    pub fn transit_grid(&self) -> Vec<f64> {
        let tau = self.tau();
        uniform_grid(0.0, 8.0 * tau, 8000)
    }

    /// Default output grid for a trapped run: 10⁴ uniform samples.
    pub fn trapped_grid(&self, t_end: f64) -> Vec<f64> {
        uniform_grid(0.0, t_end, 10_000)
    }
}

/// First-order / dissipative equations flattened for the integrator:
/// y = [Re c, Im c, Re σ, Im σ, σ^z].
struct MeanFieldSystem<'a> {
    scenario: &'a Scenario,
    model: Model,
}

impl MeanFieldSystem<'_> {
    fn unpack(y: &[f64]) -> MeanFieldState {
        MeanFieldState {
            c: Complex64::new(y[0], y[1]),
            sigma: Complex64::new(y[2], y[3]),
            sigma_z: y[4],
        }
    }

    fn pack(state: &MeanFieldState, y: &mut [f64]) {
        y[0] = state.c.re;
        y[1] = state.c.im;
        y[2] = state.sigma.re;
        y[3] = state.sigma.im;
        y[4] = state.sigma_z;
    }
}

impl OdeSystem for MeanFieldSystem<'_> {
    fn dim(&self) -> usize {
        5
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        let sc = self.scenario;
        let state = Self::unpack(y);
        let gbar = coupling_profile(&sc.sample, sc.g0, sc.w0, t);
        let d = match self.model {
            Model::First => deriv_first_order(&state, gbar, sc.kappa, &sc.drive, &sc.sample),
            Model::Dissipative => deriv_dissipative(
                &state,
                gbar,
                sc.kappa,
                &sc.drive,
                &sc.sample,
                &sc.dissipation,
            ),
            Model::Second => unreachable!("second-order model uses its own system"),
        };
        Self::pack(&d, dydt);
    }
}

/// Integrate `scenario` under the chosen model, sampling on `grid`
/// (strictly increasing; `grid[0]` is the initial time).
pub fn integrate(model: Model, scenario: &Scenario, grid: &[f64]) -> Result<Trajectory> {
    scenario.sample.validate()?;
    if model == Model::Second {
        return second_order::integrate_second(scenario, grid);
    }
    let system = MeanFieldSystem { scenario, model };
    let init = scenario.initial_state();
    let mut y0 = [0.0; 5];
    MeanFieldSystem::pack(&init, &mut y0);
    let rows = solve_on_grid(&system, &y0, grid, &scenario.options)?;

    let mut trajectory = Trajectory::with_capacity(grid.len(), scenario.kappa);
    for (ti, row) in grid.iter().zip(rows.iter()) {
        let state = MeanFieldSystem::unpack(row);
        trajectory.push(
            *ti,
            state.c,
            state.sigma,
            state.sigma_z,
            coupling_profile(&scenario.sample, scenario.g0, scenario.w0, *ti),
        );
    }
    Ok(trajectory)
}

/// Integrate over the default transit span [0, 8τ].
pub fn integrate_transit(model: Model, scenario: &Scenario) -> Result<Trajectory> {
    integrate(model, scenario, &scenario.transit_grid())
}
