//! Second-order cumulant hierarchy.
//!
//! The first-order (factorized) equations ignore quantum correlations
//! between the cavity field and the molecules and among molecules.  This
//! module keeps every first- and second-order moment of the homogenized
//! system of N_m identical two-level emitters coupled to a single driven
//! mode, closing the hierarchy by setting third-order cumulants to zero.
//! Twelve complex moments evolve:
//!
//! | field     | moment                    |
//! |-----------|---------------------------|
//! | `c`       | ⟨ĉ⟩                       |
//! | `sigma`   | ⟨σ̂⟩                       |
//! | `sigma_z` | ⟨σ̂ᶻ⟩                      |
//! | `sz_c`    | ⟨σ̂ᶻĉ⟩                     |
//! | `sdag_c`  | ⟨σ̂⁺ĉ⟩                     |
//! | `sdag_s`  | ⟨σ̂ⱼ⁺σ̂ₖ⟩, j ≠ k            |
//! | `sz_s`    | ⟨σ̂ⱼᶻσ̂ₖ⟩, j ≠ k            |
//! | `sz_sz`   | ⟨σ̂ⱼᶻσ̂ₖᶻ⟩, j ≠ k           |
//! | `cc`      | ⟨ĉĉ⟩                      |
//! | `sigma_c` | ⟨σ̂ĉ⟩                      |
//! | `photon`  | ⟨ĉ†ĉ⟩                     |
//! | `ss`      | ⟨σ̂ⱼσ̂ₖ⟩, j ≠ k             |
//!
//! Physically real moments (⟨σ̂ᶻ⟩, ⟨σ̂ⱼᶻσ̂ₖᶻ⟩, ⟨ĉ†ĉ⟩) are carried as complex
//! numbers; their imaginary parts must stay at rounding level, which
//! [`SecondOrderRun::realness_leak`] measures as a consistency check.
//!
//! The key physics beyond first order: the ⟨σ̂⁺ĉ⟩ equation contains the
//! spontaneous-seed term ½(⟨σ̂ᶻ⟩ + 1), so an inverted ensemble decays
//! collectively through the cavity even with no coherent seed — an effect
//! the factorized equations miss entirely (they pin an uncoupled inverted
//! sample at σ̂ᶻ = +1 forever).
//!
//! This tier models a resonant, dissipation-free cavity: requesting it with
//! a cavity–probe detuning or free-space decay channels is an input error.

use num_complex::Complex64;

use crate::dynamics::{coupling_profile, Scenario};
use crate::error::{Error, Result};
use crate::integrator::{solve_on_grid, OdeSystem};
use crate::trajectory::Trajectory;

/// The twelve complex moments of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderState {
    pub c: Complex64,
    pub sigma: Complex64,
    pub sigma_z: Complex64,
    pub sz_c: Complex64,
    pub sdag_c: Complex64,
    pub sdag_s: Complex64,
    pub sz_s: Complex64,
    pub sz_sz: Complex64,
    pub cc: Complex64,
    pub sigma_c: Complex64,
    pub photon: Complex64,
    pub ss: Complex64,
}

impl SecondOrderState {
    /// Factorized (product-state) initial condition: a coherent cavity at
    /// the empty-cavity amplitude c₀ = η/κ and all molecules at inversion
    /// σᶻ(0), with every joint moment the product of its factors.
    pub fn factorized(eta: f64, kappa: f64, sigma_z0: f64) -> Self {
        let c0 = eta / kappa;
        Self {
            c: Complex64::from(c0),
            sigma: Complex64::ZERO,
            sigma_z: Complex64::from(sigma_z0),
            sz_c: Complex64::from(sigma_z0 * c0),
            sdag_c: Complex64::ZERO,
            sdag_s: Complex64::ZERO,
            sz_s: Complex64::ZERO,
            sz_sz: Complex64::from(sigma_z0 * sigma_z0),
            cc: Complex64::from(c0 * c0),
            sigma_c: Complex64::ZERO,
            photon: Complex64::from(c0 * c0),
            ss: Complex64::ZERO,
        }
    }

    const DIM: usize = 24;

    fn pack(&self, y: &mut [f64]) {
        let fields = self.as_array();
        for (k, z) in fields.iter().enumerate() {
            y[2 * k] = z.re;
            y[2 * k + 1] = z.im;
        }
    }

    fn unpack(y: &[f64]) -> Self {
        let z = |k: usize| Complex64::new(y[2 * k], y[2 * k + 1]);
        Self {
            c: z(0),
            sigma: z(1),
            sigma_z: z(2),
            sz_c: z(3),
            sdag_c: z(4),
            sdag_s: z(5),
            sz_s: z(6),
            sz_sz: z(7),
            cc: z(8),
            sigma_c: z(9),
            photon: z(10),
            ss: z(11),
        }
    }

    fn as_array(&self) -> [Complex64; 12] {
        [
            self.c,
            self.sigma,
            self.sigma_z,
            self.sz_c,
            self.sdag_c,
            self.sdag_s,
            self.sz_s,
            self.sz_sz,
            self.cc,
            self.sigma_c,
            self.photon,
            self.ss,
        ]
    }
}

/// Time derivative of the second-order hierarchy at coupling ḡ.
///
/// κ, Δ_m, η are angular rates; `n_m` is the molecule number N.
pub fn deriv_second_order(
    state: &SecondOrderState,
    gbar: f64,
    kappa: f64,
    delta_m: f64,
    eta: f64,
    n_m: f64,
) -> SecondOrderState {
    let i = Complex64::i();
    let ig = i * gbar;
    let k = kappa;
    let d = delta_m;
    let n_pair = n_m - 1.0;

    let c = state.c;
    let s = state.sigma;
    let sz = state.sigma_z;
    let zc = state.sz_c;
    let sdc = state.sdag_c;
    let sds = state.sdag_s;
    let zs = state.sz_s;
    let zz = state.sz_sz;
    let cc = state.cc;
    let sc = state.sigma_c;
    let n = state.photon;
    let ss = state.ss;

    let dc = -k * c - ig * n_m * s + eta;
    let ds = -i * d * s + ig * zc;
    let dsz = 2.0 * ig * (sdc.conj() - sdc);
    let dzc = -k * zc + ig * s - ig * n_pair * zs
        + eta * sz
        + 2.0
            * ig
            * (sdc.conj() * c + c.conj() * sc + n * s - 2.0 * c.conj() * s * c
                - s.conj() * cc
                - 2.0 * sdc * c
                + 2.0 * s.conj() * c * c);
    let dsdc = -(k - i * d) * sdc - ig * (0.5 * (sz + 1.0) + n_pair * sds)
        + eta * s.conj()
        - ig * (c.conj() * zc + zc.conj() * c + sz * n - 2.0 * c.conj() * sz * c);
    let dsds = -ig
        * (sz * sdc.conj() + zc.conj() * s + zs * c.conj()
            - 2.0 * sz * c.conj() * s
            - s.conj() * zc
            - zs.conj() * c
            - sdc * sz
            + 2.0 * s.conj() * sz * c);
    let dzs = -i * d * zs
        + ig * (sz * zc + zz * c + zc * sz - 2.0 * sz * sz * c)
        + 2.0
            * ig
            * (c.conj() * ss + 2.0 * sdc.conj() * s
                - 2.0 * c.conj() * s * s
                - s.conj() * sc
                - sdc * s
                - sds * c
                + 2.0 * s.conj() * c * s);
    let dzz = 4.0
        * ig
        * (c.conj() * zs + sdc.conj() * sz + zc.conj() * s
            - 2.0 * c.conj() * s * sz
            - s.conj() * zc
            - sdc * sz
            - zs.conj() * c
            + 2.0 * s.conj() * c * sz);
    let dcc = -2.0 * k * cc - 2.0 * ig * n_m * sc + 2.0 * eta * c;
    let dsc = -i * d * sc + ig * (sz * cc + 2.0 * zc * c - 2.0 * sz * c * c) - k * sc
        - ig * n_pair * ss
        + eta * s;
    let dn = -2.0 * k * n + ig * n_m * (sdc - sdc.conj()) + eta * (c + c.conj());
    let dss = -2.0 * i * d * ss + 2.0 * ig * (sz * sc + zs * c + zc * s - 2.0 * sz * c * s);

    SecondOrderState {
        c: dc,
        sigma: ds,
        sigma_z: dsz,
        sz_c: dzc,
        sdag_c: dsdc,
        sdag_s: dsds,
        sz_s: dzs,
        sz_sz: dzz,
        cc: dcc,
        sigma_c: dsc,
        photon: dn,
        ss: dss,
    }
}

struct SecondOrderSystem<'a> {
    scenario: &'a Scenario,
}

impl OdeSystem for SecondOrderSystem<'_> {
    fn dim(&self) -> usize {
        SecondOrderState::DIM
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        let sc = self.scenario;
        let state = SecondOrderState::unpack(y);
        let gbar = coupling_profile(&sc.sample, sc.g0, sc.w0, t);
        let d = deriv_second_order(
            &state,
            gbar,
            sc.kappa,
            sc.drive.delta_m,
            sc.drive.eta,
            sc.sample.n_m,
        );
        d.pack(dydt);
    }
}

/// Full second-order integration, keeping every moment at every grid point.
#[derive(Debug, Clone)]
pub struct SecondOrderRun {
    pub t: Vec<f64>,
    pub states: Vec<SecondOrderState>,
}

impl SecondOrderRun {
    /// Largest imaginary part carried by a physically real moment
    /// (⟨σ̂ᶻ⟩, ⟨σ̂ⱼᶻσ̂ₖᶻ⟩, ⟨ĉ†ĉ⟩) anywhere on the run — a numerical
    /// consistency check that should sit at rounding level.
    pub fn realness_leak(&self) -> f64 {
        self.states
            .iter()
            .map(|s| {
                s.sigma_z
                    .im
                    .abs()
                    .max(s.sz_sz.im.abs())
                    .max(s.photon.im.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Project onto the common trajectory view (c, σ, σᶻ, ḡ).
    pub fn to_trajectory(&self, scenario: &Scenario) -> Trajectory {
        let mut trajectory = Trajectory::with_capacity(self.t.len(), scenario.kappa);
        for (ti, state) in self.t.iter().zip(self.states.iter()) {
            trajectory.push(
                *ti,
                state.c,
                state.sigma,
                state.sigma_z.re,
                coupling_profile(&scenario.sample, scenario.g0, scenario.w0, *ti),
            );
        }
        trajectory
    }
}

fn validate_second_order(scenario: &Scenario) -> Result<()> {
    if scenario.dissipation.gamma != 0.0 || scenario.dissipation.v_max != 0.0 {
        return Err(Error::InvalidInput(
            "the second-order hierarchy has no free-space decay channels; \
             set gamma = v_max = 0 or use the dissipative model"
                .into(),
        ));
    }
    if scenario.drive.delta_c != 0.0 {
        return Err(Error::InvalidInput(
            "the second-order hierarchy models a resonant probe (delta_c = 0)".into(),
        ));
    }
    Ok(())
}

/// Integrate the hierarchy on `grid`, returning every moment.
pub fn integrate_second_full(scenario: &Scenario, grid: &[f64]) -> Result<SecondOrderRun> {
    scenario.sample.validate()?;
    validate_second_order(scenario)?;
    let init =
        SecondOrderState::factorized(scenario.drive.eta, scenario.kappa, scenario.sample.sigma_z0);
    let mut y0 = [0.0; SecondOrderState::DIM];
    init.pack(&mut y0);
    let system = SecondOrderSystem { scenario };
    let rows = solve_on_grid(&system, &y0, grid, &scenario.options)?;
    Ok(SecondOrderRun {
        t: grid.to_vec(),
        states: rows.iter().map(|r| SecondOrderState::unpack(r)).collect(),
    })
}

/// Integrate the hierarchy and project onto the trajectory view.
pub fn integrate_second(scenario: &Scenario, grid: &[f64]) -> Result<Trajectory> {
    Ok(integrate_second_full(scenario, grid)?.to_trajectory(scenario))
}
