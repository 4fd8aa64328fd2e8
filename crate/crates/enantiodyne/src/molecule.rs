//! Cyclic three-level model of a chiral rotor molecule.
//!
//! The working states are three rotational levels of an asymmetric top:
//! |1⟩ = |0_000⟩, |2⟩ = |1_010⟩ and |3⟩ = (|1_101⟩ + |1_10−1⟩)/√2, driven on
//! the cyclic triad 1↔2 (a-type), 2↔3 (b-type) and 1↔3 (c-type). The sign of
//! the c-type dipole component distinguishes the two enantiomers, so the
//! closed-loop drive phase is chirality-sensitive. This module provides the
//! coupling bookkeeping, the π/2–π–π/2 enantio-specific state-transfer (ESST)
//! pulse sequence, the mapping from a transfer outcome to the initial
//! inversion used by the cavity dynamics, and free-space decay rates.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{angular, DEBYE, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Handedness label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    /// Sign convention folded into the closed-loop drive phase: the c-type
    /// coupling of the right-handed molecule is the negative of the
    /// left-handed one.
    pub fn loop_phase_offset(self) -> f64 {
        match self {
            Chirality::Left => 0.0,
            Chirality::Right => std::f64::consts::PI,
        }
    }
}

impl std::fmt::Display for Chirality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chirality::Left => write!(f, "left"),
            Chirality::Right => write!(f, "right"),
        }
    }
}

impl std::str::FromStr for Chirality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Chirality::Left),
            "right" | "r" => Ok(Chirality::Right),
            other => Err(Error::InvalidInput(format!(
                "unknown chirality '{other}' (expected left|right)"
            ))),
        }
    }
}

/// Rotational constants, dipole components and handedness of the molecule.
///
/// All frequencies are angular (rad/s), dipoles are absolute values in C·m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MoleculeSpec {
    /// Rotational constant A (rad/s).
    pub a: f64,
    /// Rotational constant B (rad/s).
    pub b: f64,
    /// Rotational constant C (rad/s).
    pub c: f64,
    /// |μ_a| (C·m), drives 1↔2.
    pub mu_a: f64,
    /// |μ_b| (C·m), drives 2↔3 and couples to the cavity mode.
    pub mu_b: f64,
    /// |μ_c| (C·m), drives 1↔3; its sign flip between enantiomers carries
    /// the chiral information.
    pub mu_c: f64,
    /// Handedness of this sample.
    pub chirality: Chirality,
}

impl MoleculeSpec {
    /// 1,2-propanediol preset (A = 2π×8.57205 GHz, B = 2π×3.6401 GHz,
    /// C = 2π×2.79096 GHz, μ_a = 1.2 D, μ_b = 1.9 D, μ_c = 0.36 D).
    pub fn propanediol(chirality: Chirality) -> Self {
        Self {
            a: angular(8.57205e9),
            b: angular(3.6401e9),
            c: angular(2.79096e9),
            mu_a: 1.2 * DEBYE,
            mu_b: 1.9 * DEBYE,
            mu_c: 0.36 * DEBYE,
            chirality,
        }
    }

    /// Check A > B > C > 0 and non-negative dipoles.
    pub fn validate(&self) -> Result<()> {
        if !(self.a > self.b && self.b > self.c && self.c > 0.0) {
            return Err(Error::InvalidInput(
                "rotational constants must satisfy A > B > C > 0".into(),
            ));
        }
        if self.mu_a < 0.0 || self.mu_b < 0.0 || self.mu_c < 0.0 {
            return Err(Error::InvalidInput("dipole magnitudes must be ≥ 0".into()));
        }
        Ok(())
    }

    /// 1↔2 transition frequency ω₂₁ = B + C (rad/s).
    pub fn omega_21(&self) -> f64 {
        self.b + self.c
    }

    /// 1↔3 transition frequency ω₃₁ = A + B (rad/s).
    pub fn omega_31(&self) -> f64 {
        self.a + self.b
    }

    /// 2↔3 transition frequency ω₃₂ = A − C (rad/s).
    pub fn omega_32(&self) -> f64 {
        self.a - self.c
    }

    /// Effective transition dipole of the cavity-coupled 2↔3 leg (C·m).
    ///
    /// The rotational line strength puts half of |μ_b| into this matrix
    /// element; the same factor reproduces both the tabulated single-photon
    /// couplings and (halved again by the field average) the 2↔3 drive
    /// coefficient below.
    pub fn cavity_dipole(&self) -> f64 {
        self.mu_b / 2.0
    }

    /// Effective drive dipole on 1↔2: |μ_a|/2 (C·m).
    pub fn drive_dipole_21(&self) -> f64 {
        self.mu_a / 2.0
    }

    /// Effective drive dipole on 1↔3: |μ_c|/(2√3) (C·m).
    pub fn drive_dipole_31(&self) -> f64 {
        self.mu_c / (2.0 * 3.0_f64.sqrt())
    }

    /// Effective drive dipole on 2↔3: |μ_b|/4 (C·m).
    pub fn drive_dipole_32(&self) -> f64 {
        self.mu_b / 4.0
    }

    /// Free-space decay rate of the 2→1 transition (rad/s).
    pub fn decay_rate_21(&self) -> f64 {
        free_space_decay_rate(self.omega_21(), self.drive_dipole_21())
    }

    /// Free-space decay rate of the 3→1 transition (rad/s).
    pub fn decay_rate_31(&self) -> f64 {
        free_space_decay_rate(self.omega_31(), self.drive_dipole_31())
    }

    /// Free-space decay rate of the 3→2 transition (rad/s); this is the γ
    /// entering the dissipative cavity dynamics.
    pub fn decay_rate_32(&self) -> f64 {
        free_space_decay_rate(self.omega_32(), self.drive_dipole_32())
    }
}

/// Rabi amplitudes of the three drives (rad/s).
#[derive(Debug, Clone, Copy)]
pub struct CouplingSet {
    /// 1↔2 Rabi amplitude (real, rad/s).
    pub omega_21: f64,
    /// 2↔3 Rabi amplitude (real, rad/s).
    pub omega_32: f64,
    /// 1↔3 Rabi amplitude: complex, its argument carries the loop phase φ
    /// plus the chirality offset (rad/s).
    pub omega_31: Complex64,
    /// Loop phase φ of the 1↔3 drive (rad).
    pub phi: f64,
}

/// Build the coupling set from field amplitudes (V/m) and drive phases.
///
/// Ω₂₁ = E₂₁|μ_a|/(2ħ), Ω₃₂ = E₃₂|μ_b|/(4ħ), |Ω₃₁| = E₃₁|μ_c|/(2√3 ħ);
/// `phases` are the (1↔2, 1↔3, 2↔3) field phases — only the 1↔3 phase
/// matters physically (loop phase φ); the chirality sign is folded into
/// arg Ω₃₁.
pub fn coupling_set(
    spec: &MoleculeSpec,
    e21: f64,
    e31: f64,
    e32: f64,
    phases: [f64; 3],
) -> Result<CouplingSet> {
    if e21 < 0.0 || e31 < 0.0 || e32 < 0.0 {
        return Err(Error::InvalidInput("field amplitudes must be ≥ 0".into()));
    }
    let phi = phases[1];
    let arg = phi + spec.chirality.loop_phase_offset();
    Ok(CouplingSet {
        omega_21: e21 * spec.drive_dipole_21() / HBAR,
        omega_32: e32 * spec.drive_dipole_32() / HBAR,
        omega_31: Complex64::from_polar(e31 * spec.drive_dipole_31() / HBAR, arg),
        phi,
    })
}

/// Free-space (Einstein A) decay rate Γ₀ = ω³μ²/(3πε₀ħc³) in rad/s.
pub fn free_space_decay_rate(omega: f64, mu: f64) -> f64 {
    4.0 * omega.powi(3) * mu * mu / (3.0 * HBAR * SPEED_OF_LIGHT.powi(3))
        / (4.0 * std::f64::consts::PI * EPSILON_0)
}

/// Normalized state of the three-level system, amplitudes ordered
/// (|1⟩, |2⟩, |3⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelState(pub Vector3<Complex64>);

impl ThreeLevelState {
    /// Basis state |k⟩ for k ∈ {1, 2, 3}.
    pub fn basis(k: usize) -> Self {
        assert!((1..=3).contains(&k), "basis index must be 1, 2 or 3");
        let mut v = Vector3::zeros();
        v[k - 1] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    /// Construct from raw amplitudes, normalizing defensively.
    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64) -> Self {
        let v = Vector3::new(a1, a2, a3);
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Self(v / Complex64::from(n))
    }

    /// Σ|a_i|².
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// |⟨self|other⟩|² — global-phase-insensitive comparison.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// Apply a 3×3 operator.
    pub fn apply(&self, u: &Matrix3<Complex64>) -> Self {
        Self(u * self.0)
    }
}

/// Two-level rotation exp(−iθ(cos α σ_x + sin α σ_y)/2) embedded on the
/// (lo, hi) subspace (0-based indices) of the three-level system:
/// on that subspace the matrix is
/// [[cos θ/2, −i e^(−iα) sin θ/2], [−i e^(iα) sin θ/2, cos θ/2]].
pub fn two_level_rotation(theta: f64, alpha: f64, lo: usize, hi: usize) -> Matrix3<Complex64> {
    assert!(lo < hi && hi < 3, "subspace indices must satisfy lo < hi < 3");
    let (half_sin, half_cos) = (theta / 2.0).sin_cos();
    let mut m = Matrix3::identity();
    m[(lo, lo)] = Complex64::from(half_cos);
    m[(hi, hi)] = Complex64::from(half_cos);
    m[(lo, hi)] = -Complex64::i() * Complex64::from_polar(half_sin, -alpha);
    m[(hi, lo)] = -Complex64::i() * Complex64::from_polar(half_sin, alpha);
    m
}

/// Chirality-dependent loop phase of the transfer sequence:
/// φ_TL = φ for Left and π + φ for Right.
fn transfer_loop_phase(phi: f64, chirality: Chirality) -> f64 {
    phi + chirality.loop_phase_offset()
}

/// The three pulses of the ESST sequence, in application order:
/// π/2 on 1↔2, π on 1↔3 (phase carries φ_TL), π/2 on 2↔3.
fn esst_pulses(phi: f64, chirality: Chirality) -> [Matrix3<Complex64>; 3] {
    let phi_tl = transfer_loop_phase(phi, chirality);
    [
        two_level_rotation(std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 0, 1),
        two_level_rotation(std::f64::consts::PI, std::f64::consts::PI - phi_tl, 0, 2),
        two_level_rotation(std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 1, 2),
    ]
}

/// Full ESST evolution operator U = U₃U₂U₁ for the given loop phase and
/// handedness. Unitary to machine precision.
pub fn esst_unitary(phi: f64, chirality: Chirality) -> Matrix3<Complex64> {
    let [u1, u2, u3] = esst_pulses(phi, chirality);
    u3 * u2 * u1
}

/// Result of propagating a state through the pulse sequence, exposing the
/// intermediate states after the first and second pulse.
#[derive(Debug, Clone, Copy)]
pub struct PulseSequenceOutcome {
    /// State after the π/2 pulse on 1↔2.
    pub intermediate_i: ThreeLevelState,
    /// State after the π pulse on 1↔3.
    pub intermediate_ii: ThreeLevelState,
    /// Final state after the π/2 pulse on 2↔3.
    pub final_state: ThreeLevelState,
}

/// Apply the three ESST pulses sequentially to `state`.
pub fn apply_pulse_sequence(
    state: &ThreeLevelState,
    phi: f64,
    chirality: Chirality,
) -> PulseSequenceOutcome {
    let [u1, u2, u3] = esst_pulses(phi, chirality);
    let intermediate_i = state.apply(&u1);
    let intermediate_ii = intermediate_i.apply(&u2);
    let final_state = intermediate_ii.apply(&u3);
    PulseSequenceOutcome {
        intermediate_i,
        intermediate_ii,
        final_state,
    }
}

/// Map an ESST outcome at a perfect-transfer phase φ ∈ {+π/2, −π/2} to the
/// initial inversion of the cavity two-level system (σ = |2⟩⟨3|, so the final
/// state |3⟩ gives σ^z(0) = +1 and |2⟩ gives σ^z(0) = −1).
pub fn hypothesis_inversion(chirality: Chirality, phi: f64) -> Result<f64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if (phi.abs() - half_pi).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "hypothesis inversion defined only at the perfect-transfer phases ±π/2, got φ = {phi}"
        )));
    }
    let outcome = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, chirality);
    let p3 = outcome.final_state.fidelity(&ThreeLevelState::basis(3));
    Ok(if p3 > 0.5 { 1.0 } else { -1.0 })
}
