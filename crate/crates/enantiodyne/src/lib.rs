//! Single-shot, non-destructive chiral discrimination in a driven
//! microwave cavity: design, dynamics, detection and analysis.
//!
//! The toolkit covers the full measurement chain for telling the two
//! enantiomers of a chiral molecule apart in one shot, without destroying
//! the sample:
//!
//! 1. **Molecule** ([`molecule`]) — the cyclic three-level rotational
//!    model, the enantio-specific state-transfer (ESST) π/2–π–π/2 pulse
//!    sequence whose final state depends on handedness, and free-space
//!    decay rates.
//! 2. **Cavity** ([`cavity`]) — a plano-concave Fabry–Pérot microwave
//!    resonator: mode frequencies, Gaussian waist, mode volume,
//!    single-photon coupling g₀, quality factor and decay rate κ, and
//!    piezo tuning ranges.
//! 3. **Dynamics** ([`dynamics`], [`second_order`]) — driven
//!    Tavis–Cummings mean-field equations for the cavity amplitude and the
//!    collective molecular variables, at first cumulant order, with
//!    dissipation channels, or at full second cumulant order.
//! 4. **Detection** ([`detection`]) — balanced homodyne readout of the
//!    enantioselective cavity phase: integrated counts, shot noise, SNR,
//!    decision rule, error probability and Monte-Carlo validation.
//! 5. **Analytics** ([`analytics`]) — dispersive closed forms: phase
//!    shift, moving- and trapped-sample SNR, detection-window optimum,
//!    critical photon number and interaction bounds.
//! 6. **Harness** ([`harness`]) — reproducible sweeps: SNR vs molecule
//!    number, critical molecule numbers, λ–v maps, model-order and
//!    dissipation comparisons, with CSV output.
//!
//! Conventions: every frequency-like quantity inside the library is an
//! *angular* rate (rad/s); user-facing layers speak cyclic Hz and convert
//! at the boundary ([`constants::angular`], [`constants::cyclic`]).  Times
//! are seconds, lengths meters, dipoles C·m.

pub mod acceptance;
pub mod analytics;
pub mod cavity;
pub mod config;
pub mod constants;
pub mod detection;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod molecule;
pub mod second_order;
pub mod special;
pub mod trajectory;

#[cfg(test)]
pub(crate) mod testutil;

pub use acceptance::CriterionResult;
pub use cavity::{CavityDesign, CavityGeometry, MirrorReference};
pub use config::RunConfig;
pub use detection::{HomodyneConfig, MonteCarloOutcome, ShotStatistics};
pub use dynamics::{
    DissipationParams, DriveConfig, MeanFieldState, Model, SampleConfig, Scenario,
};
pub use error::{Error, Result};
pub use harness::{SweepAxis, SweepResult, SweepSpec, TrajectoryCache};
pub use molecule::{Chirality, CouplingSet, MoleculeSpec, ThreeLevelState};
pub use trajectory::Trajectory;
