//! Walk the enantio-specific state-transfer (ESST) pulse sequence.
//!
//! Three resonant pulses — π/2 on 1↔2, π on 1↔3, π/2 on 2↔3 — form a
//! closed excitation loop whose accumulated phase differs by π between the
//! two enantiomers.  Starting from the rotational ground state, one
//! handedness ends in level 3 and the other in level 2, so a subsequent
//! 2↔3 probe sees opposite population inversions σᶻ(0) = ±1.
//!
//! Run with: `cargo run --example esst_sequence`

use std::f64::consts::FRAC_PI_2;

use enantiodyne::molecule::{
    apply_pulse_sequence, hypothesis_inversion, Chirality, ThreeLevelState,
};
use enantiodyne::Result;

fn populations(state: &ThreeLevelState) -> [f64; 3] {
    [state.0[0].norm_sqr(), state.0[1].norm_sqr(), state.0[2].norm_sqr()]
}

fn describe(label: &str, state: &ThreeLevelState) {
    let p = populations(state);
    println!("  {label:<18} |1⟩: {:.4}  |2⟩: {:.4}  |3⟩: {:.4}", p[0], p[1], p[2]);
}

fn main() -> Result<()> {
    for phi in [FRAC_PI_2, -FRAC_PI_2] {
        println!("Closed-loop phase φ = {phi:+.6} rad");
        for chirality in [Chirality::Left, Chirality::Right] {
            let outcome = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, chirality);
            println!("{chirality}:");
            describe("after π/2 (1↔2)", &outcome.intermediate_i);
            describe("after π   (1↔3)", &outcome.intermediate_ii);
            describe("final", &outcome.final_state);
            let sigma_z0 = hypothesis_inversion(chirality, phi)?;
            println!("  probe inversion σᶻ(0) = {sigma_z0:+.0}");
        }
        // The two final states are orthogonal: a single measurement of the
        // 2↔3 inversion identifies the enantiomer with certainty.
        let left = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, Chirality::Left);
        let right = apply_pulse_sequence(&ThreeLevelState::basis(1), phi, Chirality::Right);
        println!(
            "overlap |⟨final_L|final_R⟩|² = {:.3e}\n",
            left.final_state.overlap(&right.final_state).norm_sqr()
        );
    }
    Ok(())
}
