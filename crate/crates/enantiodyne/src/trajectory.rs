//! Sampled mean-field trajectories and their on-disk form.
//!
//! Every model tier produces the same view of a run: the cavity amplitude
//! c(t), the single-molecule coherence σ(t), the inversion σᶻ(t) and the
//! instantaneous sample-averaged coupling ḡ(t) on a caller-chosen grid,
//! plus the cavity decay rate κ needed to convert amplitudes into
//! homodyne signal.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A mean-field run sampled on a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times (s), strictly increasing.
    pub t: Vec<f64>,
    /// Cavity amplitude ⟨ĉ⟩ (√photons).
    pub c: Vec<Complex64>,
    /// Collective coherence ⟨σ̂⟩ per molecule.
    pub sigma: Vec<Complex64>,
    /// Inversion ⟨σ̂ᶻ⟩ per molecule.
    pub sigma_z: Vec<f64>,
    /// Sample-averaged coupling ḡ(t) (rad/s).
    pub gbar: Vec<f64>,
    /// Cavity decay rate κ (rad/s) of the run.
    pub kappa: f64,
}

impl Trajectory {
    pub fn with_capacity(n: usize, kappa: f64) -> Self {
        Self {
            t: Vec::with_capacity(n),
            c: Vec::with_capacity(n),
            sigma: Vec::with_capacity(n),
            sigma_z: Vec::with_capacity(n),
            gbar: Vec::with_capacity(n),
            kappa,
        }
    }

    pub fn push(&mut self, t: f64, c: Complex64, sigma: Complex64, sigma_z: f64, gbar: f64) {
        self.t.push(t);
        self.c.push(c);
        self.sigma.push(sigma);
        self.sigma_z.push(sigma_z);
        self.gbar.push(gbar);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Homodyne signal density 𝒩(t) = √(2κ)·Re(e^{−iφ_lo} c(t)) at local
    /// oscillator phase φ_lo, in √Hz per unit local-oscillator amplitude.
    pub fn signal_at(&self, index: usize, phi_lo: f64) -> f64 {
        (2.0 * self.kappa).sqrt() * ((-Complex64::i() * phi_lo).exp() * self.c[index]).re
    }

    /// The full signal record [`Self::signal_at`] on the trajectory grid.
    pub fn signal(&self, phi_lo: f64) -> Vec<f64> {
        (0..self.len()).map(|k| self.signal_at(k, phi_lo)).collect()
    }

    /// Largest inversion departure max_t |σᶻ(t) − σᶻ(0)|.
    pub fn sigma_z_excursion(&self) -> f64 {
        let z0 = self.sigma_z[0];
        self.sigma_z
            .iter()
            .map(|z| (z - z0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest inversion departure from σᶻ(0) restricted to t ≥ `t_after` —
    /// how completely the sample returns to its initial state after a
    /// transit.
    pub fn sigma_z_return_deviation(&self, t_after: f64) -> f64 {
        let z0 = self.sigma_z[0];
        self.t
            .iter()
            .zip(self.sigma_z.iter())
            .filter(|(t, _)| **t >= t_after)
            .map(|(_, z)| (z - z0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest departure of the Bloch invariant (σᶻ)² + 4|σ|² from its
    /// initial value — conserved exactly by the lossless factorized flow.
    pub fn bloch_max_deviation(&self) -> f64 {
        let norm = |k: usize| self.sigma_z[k] * self.sigma_z[k] + 4.0 * self.sigma[k].norm_sqr();
        let n0 = norm(0);
        (0..self.len()).map(|k| (norm(k) - n0).abs()).fold(0.0, f64::max)
    }

    /// Inclusive index range of samples with t ∈ [t0, tf], with a relative
    /// slop of 10⁻⁹ of the record span so grid points landing exactly on
    /// the window edges are kept.
    pub fn index_range(&self, t0: f64, tf: f64) -> Result<(usize, usize)> {
        if self.is_empty() || tf < t0 {
            return Err(Error::WindowOutOfRange {
                t0,
                tf,
                span_lo: self.t.first().copied().unwrap_or(f64::NAN),
                span_hi: self.t.last().copied().unwrap_or(f64::NAN),
            });
        }
        let span_lo = self.t[0];
        let span_hi = self.t[self.len() - 1];
        let slop = 1e-9 * (span_hi - span_lo) + 1e-15;
        if t0 < span_lo - slop || tf > span_hi + slop {
            return Err(Error::WindowOutOfRange {
                t0,
                tf,
                span_lo,
                span_hi,
            });
        }
        let i0 = self.t.partition_point(|t| *t < t0 - slop);
        let i1 = self.t.partition_point(|t| *t <= tf + slop) - 1;
        if i1 < i0 {
            return Err(Error::WindowOutOfRange {
                t0,
                tf,
                span_lo,
                span_hi,
            });
        }
        Ok((i0, i1))
    }

    /// Write the run as CSV: `#`-prefixed metadata lines, then one row per
    /// sample with columns
    /// `t,re_c,im_c,abs_c,arg_c,re_sigma,im_sigma,sigma_z,gbar,signal`.
    /// The signal column is evaluated at local-oscillator phase `phi_lo`.
    /// Output bytes are deterministic for a given trajectory.
    pub fn write_csv<W: Write>(&self, mut out: W, phi_lo: f64) -> Result<()> {
        writeln!(out, "# enantiodyne trajectory ({} samples)", self.len())?;
        writeln!(out, "# kappa_rad_per_s = {:.17e}", self.kappa)?;
        writeln!(out, "# phi_lo_rad = {:.17e}", phi_lo)?;
        writeln!(
            out,
            "t_s,re_c,im_c,abs_c,arg_c_rad,re_sigma,im_sigma,sigma_z,gbar_rad_per_s,signal_sqrt_hz"
        )?;
        for k in 0..self.len() {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                self.t[k],
                self.c[k].re,
                self.c[k].im,
                self.c[k].norm(),
                self.c[k].arg(),
                self.sigma[k].re,
                self.sigma[k].im,
                self.sigma_z[k],
                self.gbar[k],
                self.signal_at(k, phi_lo),
            )?;
        }
        Ok(())
    }

    /// [`Self::write_csv`] to a file path.
    pub fn save_csv<P: AsRef<Path>>(&self, path: P, phi_lo: f64) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file), phi_lo)
    }
}
