//! Error function and complementary error function.
//!
//! One shared implementation serves the detection statistics (error
//! probability) and the analytic SNR formulas. Accuracy is better than
//! 1e-12 relative over the range exercised by the toolkit (|x| ≤ 8),
//! validated in the unit tests against high-precision reference values.

use std::f64::consts::PI;

/// Maclaurin/continued-fraction crossover point.
const SERIES_CUTOFF: f64 = 2.0;
/// Maximum series / continued-fraction iterations (diagnostic guard; the
/// expansions converge in well under 200 terms for |x| ≤ 8).
const MAX_ITER: usize = 400;

/// Error function erf(x) = (2/√π) ∫₀ˣ e^(−u²) du.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < SERIES_CUTOFF {
        erf_series(x)
    } else {
        1.0 - erfc_continued_fraction(x)
    }
}

/// Complementary error function erfc(x) = 1 − erf(x).
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// Maclaurin series, erf(x) = (2/√π) Σ (−1)ⁿ x^(2n+1) / (n!(2n+1)).
///
/// Converges rapidly for |x| < 2 with mild cancellation (worst term ratio
/// ≈ 30 at x = 2, well inside double precision for the 1e-12 target).
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // (−1)ⁿ x^(2n+1) / n!
    let mut sum = x;
    for n in 1..MAX_ITER {
        term *= -x2 / n as f64;
        let contribution = term / (2 * n + 1) as f64;
        sum += contribution;
        if contribution.abs() < 1e-17 * sum.abs() + 1e-300 {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// Modified Lentz evaluation of the Laplace continued fraction
/// √π e^(x²) erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x ≥ 2.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0_f64;
    for j in 1..MAX_ITER {
        let a = if j == 1 { 1.0 } else { (j - 1) as f64 / 2.0 };
        let b = x;
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f * (-x * x).exp() / PI.sqrt()
}
