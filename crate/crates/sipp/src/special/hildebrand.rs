//! Asymptotic expansion of −log ρ(u)/u for large u, after Hildebrand:
//! with L = log u and M = log log u,
//!   −log ρ(u)/u = L + M − 1 + M/L − 1/L − M²/(2L²) + M/L² − 2/L² + O(M²/L³).

use crate::error::{Error, Result};

/// The truncated expansion of −log ρ(u)/u. Requires u > e so that
/// M = log log u is positive.
pub fn hildebrand_approx(u: f64) -> Result<f64> {
    if !(u > std::f64::consts::E) {
        return Err(Error::OutOfRange { value: u, lo: std::f64::consts::E, hi: f64::INFINITY });
    }
    let l = u.ln();
    let m = l.ln();
    Ok(l + m - 1.0 + m / l - 1.0 / l - m * m / (2.0 * l * l) + m / (l * l) - 2.0 / (l * l))
}

/// Scale of the first omitted term, M²/L³ (used as the comparison budget).
pub fn hildebrand_remainder_scale(u: f64) -> f64 {
    let l = u.ln();
    let m = l.ln();
    m * m / (l * l * l)
}
