//! Laplace transform of T, the total mass below 1 of the scale-invariant
//! Poisson process: E e^{−sT} = exp(−θ ∫₀¹ (1 − e^{−sx})/x dx).

use crate::error::{Error, Result};
use crate::model::Theta;
use crate::quad;

/// The exponent ∫₀¹ (1 − e^{−sx})/x dx, computed adaptively. The integrand
/// extends to an entire function of x, so no endpoint care is needed.
pub fn laplace_exponent(s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    quad::integrate(
        |x| {
            if x == 0.0 {
                s
            } else {
                -(-s * x).exp_m1() / x
            }
        },
        0.0,
        1.0,
        1e-13,
    )
    .value
}

pub fn laplace_t(theta: Theta, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("laplace_t requires s >= 0, got {s}")));
    }
    Ok((-theta.get() * laplace_exponent(s)).exp())
}

/// Cumulant generating function log E e^{sT} for s ≥ 0 (used for Chernoff
/// tail bounds): θ ∫₀¹ (e^{sx} − 1)/x dx.
pub fn cumulant(theta: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    theta
        * quad::integrate(|x| if x == 0.0 { s } else { (s * x).exp_m1() / x }, 0.0, 1.0, 1e-11)
            .value
}
