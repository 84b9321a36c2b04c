//! Joint densities of the leading Poisson–Dirichlet coordinates and of the
//! scale-invariant process conditioned on its total mass.

use super::{density_g_or_zero, rho_table};
use crate::error::{Error, Result};
use crate::model::Theta;
use crate::EULER_GAMMA;

/// Density g(s) must exceed this to be usable as a denominator.
const G_FLOOR: f64 = 1e-280;

enum SimplexCheck {
    Interior { sum: f64 },
    Boundary,
}

fn check_simplex(xs: &[f64], sum_limit: f64) -> Result<SimplexCheck> {
    if xs.is_empty() {
        return Err(Error::invalid("joint density requires at least one coordinate"));
    }
    let mut sum = 0.0;
    let mut prev = 1.0f64;
    for &x in xs {
        if !x.is_finite() || x < 0.0 || x > prev {
            return Err(Error::invalid("coordinates must satisfy 1 > x1 > ... > xk > 0"));
        }
        if x == prev || x == 0.0 {
            return Ok(SimplexCheck::Boundary);
        }
        sum += x;
        prev = x;
    }
    if sum > sum_limit {
        return Err(Error::invalid(format!("coordinates must sum below {sum_limit}")));
    }
    if sum == sum_limit {
        return Ok(SimplexCheck::Boundary);
    }
    Ok(SimplexCheck::Interior { sum })
}

/// Joint density of (V₁, …, V_k) for the Poisson–Dirichlet process:
///   f_k(x) = g((1−Σx)/x_k) · e^{γθ} θ^k Γ(θ) x_k^{θ−1} / (x₁⋯x_k).
///
/// For θ = 1 the same value is recomputed through Dickman's function,
/// f_k = ρ((1−Σx)/x_k)/(x₁⋯x_k), and the two routes must agree to 1e−9.
pub fn pd_joint_density(theta: Theta, xs: &[f64]) -> Result<f64> {
    let sum = match check_simplex(xs, 1.0)? {
        SimplexCheck::Boundary => return Ok(0.0),
        SimplexCheck::Interior { sum } => sum,
    };
    let th = theta.get();
    let xk = *xs.last().unwrap();
    let arg = (1.0 - sum) / xk;
    let prod: f64 = xs.iter().product();
    let g = density_g_or_zero(theta, arg);
    let value = g * (EULER_GAMMA * th).exp()
        * th.powi(xs.len() as i32)
        * statrs::function::gamma::gamma(th)
        * xk.powf(th - 1.0)
        / prod;
    if (th - 1.0).abs() < 1e-15 {
        let via_rho = rho_table().eval_or_zero(arg) / prod;
        if (via_rho - value).abs() > 1e-9 * (1.0 + value.abs()) {
            return Err(Error::NonConvergence(format!(
                "theta=1 density routes disagree: {value} vs {via_rho}"
            )));
        }
    }
    Ok(value)
}

/// Joint density of (X₁, …, X_k) conditional on the total mass T = s:
///   (1/x_k) · g((s−Σx)/x_k)/g(s) · θ^k/(x₁⋯x_k) · x_k^θ,
/// using the self-similarity g_t(x) = (1/t)·g(x/t). At s = 1 this is the
/// Poisson–Dirichlet joint density.
pub fn conditional_joint_density(theta: Theta, s: f64, xs: &[f64]) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("conditioning level must be positive, got {s}")));
    }
    let sum = match check_simplex(xs, s.min(1.0 + f64::EPSILON))? {
        SimplexCheck::Boundary => return Ok(0.0),
        SimplexCheck::Interior { sum } => sum,
    };
    if xs[0] >= 1.0 {
        return Err(Error::invalid("coordinates must lie below 1"));
    }
    let th = theta.get();
    let gs = density_g_or_zero(theta, s);
    if gs < G_FLOOR {
        return Err(Error::NumericFloor(format!("g({s}) = {gs} is below the usable floor")));
    }
    let xk = *xs.last().unwrap();
    let prod: f64 = xs.iter().product();
    let g = density_g_or_zero(theta, (s - sum) / xk);
    Ok(g / (xk * gs) * th.powi(xs.len() as i32) / prod * xk.powf(th))
}
