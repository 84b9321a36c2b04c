//! The limiting total-variation distance H_θ(β) between Poisson–Dirichlet
//! and scale-invariant Poisson observations restricted to (0, β], together
//! with its small-β slope law and a binned empirical TV estimator.
//!
//! H_θ(β) equals the distance between the law of T_β (the process mass
//! below β, density g_β(x) = (1/β)g(x/β)) and its conditional law given
//! T = 1. Writing S = T − T_β (independent of T_β, atom β^θ at 0 plus
//! density j), the conditional law has continuous density
//! g_β(x)·j(1−x)/g(1) on (0,1) and an atom at 1 of mass g_β(1)·β^θ/g(1), so
//!   2·H_θ(β) = ∫₀¹ g_β(x)·|1 − j(1−x)/g(1)| dx + ∫₁^∞ g_β + g_β(1)·β^θ/g(1).
//! For θ = 1 this reduces to the explicit Dickman–Buchstab form
//!   2·H₁(β) = ∫_{t>0} |ω(u−t) − e^{−γ}|·ρ(t) dt + ρ(u),  u = 1/β,
//! with ω ≡ 0 below 1.

use crate::error::{Error, Result};
use crate::model::{TVMethod, TVReport, Theta};
use crate::quad;
use crate::special::{self, TruncatedSumLaw};
use crate::EULER_GAMMA;
use std::collections::HashMap;

/// Locate the sign changes of `f` on [lo, hi] by scanning `steps` cells and
/// bisecting each bracketing cell.
fn sign_change_roots<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    if hi <= lo {
        return roots;
    }
    let h = (hi - lo) / steps as f64;
    let mut prev_x = lo;
    let mut prev_v = f(lo);
    for i in 1..=steps {
        let x = lo + i as f64 * h;
        let v = f(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v.signum() != v.signum() && v != 0.0 {
            if let Ok(r) = quad::bisect_root(&mut f, prev_x, x) {
                roots.push(r);
            }
        }
        prev_x = x;
        prev_v = v;
    }
    roots
}

/// H₁(β) by the explicit Dickman–Buchstab formula. Supported for
/// β ∈ [1/50, 1); smaller β would push ρ past its certified table.
pub fn h1_explicit(beta: f64) -> Result<TVReport> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0,1], got {beta}")));
    }
    if beta == 1.0 {
        return Ok(TVReport::new(1.0, TVMethod::ExplicitFormula, 0.0));
    }
    let u = 1.0 / beta;
    let u_hi = special::U_MAX as f64;
    if u > u_hi {
        return Err(Error::OutOfRange { value: beta, lo: 1.0 / u_hi, hi: 1.0 });
    }
    let rho = special::rho_table();
    let omega = special::omega_table();
    let egm = (-EULER_GAMMA).exp();

    // integrand kinks: integer t (ρ), t = u − integer (ω), t = u−1 and t = u
    // (support edges), plus the |·| sign changes where ω(u−t) = e^{−γ}.
    let mut bps: Vec<f64> = (1..=u_hi as usize).map(|k| k as f64).collect();
    for k in 1..=(u.floor() as usize) {
        bps.push(u - k as f64);
    }
    bps.push(u - 1.0);
    bps.push(u);
    for v in sign_change_roots(|v| omega.eval_or_zero(v) - egm, 1.0, u, ((u - 1.0) * 64.0) as usize + 8)
    {
        bps.push(u - v);
    }

    // the integrand peaks at scale ρ(u−1); tolerance tracks it with a floor
    let scale = rho.eval_or_zero((u - 1.0).max(0.0));
    let tol = (1e-7 * scale).max(5e-14);
    let f = |t: f64| {
        let w = if u - t >= 1.0 { omega.eval_or_zero(u - t) } else { 0.0 };
        (w - egm).abs() * rho.eval_or_zero(t)
    };
    let q = quad::integrate_with_breakpoints(f, 0.0, u_hi, &bps, tol);
    let rho_u = rho.eval_or_zero(u);
    let value = 0.5 * (q.value + rho_u);
    let err = 0.5
        * (q.error
            + omega.error_bound * EULER_GAMMA.exp()
            + rho.error_bound * (u_hi + 1.0));
    Ok(TVReport::new(value, TVMethod::ExplicitFormula, err))
}

/// H_θ(β) through the general density route (valid for every θ > 0).
pub fn h_theta(theta: Theta, beta: f64) -> Result<TVReport> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0,1], got {beta}")));
    }
    if beta == 1.0 {
        return Ok(TVReport::new(1.0, TVMethod::GeneralDensities, 0.0));
    }
    let g = special::g_table(theta);
    let g1 = special::g_norm_constant(theta);
    let law = TruncatedSumLaw::build(theta, beta, 2.0)?;
    let u = 1.0 / beta;
    let v_max = u.min(special::U_MAX as f64);

    // substitute x = βv: 2H = ∫₀^{u} g(v)|ψ(v)| dv + (1 − ∫₀^{u} g) + u·g(u)·β^θ/g(1)
    // with ψ(v) = 1 − j(1 − βv)/g(1).
    let psi = |v: f64| 1.0 - law.density(1.0 - beta * v) / g1;
    let mut bps: Vec<f64> = law
        .breakpoints()
        .into_iter()
        .map(|s| (1.0 - s) / beta)
        .filter(|&v| v > 0.0 && v < v_max)
        .collect();
    for k in 1..=(v_max as usize) {
        bps.push(k as f64);
    }
    bps.push(u - 1.0);
    let mut max_abs_psi = 1.0f64;
    let mut peak = 0.0f64; // largest observed |integrand|, sets the tolerance scale
    {
        let mut scan_pts = bps.clone();
        scan_pts.push(0.0);
        scan_pts.push(v_max);
        scan_pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in scan_pts.windows(2) {
            if w[1] - w[0] > 1e-12 {
                for r in sign_change_roots(psi, w[0] + 1e-13, w[1] - 1e-13, 24) {
                    bps.push(r);
                }
                for &v in &[w[0] + 1e-13, 0.5 * (w[0] + w[1]), w[1] - 1e-13] {
                    let p = psi(v).abs();
                    max_abs_psi = max_abs_psi.max(p);
                    peak = peak.max(g.eval_or_zero(v) * p);
                }
            }
        }
    }

    let tol = (1e-7 * peak * v_max.min(4.0)).max(5e-14);
    let q = quad::integrate_with_breakpoints(|v| g.eval_or_zero(v) * psi(v).abs(), 0.0, v_max, &bps, tol);
    let mass_below = g.integrate(0.0, v_max);
    let tail = (1.0 - mass_below).max(0.0);
    let atom = u * g.eval_or_zero(u) * law.atom_at_zero / g1;
    let value = 0.5 * (q.value + tail + atom);
    let err = 0.5
        * (q.error
            + g.error_bound * v_max * max_abs_psi
            + law.error_bound() / g1
            + g.error_bound * (v_max + u * law.atom_at_zero / g1));
    Ok(TVReport::new(value, TVMethod::GeneralDensities, err))
}

/// The small-β slope lim H_θ(β)/β = |1−θ|·e^{−γθ}/Γ(θ)·θ^θ/(1+θ), which is
/// 0 exactly at θ = 1 (where the decay is superexponential instead).
pub fn slope_limit(theta: Theta) -> f64 {
    let th = theta.get();
    (1.0 - th).abs() * (-EULER_GAMMA * th).exp() / statrs::function::gamma::gamma(th) * th.powf(th)
        / (1.0 + th)
}

/// Binning specification for [`binned_empirical_tv`]: the same uniform grid
/// on every axis of the observation vectors.
#[derive(Debug, Clone, Copy)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

/// ½ Σ_bins |p̂ − q̂| over a common binning. This lower-bounds the true TV
/// (binning only merges mass); the error bound is the multinomial sampling
/// bound √(k/n) on each empirical L1, halved.
pub fn binned_empirical_tv(
    samples_p: &[Vec<f64>],
    samples_q: &[Vec<f64>],
    spec: BinSpec,
) -> Result<TVReport> {
    if samples_p.is_empty() || samples_q.is_empty() {
        return Err(Error::invalid("binned TV requires nonempty sample sets"));
    }
    if spec.bins == 0 || !(spec.hi > spec.lo) {
        return Err(Error::invalid("binning must have bins >= 1 and hi > lo"));
    }
    let dim = samples_p[0].len();
    if dim == 0 || samples_q[0].len() != dim {
        return Err(Error::invalid("observation vectors must share a positive dimension"));
    }
    if (spec.bins as f64).powi(dim as i32) > 2f64.powi(48) {
        return Err(Error::ResourceGuard("bin grid too large".into()));
    }
    let width = (spec.hi - spec.lo) / spec.bins as f64;
    let key = |v: &[f64]| -> Result<u64> {
        if v.len() != dim {
            return Err(Error::invalid("ragged observation vectors"));
        }
        let mut k = 0u64;
        for &x in v {
            let b = (((x - spec.lo) / width).floor() as i64).clamp(0, spec.bins as i64 - 1) as u64;
            k = k * spec.bins as u64 + b;
        }
        Ok(k)
    };
    let mut counts: HashMap<u64, (u64, u64)> = HashMap::new();
    for v in samples_p {
        counts.entry(key(v)?).or_default().0 += 1;
    }
    for v in samples_q {
        counts.entry(key(v)?).or_default().1 += 1;
    }
    let (np, nq) = (samples_p.len() as f64, samples_q.len() as f64);
    let value = 0.5
        * counts
            .values()
            .map(|&(a, b)| (a as f64 / np - b as f64 / nq).abs())
            .sum::<f64>();
    let k = counts.len() as f64;
    let err = 0.5 * ((k / np).sqrt() + (k / nq).sqrt());
    Ok(TVReport::new(value, TVMethod::EmpiricalBinned, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn beta_one_is_exactly_one() {
        assert_eq!(h1_explicit(1.0).unwrap().value, 1.0);
        assert_eq!(h_theta(th(2.0), 1.0).unwrap().value, 1.0);
    }

    #[test]
    fn two_routes_agree_at_half() {
        let a = h1_explicit(0.5).unwrap();
        let b = h_theta(th(1.0), 0.5).unwrap();
        assert!((a.value - b.value).abs() < 1e-4, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn slope_limit_values() {
        assert_eq!(slope_limit(th(1.0)), 0.0);
        let s2 = slope_limit(th(2.0));
        let expect = (-2.0 * EULER_GAMMA).exp() * 4.0 / 3.0;
        assert!((s2 - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn h_theta_monotone_in_beta() {
        for &theta in &[0.5, 1.0, 2.0] {
            let mut prev = 0.0;
            for &beta in &[0.1, 0.2, 0.35, 0.5, 0.75, 0.9] {
                let v = h_theta(th(theta), beta).unwrap().value;
                assert!(v > prev, "theta={theta} beta={beta}: {v} vs {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn h1_superexponential_small_beta_trend() {
        // −β log H₁(β) ~ log(1/β): loose band plus approach-to-1 trend
        let r = |u: f64| {
            let h = h1_explicit(1.0 / u).unwrap().value;
            -(1.0 / u) * h.ln() / u.ln()
        };
        let (r6, r8, r10) = (r(6.0), r(8.0), r(10.0));
        for &v in &[r6, r8, r10] {
            assert!(v > 0.5 && v < 1.5, "ratio {v} out of (0.5, 1.5)");
        }
        assert!((r10 - 1.0).abs() <= (r6 - 1.0).abs() + 0.02, "r6={r6} r10={r10}");
        // θ=1 superlinearity: H₁(β)/β decreasing toward 0, unlike θ≠1
        let a = h1_explicit(1.0 / 6.0).unwrap().value * 6.0;
        let b = h1_explicit(1.0 / 10.0).unwrap().value * 10.0;
        assert!(b < a && b < 1e-6);
    }

    #[test]
    fn binned_tv_edge_cases() {
        let spec = BinSpec { lo: 0.0, hi: 1.0, bins: 16 };
        let a: Vec<Vec<f64>> = (0..200).map(|i| vec![(i as f64 + 0.5) / 200.0]).collect();
        let same = binned_empirical_tv(&a, &a, spec).unwrap();
        assert_eq!(same.value, 0.0);
        let b: Vec<Vec<f64>> = (0..200).map(|i| vec![(i as f64 + 0.5) / 200.0 * 0.4]).collect();
        let c: Vec<Vec<f64>> = (0..200).map(|i| vec![0.6 + (i as f64 + 0.5) / 200.0 * 0.4]).collect();
        let disjoint = binned_empirical_tv(&b, &c, spec).unwrap();
        assert_eq!(disjoint.value, 1.0);
        assert!(binned_empirical_tv(&[], &a, spec).is_err());
    }
}
