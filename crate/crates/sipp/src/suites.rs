//! Named check suites behind the command-line `check` command: golden
//! values, exact enumeration oracles, and pinned-seed statistical tests.
//! Results are stable-ordered for diffing.

use crate::discrete;
use crate::fixed_point;
use crate::model::Theta;
use crate::samplers;
use crate::special;
use crate::stats;
use crate::stream::RngStream;
use crate::tv;
use crate::EULER_GAMMA;

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn diff(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        let d = (value - target).abs();
        Self { name: name.into(), value, tolerance, pass: d <= tolerance }
    }

    fn gate(name: &str, value: f64, tolerance: f64, pass: bool) -> Self {
        Self { name: name.into(), value, tolerance, pass }
    }
}

fn th(x: f64) -> Theta {
    Theta::new(x).expect("valid theta")
}

/// Published / closed-form target values.
pub fn golden_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let paper_h1 = [(1.9, 0.4968), (2.0, 0.4454), (3.0, 0.1114), (3.5, 0.0471), (4.0, 0.0184)];
    for (u, target) in paper_h1 {
        let beta = 1.0 / u;
        let a = tv::h1_explicit(beta).map(|r| r.value).unwrap_or(f64::NAN);
        let b = tv::h_theta(th(1.0), beta).map(|r| r.value).unwrap_or(f64::NAN);
        out.push(CheckResult::diff(&format!("H1({beta:.6}) explicit"), a, target, 5e-4));
        out.push(CheckResult::diff(&format!("H1({beta:.6}) densities"), b, target, 5e-4));
    }
    out.push(CheckResult::diff(
        "rho(2) = 1 - log 2",
        special::dickman_rho(2.0).unwrap_or(f64::NAN),
        1.0 - std::f64::consts::LN_2,
        1e-10,
    ));
    out.push(CheckResult::diff(
        "integral of rho = e^gamma",
        special::rho_table().total_integral(),
        EULER_GAMMA.exp(),
        1e-6,
    ));
    out.push(CheckResult::diff(
        "omega(1.5) = 2/3",
        special::buchstab_omega(1.5).unwrap_or(f64::NAN),
        2.0 / 3.0,
        1e-12,
    ));
    out.push(CheckResult::diff(
        "omega(20) = e^-gamma",
        special::buchstab_omega(20.0).unwrap_or(f64::NAN),
        (-EULER_GAMMA).exp(),
        1e-9,
    ));
    out.push(CheckResult::diff("geometric base k=0", fixed_point::geometric_base(0), 2.0, 0.0));
    out.push(CheckResult::diff(
        "geometric base k=1 (golden)",
        fixed_point::geometric_base(1),
        (1.0 + 5.0f64.sqrt()) / 2.0,
        1e-12,
    ));
    out.push(CheckResult::diff(
        "periodic base m=2 k=1",
        fixed_point::periodic_base(2, 1).unwrap_or(f64::NAN),
        (3.0 + 5.0f64.sqrt()) / 2.0,
        1e-10,
    ));
    out.push(CheckResult::diff(
        "periodic base m=2 k=-1",
        fixed_point::periodic_base(2, -1).unwrap_or(f64::NAN),
        1.75487,
        1e-5,
    ));
    let slope = tv::slope_limit(th(2.0));
    out.push(CheckResult::diff(
        "slope_limit(2) closed form",
        slope,
        (-2.0 * EULER_GAMMA).exp() * 4.0 / 3.0,
        1e-12,
    ));
    let h = tv::h_theta(th(2.0), 1.0 / 128.0).map(|r| r.value).unwrap_or(f64::NAN);
    out.push(CheckResult::diff("H_2(1/128)*128 near slope", h * 128.0, slope, 0.1 * slope));
    out
}

/// Exact enumeration oracles.
pub fn oracle_suite(n: usize, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = n.clamp(1, 8);
    match discrete::exact_cycle_law_check(n) {
        Ok(rep) => {
            out.push(CheckResult::gate(
                &format!("cycle law == conditioned Poisson (n={n})"),
                rep.conditioned_diff,
                1e-12,
                rep.conditioned_diff < 1e-12,
            ));
            out.push(CheckResult::gate(
                &format!("geometric tilt invariance (n={n})"),
                rep.z_independence_diff,
                1e-14,
                rep.z_independence_diff < 1e-14,
            ));
        }
        Err(_) => out.push(CheckResult::gate("cycle law check", f64::NAN, 0.0, false)),
    }
    // subset-sum brackets against exact enumeration on small instances
    use crate::coverage::{reachable_sums, ApproxMode};
    use rand::Rng;
    let mut rng = RngStream::new(seed).rng();
    let mut worst_miss = 0.0f64;
    let mut ok = true;
    for _ in 0..3 {
        let pts: Vec<f64> = (0..16).map(|_| 0.01 + rng.gen::<f64>()).collect();
        let delta = 5e-4;
        let outer = match reachable_sums(&pts, delta, ApproxMode::OuterApprox) {
            Ok(s) => s,
            Err(_) => {
                ok = false;
                break;
            }
        };
        for mask in 0u32..(1 << 16) {
            let mut s = 0.0;
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                s += pts[i];
                m &= m - 1;
            }
            if !outer.covers(s, outer.slack + 1e-9) {
                ok = false;
                worst_miss = s;
            }
        }
    }
    out.push(CheckResult::gate("outer set contains exact subset sums", worst_miss, 0.0, ok));
    out
}

/// Pinned-seed statistical suite (KS and chi-square gates at p > 1e-3).
pub fn statistical_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let base = RngStream::new(seed);

    // first point of the unit sample has CDF x^θ
    let theta = 1.5;
    let n = 20_000;
    let mut xs: Vec<f64> = (0..n)
        .map(|i| {
            samplers::sample_sipp_unit(th(theta), 1e-3, base.substream(i)).unwrap().points()[0]
        })
        .collect();
    let d = stats::ks_statistic(&mut xs, |x| x.powf(theta)).unwrap();
    let p = stats::ks_p_value(d, n as usize);
    out.push(CheckResult::gate("KS first point vs x^theta", p, 1e-3, p > 1e-3));

    // GEM stick mean 1/(θ+1)
    let m = 20_000;
    let ys: Vec<f64> = (0..m)
        .map(|i| samplers::sample_gem(th(2.0), 1, base.substream(1_000_000 + i)).unwrap().entries()[0])
        .collect();
    let (mean, var) = stats::mean_var(&ys);
    let dev = (mean - 1.0 / 3.0).abs();
    let tol = 3.0 * (var / m as f64).sqrt();
    out.push(CheckResult::gate("GEM first stick mean", dev, tol, dev < tol));

    // Moran total mass is Gamma(θ)
    let k = 10_000;
    let mut sums: Vec<f64> = (0..k)
        .map(|i| samplers::sample_moran(th(0.8), 1e-6, base.substream(2_000_000 + i)).unwrap().1)
        .collect();
    let d = stats::ks_statistic(&mut sums, |x| statrs::function::gamma::gamma_lr(0.8, x.max(1e-300)))
        .unwrap();
    let p = stats::ks_p_value(d, k as usize);
    out.push(CheckResult::gate("KS Moran mass vs Gamma", p, 1e-3, p > 1e-3));

    // P(V1 <= 1/2) = rho(2) for θ = 1
    let k = 20_000;
    let hits = (0..k)
        .filter(|&i| {
            samplers::sample_pd(th(1.0), 1, 1e-8, base.substream(3_000_000 + i))
                .unwrap()
                .simplex
                .entries()[0]
                <= 0.5
        })
        .count() as f64;
    let pv = hits / k as f64;
    let target = 1.0 - std::f64::consts::LN_2;
    let tol = 3.0 * (target * (1.0 - target) / k as f64).sqrt();
    out.push(CheckResult::gate("P(V1 <= 1/2) vs rho(2)", (pv - target).abs(), tol, (pv - target).abs() < tol));

    // spacing lemma: partial-sum counts in (1,2) are Poisson(θ log 2)
    let trials = 1_500u64;
    let theta = 1.0;
    let mut histogram = vec![0u64; 9];
    for t in 0..trials {
        let s = samplers::sample_spacings_2d(th(theta), 3, base.substream(4_000_000 + t)).unwrap();
        let count =
            s.partial_sums.iter().filter(|&&x| x > 1.0 && x <= 2.0).count().min(8);
        histogram[count] += 1;
    }
    let pmf = stats::poisson_pmf_with_tail(theta * std::f64::consts::LN_2, 7);
    let expected: Vec<f64> = pmf.iter().map(|p| p * trials as f64).collect();
    let (_s, _df, p) = stats::chi_square_gof(&histogram, &expected, 5.0).unwrap();
    out.push(CheckResult::gate("chi2 spacing-lemma counts (1,2)", p, 1e-3, p > 1e-3));

    // T recursion: T =_d U(1+T')
    let k = 20_000usize;
    let mut t1: Vec<f64> = (0..k)
        .map(|i| {
            samplers::sample_sipp_unit(th(1.0), 1e-9, base.substream(5_000_000 + i as u64))
                .unwrap()
                .total()
        })
        .collect();
    let mut t2: Vec<f64> = (0..k)
        .map(|i| {
            let sub = base.substream(6_000_000 + i as u64);
            let tp = samplers::sample_sipp_unit(th(1.0), 1e-9, sub.substream(1))
                .unwrap()
                .total();
            let mut rng = sub.substream(2).rng();
            use rand::Rng;
            rng.gen::<f64>() * (1.0 + tp)
        })
        .collect();
    let d = stats::ks_two_sample(&mut t1, &mut t2).unwrap();
    let p = stats::ks_two_sample_p_value(d, k, k);
    out.push(CheckResult::gate("KS T vs U(1+T')", p, 1e-3, p > 1e-3));

    out
}

/// golden + oracle + statistical.
pub fn all_suites(seed: u64) -> Vec<CheckResult> {
    let mut out = golden_suite();
    out.extend(oracle_suite(6, seed));
    out.extend(statistical_suite(seed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_suite_passes() {
        for r in golden_suite() {
            assert!(r.pass, "{}: value {} tol {}", r.name, r.value, r.tolerance);
        }
    }

    #[test]
    fn oracle_suite_passes() {
        for r in oracle_suite(6, 42) {
            assert!(r.pass, "{}: value {}", r.name, r.value);
        }
    }
}
