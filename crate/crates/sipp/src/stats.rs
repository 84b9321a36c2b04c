//! Kolmogorov–Smirnov and chi-square test statistics used by the
//! statistical check suites. All tests here are pure functions of their
//! sample arrays; callers pin seeds.

use crate::error::{Error, Result};

/// Kolmogorov–Smirnov statistic of `samples` against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("KS statistic of an empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid("KS statistic with NaN samples"));
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        d = d.max(((i + 1) as f64 / n - c).abs()).max((i as f64 / n - c).abs());
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("KS two-sample with empty sample"));
    }
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..101 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS p-value with the Stephens finite-n correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_q(d * (sn + 0.12 + 0.11 / sn))
}

/// Two-sample KS p-value via the effective sample size nm/(n+m).
pub fn ks_two_sample_p_value(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    let sn = ne.sqrt();
    kolmogorov_q(d * (sn + 0.12 + 0.11 / sn))
}

/// Critical two-sample KS statistic at significance `alpha`.
pub fn ks_two_sample_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Chi-square goodness-of-fit of observed counts against expected counts.
/// Cells with expected < `min_expected` are pooled into their neighbour.
/// Returns (statistic, degrees of freedom, p-value).
pub fn chi_square_gof(observed: &[u64], expected: &[f64], min_expected: f64) -> Result<(f64, usize, f64)> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::invalid("chi-square requires equal, nonempty observed/expected"));
    }
    let mut obs_pool = Vec::new();
    let mut exp_pool = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0f64, 0.0f64);
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o as f64;
        e_acc += e;
        if e_acc >= min_expected {
            obs_pool.push(o_acc);
            exp_pool.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        if let (Some(o), Some(e)) = (obs_pool.last_mut(), exp_pool.last_mut()) {
            *o += o_acc;
            *e += e_acc;
        } else {
            obs_pool.push(o_acc);
            exp_pool.push(e_acc);
        }
    }
    if obs_pool.len() < 2 {
        return Err(Error::invalid("chi-square collapsed to fewer than 2 cells"));
    }
    let stat: f64 = obs_pool
        .iter()
        .zip(&exp_pool)
        .map(|(o, e)| {
            let d = o - e;
            d * d / e
        })
        .sum();
    let df = obs_pool.len() - 1;
    let p = chi_square_sf(stat, df as f64);
    Ok((stat, df, p))
}

/// Chi-square survival function via the regularized upper incomplete gamma.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(df / 2.0, x / 2.0)
}

/// Poisson pmf table 0..=kmax with the remaining tail in the final slot.
pub fn poisson_pmf_with_tail(lambda: f64, kmax: usize) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(kmax + 2);
    let mut p = (-lambda).exp();
    let mut acc = 0.0;
    for k in 0..=kmax {
        pmf.push(p);
        acc += p;
        p *= lambda / (k + 1) as f64;
    }
    pmf.push((1.0 - acc).max(0.0));
    pmf
}

/// Sample mean and (unbiased) variance.
pub fn mean_var(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
