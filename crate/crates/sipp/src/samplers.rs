//! Seeded samplers for every process construction in the toolkit.
//!
//! All samplers are pure functions of (parameters, RngStream); concurrent
//! calls on distinct streams are deterministic and independent.

use crate::error::{Error, Result};
use crate::model::{PointConfiguration, RankedSimplex, SpacingVector, Theta};
use crate::stream::{exponential, open_unit, poisson, RngStream};
use rand::Rng;

/// Points X_k = U₁⋯U_k of the scale-invariant process on (ε, 1), built from
/// independent U = UNIFORM^{1/θ} factors; generation stops at the first
/// point ≤ ε, which is excluded.
pub fn sample_sipp_unit(theta: Theta, eps: f64, stream: RngStream) -> Result<PointConfiguration> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("cutoff must lie in (0,1), got {eps}")));
    }
    let mut rng = stream.rng();
    let inv_theta = 1.0 / theta.get();
    let mut points = Vec::new();
    let mut x = 1.0f64;
    loop {
        x *= open_unit(&mut rng).powf(inv_theta);
        if x <= eps {
            break;
        }
        points.push(x);
    }
    PointConfiguration::at_zero(points, eps, theta)
}

/// Scale-invariant Poisson sample on a window (a, b): the count is
/// Poisson(θ log(b/a)) and, given the count, points are i.i.d. with CDF
/// log(x/a)/log(b/a), i.e. a·(b/a)^UNIFORM. Returned ascending.
pub fn sample_sipp_window(
    theta: Theta,
    a: f64,
    b: f64,
    stream: RngStream,
) -> Result<PointConfiguration> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::invalid(format!("window requires 0 < a < b, got ({a}, {b})")));
    }
    let mut rng = stream.rng();
    let lambda = theta.get() * (b / a).ln();
    let n = poisson(&mut rng, lambda);
    let ratio = b / a;
    let mut points: Vec<f64> = (0..n).map(|_| a * ratio.powf(open_unit(&mut rng))).collect();
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    points.dedup(); // ties have probability 0; drop the fp corner case
    PointConfiguration::window(points, a, b, theta)
}

/// GEM stick lengths Y₁ = 1−U₁, Y_k = U₁⋯U_{k−1}(1−U_k) with
/// U = UNIFORM^{1/θ}; the remainder after n sticks is Π U_k.
pub fn sample_gem(theta: Theta, n: usize, stream: RngStream) -> Result<SpacingVector> {
    let mut rng = stream.rng();
    let inv_theta = 1.0 / theta.get();
    let mut entries = Vec::with_capacity(n);
    let mut prod = 1.0f64;
    for _ in 0..n {
        let u = open_unit(&mut rng).powf(inv_theta);
        entries.push(prod * (1.0 - u));
        prod *= u;
    }
    SpacingVector::new(entries, theta)
}

/// A Poisson–Dirichlet sample: the top `n` ranked GEM sticks.
#[derive(Debug, Clone)]
pub struct PdSample {
    pub simplex: RankedSimplex,
    /// True when the unranked tail cannot displace any reported entry
    /// (tail mass ≤ the smallest reported stick).
    pub rank_certified: bool,
}

/// Ranked spacings: GEM sticks are generated until the remaining mass drops
/// below `eps`, then ranked; the remainder is reported as tail mass.
pub fn sample_pd(theta: Theta, n: usize, eps: f64, stream: RngStream) -> Result<PdSample> {
    if n == 0 {
        return Err(Error::invalid("sample_pd requires n >= 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("tail cutoff must lie in (0,1), got {eps}")));
    }
    let mut rng = stream.rng();
    let inv_theta = 1.0 / theta.get();
    let mut sticks = Vec::new();
    let mut prod = 1.0f64;
    while prod > eps {
        let u = open_unit(&mut rng).powf(inv_theta);
        sticks.push(prod * (1.0 - u));
        prod *= u;
    }
    sticks.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let tail = prod + sticks.iter().skip(n).sum::<f64>();
    sticks.truncate(n);
    // only the unseen remainder can displace a reported rank: every
    // generated-but-unreported stick is already known to rank below
    let rank_certified = prod <= *sticks.last().unwrap();
    Ok(PdSample { simplex: RankedSimplex::new(sticks, tail.min(1.0))?, rank_certified })
}

/// One draw of the Moran construction (intensity θe^{−x}/x above `eps`),
/// realized by thinning a scale-invariant sample on (eps, 50) with
/// acceptance e^{−x}. Returns (points descending, their sum σ).
///
/// Truncation bias: the missing mass below eps has mean ≤ θ·eps, and above
/// the fixed upper cutoff 50 it is ≤ θ·e^{−50}.
pub fn sample_moran(theta: Theta, eps: f64, stream: RngStream) -> Result<(Vec<f64>, f64)> {
    const UPPER: f64 = 50.0;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("cutoff must lie in (0,1), got {eps}")));
    }
    let mut rng = stream.rng();
    let lambda = theta.get() * (UPPER / eps).ln();
    let n = poisson(&mut rng, lambda);
    let ratio = UPPER / eps;
    let mut points = Vec::new();
    for _ in 0..n {
        let x = eps * ratio.powf(open_unit(&mut rng));
        if open_unit(&mut rng) < (-x).exp() {
            points.push(x);
        }
    }
    points.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma = points.iter().sum();
    Ok((points, sigma))
}

/// One window of the planar construction with intensity θe^{−wy} dw dy.
#[derive(Debug, Clone)]
pub struct Spacings2d {
    /// The y coordinates in decreasing-w order (the spacing sequence).
    pub y_points: Vec<f64>,
    /// Partial sums X_n = Σ_{i≤n} y_i in the same order.
    pub partial_sums: Vec<f64>,
    /// Largest X value that is free of windowing bias (a quarter of the
    /// expected coverage θ/w_floor).
    pub reliable_max: f64,
    /// Uniform bound on the leftward shift of every partial sum from the
    /// omitted points (y below the floor or beyond the cap).
    pub sum_bias_bound: f64,
}

/// Realize the pairs (W, Y) with W > w_floor and y in a finite band, order
/// by decreasing W, and emit partial sums. The marginal intensity of Y given
/// W > w is θe^{−wy}/y, realized by thinning a scale-invariant sample; W − w
/// given Y = y is exponential with rate y.
///
/// `m` sets the scale: partial sums are reliable out to about 2^{m+2}·(1/4),
/// covering the dyadic windows (1,2), ..., (2^{m−1}, 2^m).
pub fn sample_spacings_2d(theta: Theta, m: u32, stream: RngStream) -> Result<Spacings2d> {
    if m == 0 || m > 16 {
        return Err(Error::invalid("window count m must lie in 1..=16"));
    }
    let th = theta.get();
    let w_floor = th / (1 << (m + 2)) as f64;
    let y_floor = 1e-6;
    let y_cap = 36.0 / w_floor;
    let mut rng = stream.rng();
    let lambda = th * (y_cap / y_floor).ln();
    let n = poisson(&mut rng, lambda);
    let ratio = y_cap / y_floor;
    let mut pairs = Vec::new();
    for _ in 0..n {
        let y = y_floor * ratio.powf(open_unit(&mut rng));
        if open_unit(&mut rng) < (-w_floor * y).exp() {
            let w = w_floor + exponential(&mut rng, y);
            pairs.push((w, y));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let y_points: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = y_points
        .iter()
        .map(|y| {
            acc += y;
            acc
        })
        .collect();
    Ok(Spacings2d {
        y_points,
        partial_sums,
        reliable_max: th / w_floor / 4.0,
        sum_bias_bound: th * y_floor + th * (-36.0f64).exp(),
    })
}

/// Counts of k-spacings between consecutive ones of the independent
/// Bernoulli sequence ξ_i with P(ξ_i = 1) = θ/(θ+i−1), i = 1..N.
#[derive(Debug, Clone)]
pub struct SpacingCountVector {
    /// counts[k−1] = number of k-spacings, k = 1..=b.
    pub counts: Vec<u64>,
    pub truncation: usize,
}

pub fn feller_binary_spacings(
    theta: Theta,
    n: usize,
    b: usize,
    stream: RngStream,
) -> Result<SpacingCountVector> {
    if n < b || b == 0 {
        return Err(Error::invalid("need N >= b >= 1"));
    }
    let th = theta.get();
    let mut rng = stream.rng();
    let mut counts = vec![0u64; b];
    let mut last_one: Option<usize> = None;
    for i in 1..=n {
        let p = th / (th + (i - 1) as f64);
        if open_unit(&mut rng) < p {
            if let Some(prev) = last_one {
                let gap = i - prev;
                if gap <= b {
                    counts[gap - 1] += 1;
                }
            }
            last_one = Some(i);
        }
    }
    Ok(SpacingCountVector { counts, truncation: n })
}

/// Bernoulli sequence of the Feller coupling, plus the terminal boundary:
/// cycle counts C_k of an Ewens(θ) permutation of n objects are the spacing
/// counts of ξ₁..ξ_n with a sentinel one at n+1.
pub fn ewens_cycle_counts_from_bernoulli(theta: Theta, n: usize, rng_stream: RngStream) -> Vec<u64> {
    let th = theta.get();
    let mut rng = rng_stream.rng();
    let mut counts = vec![0u64; n];
    let mut last_one = 1usize; // ξ₁ = 1 with probability θ/θ = 1
    for i in 2..=n {
        let p = th / (th + (i - 1) as f64);
        if open_unit(&mut rng) < p {
            counts[i - last_one - 1] += 1;
            last_one = i;
        }
    }
    counts[n + 1 - last_one - 1] += 1; // sentinel at n+1
    counts
}

/// Index k chosen with probability w_k / Σw.
pub fn size_biased_pick(weights: &[f64], stream: RngStream) -> Result<usize> {
    size_biased_pick_with(weights, &mut stream.rng())
}

pub(crate) fn size_biased_pick_with<R: Rng>(weights: &[f64], rng: &mut R) -> Result<usize> {
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::invalid("weights must be nonnegative and finite"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("weights must not all be zero"));
    }
    let mut u: f64 = rng.gen::<f64>() * total;
    for (k, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return Ok(k);
        }
    }
    Ok(weights.len() - 1)
}
