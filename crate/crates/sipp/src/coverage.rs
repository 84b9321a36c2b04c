//! Subset-sum geometry of the process points: grid reachability sets with
//! outer/inner rounding, Monte Carlo estimation of the covering probability
//! f(θ) = P(1 ∈ A(θ)), coin-weighted point sums (Bernoulli convolutions),
//! and reachability over leading Poisson–Dirichlet coordinates.

use crate::error::{Error, Result};
use crate::model::Theta;
use crate::quad;
use crate::samplers;
use crate::special;
use crate::stream::RngStream;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxMode {
    /// Bit set for every cell the true reachable set can touch.
    OuterApprox,
    /// Bit set only for cells witnessed by a rounded sum; a set bit means a
    /// true subset sum lies within `slack` of the cell.
    InnerApprox,
}

/// Grid approximation of the set of finite subset sums of a point set.
/// Bit j covers the cell [jδ, (j+1)δ).
#[derive(Debug, Clone)]
pub struct ReachabilitySet {
    pub delta: f64,
    pub mode: ApproxMode,
    /// Accumulated rounding slack: outer sets contain the truth as-is, inner
    /// set bits witness a true sum within this distance of the cell.
    pub slack: f64,
    bits: Vec<u64>,
    nbits: usize,
}

impl ReachabilitySet {
    fn with_capacity(delta: f64, nbits: usize, mode: ApproxMode) -> Result<Self> {
        if nbits > (1 << 30) {
            return Err(Error::ResourceGuard(format!("{nbits} grid bits exceed the 2^30 guard")));
        }
        let mut set = Self { delta, mode, slack: 0.0, bits: vec![0; (nbits + 63) / 64 + 1], nbits };
        set.set_bit(0); // the empty subset
        Ok(set)
    }

    #[inline]
    fn set_bit(&mut self, j: usize) {
        self.bits[j / 64] |= 1u64 << (j % 64);
    }

    #[inline]
    pub fn get_bit(&self, j: usize) -> bool {
        j < self.nbits && self.bits[j / 64] & (1u64 << (j % 64)) != 0
    }

    pub fn len_bits(&self) -> usize {
        self.nbits
    }

    /// self |= self << k, in place.
    fn shift_or(&mut self, k: usize) {
        let (words, rem) = (k / 64, (k % 64) as u32);
        let n = self.bits.len();
        for i in (0..n).rev() {
            let mut v = 0u64;
            if i >= words {
                v = self.bits[i - words] << rem;
                if rem > 0 && i > words {
                    v |= self.bits[i - words - 1] >> (64 - rem);
                }
            }
            self.bits[i] |= v;
        }
    }

    fn add_point(&mut self, x: f64) {
        debug_assert!(x >= 0.0);
        let pos = x / self.delta;
        match self.mode {
            ApproxMode::OuterApprox => {
                // a sum in cell j plus x lands within cells j+⌊pos⌋ ..= j+⌊pos⌋+1
                let k = pos.floor() as usize;
                let snapshot = self.bits.clone();
                self.shift_or(k);
                let mut other = Self {
                    delta: self.delta,
                    mode: self.mode,
                    slack: 0.0,
                    bits: snapshot,
                    nbits: self.nbits,
                };
                other.shift_or(k + 1);
                for (a, b) in self.bits.iter_mut().zip(&other.bits) {
                    *a |= b;
                }
                self.slack += self.delta;
            }
            ApproxMode::InnerApprox => {
                let k = pos.round() as usize;
                self.shift_or(k);
                self.slack += (x - k as f64 * self.delta).abs();
            }
        }
    }

    /// Does some set cell intersect [target − fatten, target + fatten]?
    pub fn covers(&self, target: f64, fatten: f64) -> bool {
        let lo = (((target - fatten) / self.delta).floor() as i64).max(0) as usize;
        let hi = (((target + fatten) / self.delta).floor() as i64).max(0) as usize;
        (lo..=hi.min(self.nbits.saturating_sub(1))).any(|j| self.get_bit(j))
    }

    /// Indices of all set bits (test support).
    pub fn set_bits(&self) -> Vec<usize> {
        (0..self.nbits).filter(|&j| self.get_bit(j)).collect()
    }
}

/// Subset-sum reachability of a finite point set by bit-shift DP.
pub fn reachable_sums(points: &[f64], delta: f64, mode: ApproxMode) -> Result<ReachabilitySet> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    if points.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::invalid("points must be positive and finite"));
    }
    let total: f64 = points.iter().sum();
    let nbits = (total / delta).ceil() as usize + points.len() + 2;
    let mut set = ReachabilitySet::with_capacity(delta, nbits, mode)?;
    for &x in points {
        set.add_point(x);
    }
    Ok(set)
}

/// Chernoff bound on the 99.9% quantile of T (total mass below 1): the
/// smallest t with inf_s exp(K(s) − s·t) ≤ 10⁻³, K the cumulant function.
fn t_quantile_bound(theta: f64) -> f64 {
    let log_target = (1e-3f64).ln();
    let tail_exponent = |t: f64| -> f64 {
        // inf over s of K(s) − s·t (convex in s)
        let s_star = quad::golden_min(|s| special::cumulant(theta, s) - s * t, 0.0, 400.0, 1e-6);
        special::cumulant(theta, s_star) - s_star * t
    };
    let mut lo = theta.max(0.1);
    let mut hi = lo;
    while tail_exponent(hi) > log_target {
        hi *= 2.0;
        if hi > 1e4 {
            break;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail_exponent(mid) > log_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Monte Carlo estimate of P(target ∈ A(θ)).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CoverEstimate {
    /// Fraction of trials where the inner set covers the target.
    pub lower: f64,
    /// Fraction where the dust-fattened outer set covers the target.
    pub upper: f64,
    /// 99% binomial half-width on either fraction.
    pub ci_halfwidth: f64,
    /// 99.9% bound on the total mass of the omitted dust points.
    pub t_eps_bound: f64,
}

/// Estimate the probability that the closure of subset sums of the process
/// covers `target`. Points above the target cannot participate (everything
/// is positive), so each trial samples (ε·target, target]; the omitted dust
/// below the cutoff is accounted by fattening the outer set with a 99.9%
/// Chernoff quantile of its total mass.
pub fn estimate_cover(
    theta: Theta,
    target: f64,
    eps: f64,
    delta: f64,
    trials: u64,
    stream: RngStream,
) -> Result<CoverEstimate> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::invalid("eps must lie in (0, 0.1]"));
    }
    if !(delta > 0.0 && delta <= eps * target / 4.0) {
        return Err(Error::invalid("delta must be at most eps*target/4"));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::invalid("target must be positive"));
    }
    let t_eps_bound = eps * target * t_quantile_bound(theta.get());
    let mut lower_hits = 0u64;
    let mut upper_hits = 0u64;
    for trial in 0..trials {
        let cfg = samplers::sample_sipp_unit(theta, eps, stream.substream(trial))?;
        let points: Vec<f64> = cfg.points().iter().map(|x| x * target).collect();
        let outer = reachable_sums(&points, delta, ApproxMode::OuterApprox)?;
        if outer.covers(target, t_eps_bound + outer.slack.min(delta)) {
            upper_hits += 1;
        }
        let inner = reachable_sums(&points, delta, ApproxMode::InnerApprox)?;
        if inner.covers(target, delta + inner.slack) {
            lower_hits += 1;
        }
    }
    let (lower, upper) = (lower_hits as f64 / trials as f64, upper_hits as f64 / trials as f64);
    let worst_p = [lower, upper]
        .iter()
        .map(|p| (p * (1.0 - p)).sqrt())
        .fold(0.0f64, f64::max)
        .max(0.5 / (trials as f64).sqrt());
    let ci_halfwidth = 2.576 * worst_p / (trials as f64).sqrt();
    Ok(CoverEstimate { lower, upper, ci_halfwidth, t_eps_bound })
}

/// `estimate_cover` specialized to the covering probability f(θ) = P(1 ∈ A(θ)).
pub fn estimate_f(
    theta: Theta,
    eps: f64,
    delta: f64,
    trials: u64,
    stream: RngStream,
) -> Result<CoverEstimate> {
    estimate_cover(theta, 1.0, eps, delta, trials, stream)
}

/// Source process for coin-weighted sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionSource {
    /// Y = Σ Jᵢ Vᵢ over a fresh stick-breaking realization per draw.
    /// The sticks are summed in stick order; since the coins are i.i.d. and
    /// independent of the sticks, ranking them first would not change the law.
    PdConditional,
    /// Y* = Σ Jᵢ Xᵢ over the points of a unit scale-invariant sample.
    SippUnit,
}

/// Coin-weighted sums of process coordinates: `coins_per_draw` fair coins
/// applied to the leading coordinates of a fresh realization per draw.
/// Truncation bias per draw is at most (θ/(θ+1))^coins for PdConditional
/// and θ·10⁻⁹ for SippUnit.
pub fn bernoulli_convolution_samples(
    theta: Theta,
    source: ConvolutionSource,
    draws: u64,
    coins_per_draw: u32,
    stream: RngStream,
) -> Result<Vec<f64>> {
    if draws == 0 || coins_per_draw == 0 {
        return Err(Error::invalid("draws and coins_per_draw must be >= 1"));
    }
    let mut out = Vec::with_capacity(draws as usize);
    for d in 0..draws {
        let sub = stream.substream(d);
        let mut rng = sub.substream(u64::MAX).rng(); // coin stream
        let mut y = 0.0;
        match source {
            ConvolutionSource::PdConditional => {
                let sticks = samplers::sample_gem(theta, coins_per_draw as usize, sub)?;
                for &v in sticks.entries() {
                    if rng.gen::<bool>() {
                        y += v;
                    }
                }
            }
            ConvolutionSource::SippUnit => {
                let cfg = samplers::sample_sipp_unit(theta, 1e-9, sub)?;
                for (i, &x) in cfg.points().iter().enumerate() {
                    if i as u32 >= coins_per_draw {
                        break;
                    }
                    if rng.gen::<bool>() {
                        y += x;
                    }
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Outer reachability set of the top `depth` Poisson–Dirichlet coordinates;
/// the unranked tail mass is folded into the slack, so the reported set
/// plus slack contains the full subset-sum set B(θ).
pub fn b_set_sample(
    theta: Theta,
    depth: usize,
    delta: f64,
    stream: RngStream,
) -> Result<ReachabilitySet> {
    if depth == 0 {
        return Err(Error::invalid("depth must be >= 1"));
    }
    let pd = samplers::sample_pd(theta, depth, 1e-9, stream)?;
    let mut set = reachable_sums(pd.simplex.entries(), delta, ApproxMode::OuterApprox)?;
    set.slack += pd.simplex.tail_mass();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn single_point_reachability() {
        let set = reachable_sums(&[0.5], 0.01, ApproxMode::OuterApprox).unwrap();
        assert!(set.covers(0.0, 0.0));
        assert!(set.covers(0.5, set.slack));
        assert!(!set.covers(0.25, 2.0 * set.slack));
        assert!(!set.covers(1.0, 2.0 * set.slack));
    }

    #[test]
    fn two_point_outer_set() {
        let set = reachable_sums(&[0.3, 0.7], 0.005, ApproxMode::OuterApprox).unwrap();
        for target in [0.0, 0.3, 0.7, 1.0] {
            assert!(set.covers(target, set.slack), "missing {target}");
        }
        assert!(!set.covers(0.5, set.slack));
    }

    #[test]
    fn inner_subset_of_outer() {
        let mut rng = RngStream::new(4).rng();
        for _ in 0..20 {
            let pts: Vec<f64> = (0..12).map(|_| rng.gen::<f64>().max(1e-3)).collect();
            let outer = reachable_sums(&pts, 1e-3, ApproxMode::OuterApprox).unwrap();
            let inner = reachable_sums(&pts, 1e-3, ApproxMode::InnerApprox).unwrap();
            for j in inner.set_bits() {
                // an inner bit's cell must be covered by outer cells nearby
                let x = j as f64 * 1e-3;
                assert!(outer.covers(x, inner.slack + 1e-3), "bit {j}");
            }
        }
    }

    #[test]
    fn exact_enumeration_oracle_20_points() {
        // fixed-point integer oracle: u64 sums of points scaled by 2^32
        let mut rng = RngStream::new(77).rng();
        for instance in 0..10 {
            let pts: Vec<f64> = (0..20).map(|_| 0.001 + 0.999 * rng.gen::<f64>()).collect();
            let delta = 2e-4;
            let outer = reachable_sums(&pts, delta, ApproxMode::OuterApprox).unwrap();
            let inner = reachable_sums(&pts, delta, ApproxMode::InnerApprox).unwrap();
            let scale = (1u64 << 32) as f64;
            let fixed: Vec<u64> = pts.iter().map(|&x| (x * scale).round() as u64).collect();
            // enumerate all 2^20 sums
            let mut hit_outer = vec![false; outer.len_bits()];
            for mask in 0u32..(1 << 20) {
                let mut s = 0u64;
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    s += fixed[i];
                    m &= m - 1;
                }
                let x = s as f64 / scale;
                // every true sum must be covered by the outer set
                assert!(
                    outer.covers(x, outer.slack + 1e-9),
                    "instance {instance}: outer missed {x}"
                );
                let cell = (x / delta) as usize;
                for c in cell.saturating_sub(1)..=(cell + 1).min(hit_outer.len() - 1) {
                    hit_outer[c] = true;
                }
            }
            // every inner bit must witness a true sum within its slack
            for j in inner.set_bits() {
                let lo = j as f64 * delta - inner.slack - 1e-9;
                let hi = (j + 1) as f64 * delta + inner.slack + 1e-9;
                let cell_lo = (lo.max(0.0) / delta) as usize;
                let cell_hi = (hi / delta) as usize;
                assert!(
                    (cell_lo..=cell_hi.min(hit_outer.len() - 1)).any(|c| hit_outer[c]),
                    "instance {instance}: inner bit {j} unwitnessed"
                );
            }
        }
    }

    #[test]
    fn quantile_bound_sane() {
        // T has mean θ; the 99.9% bound must exceed it and stay finite
        for &theta in &[0.5, 1.0, 3.0] {
            let q = t_quantile_bound(theta);
            assert!(q > theta && q < 100.0, "theta={theta}: {q}");
        }
    }

    #[test]
    fn estimate_f_respects_mass_constraint() {
        // covering 1 needs total mass ≥ 1: upper ≤ P(T ≥ 1 − t_eps) + noise;
        // crude sanity: upper < 1 and lower ≤ upper
        let est = estimate_f(th(2.0), 0.05, 0.01, 300, RngStream::new(10)).unwrap();
        assert!(est.lower <= est.upper);
        assert!(est.upper < 1.0);
        assert!(est.t_eps_bound > 0.0);
    }

    #[test]
    fn bernoulli_convolution_mean_half() {
        let ys =
            bernoulli_convolution_samples(th(1.0), ConvolutionSource::PdConditional, 20_000, 48, RngStream::new(3))
                .unwrap();
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        assert!(ys.iter().all(|&y| (0.0..=1.0).contains(&y)));
    }

    #[test]
    fn b_set_contains_endpoints_and_reflects() {
        for seed in 0..10 {
            let set = b_set_sample(th(1.0), 40, 1e-4, RngStream::new(seed)).unwrap();
            assert!(set.covers(0.0, set.slack));
            assert!(set.covers(1.0, set.slack + 1e-4), "seed {seed}");
            // symmetry: x ∈ B iff 1−x ∈ B (complement subsets)
            for j in (0..set.len_bits()).step_by(37) {
                if set.get_bit(j) {
                    let x = j as f64 * set.delta;
                    assert!(
                        set.covers(1.0 - x, 2.0 * set.slack + 2.0 * set.delta),
                        "seed {seed}: no reflection of {x}"
                    );
                }
            }
        }
    }
}
