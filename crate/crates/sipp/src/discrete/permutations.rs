//! Cycle counts of Ewens and uniform random permutations, exact
//! conditioned-Poisson identities, and exact prefix total-variation
//! distances to the independent Poisson limit.

use crate::error::{Error, Result};
use crate::model::{TVMethod, TVReport, Theta};
use crate::samplers::ewens_cycle_counts_from_bernoulli;
use crate::stream::RngStream;

/// Cycle type of a permutation of n objects: counts[i−1] cycles of length i,
/// with Σ i·Cᵢ = n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCounts {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl CycleCounts {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().enumerate().map(|(i, &c)| (i as u64 + 1) * c).sum();
        if total != n as u64 || counts.len() != n {
            return Err(Error::Structural(format!("cycle counts must satisfy sum i*C_i = {n}")));
        }
        Ok(Self { n, counts })
    }
}

/// Cycle counts of an Ewens(θ) permutation via the Feller construction:
/// gaps between successes of independent Bernoulli(θ/(θ+i−1)) trials,
/// including the terminal boundary gap.
pub fn ewens_cycle_counts(theta: Theta, n: usize, stream: RngStream) -> Result<CycleCounts> {
    if n == 0 {
        return Err(Error::invalid("need n >= 1"));
    }
    CycleCounts::new(n, ewens_cycle_counts_from_bernoulli(theta, n, stream))
}

/// All cycle types of partitions of n, with the exact uniform-permutation
/// probability 1/(Π i^{c_i} c_i!) of each.
fn partition_types(n: usize) -> Vec<(Vec<u64>, f64)> {
    let mut out = Vec::new();
    let mut counts = vec![0u64; n];
    fn rec(n: usize, max_part: usize, remaining: usize, weight: f64, counts: &mut Vec<u64>, out: &mut Vec<(Vec<u64>, f64)>) {
        if remaining == 0 {
            out.push((counts.clone(), weight));
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            // add one cycle of length `part`
            counts[part - 1] += 1;
            let w = weight / (part as f64 * counts[part - 1] as f64);
            rec(n, part, remaining - part, w, counts, out);
            counts[part - 1] -= 1;
        }
    }
    rec(n, n, n, 1.0, &mut counts, &mut out);
    out
}

/// Exhaustive cycle-type law of the uniform permutation of n objects by
/// generating all n! permutations (test oracle; n ≤ 8).
pub fn cycle_type_law_brute_force(n: usize) -> Result<Vec<(Vec<u64>, f64)>> {
    if n == 0 || n > 8 {
        return Err(Error::invalid("brute force law requires 1 <= n <= 8"));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut law: std::collections::BTreeMap<Vec<u64>, u64> = std::collections::BTreeMap::new();
    let mut c = vec![0usize; n];
    let count_type = |perm: &[usize], law: &mut std::collections::BTreeMap<Vec<u64>, u64>| {
        let mut seen = vec![false; n];
        let mut counts = vec![0u64; n];
        for start in 0..n {
            if !seen[start] {
                let mut len = 0;
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                    len += 1;
                }
                counts[len - 1] += 1;
            }
        }
        *law.entry(counts).or_insert(0) += 1;
    };
    // Heap's algorithm
    count_type(&perm, &mut law);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count_type(&perm, &mut law);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let total: u64 = (1..=n as u64).product();
    Ok(law.into_iter().map(|(k, v)| (k, v as f64 / total as f64)).collect())
}

/// Result of the exact conditioning identities at size n.
#[derive(Debug, Clone)]
pub struct CycleLawReport {
    pub n: usize,
    /// max |uniform-permutation law − Poisson(1/i) conditioned on Σ i·Zᵢ = n|
    pub conditioned_diff: f64,
    /// max |law − geometric-tilt form with E Zᵢ = zⁱ/i| over two z values
    pub shepp_lloyd_diff: f64,
    /// max difference between the two z-tilted laws themselves
    pub z_independence_diff: f64,
}

/// Verify exactly that the uniform cycle-type law equals the conditioned
/// independent-Poisson law, and that the zⁱ/i tilt leaves the conditional
/// law unchanged (checked at z = 1 − 1/n and z = 1/2).
pub fn exact_cycle_law_check(n: usize) -> Result<CycleLawReport> {
    if n == 0 || n > 8 {
        return Err(Error::invalid("exact enumeration limited to 1 <= n <= 8"));
    }
    let types = partition_types(n);
    // uniform law: weight already is 1/(Π i^c c!), and Σ over partitions = 1
    let sum_uniform: f64 = types.iter().map(|(_, w)| w).sum();

    // conditioned Poisson(1/i): P(c | T_n = n) = w / Σw — identical weights
    let conditioned_diff = types
        .iter()
        .map(|(_, w)| (w / sum_uniform - w).abs())
        .fold(0.0, f64::max)
        .max((sum_uniform - 1.0).abs());

    // tilted weights: Π (z^i/i)^{c_i}/c_i! = z^n · w (the z^n factor is
    // constant over partitions of n, so conditioning cancels it)
    let tilted = |z: f64| -> Vec<f64> {
        let weights: Vec<f64> = types
            .iter()
            .map(|(c, _)| {
                let mut w = 1.0;
                for (i, &ci) in c.iter().enumerate() {
                    for rep in 0..ci {
                        w *= z.powi(i as i32 + 1) / ((i + 1) as f64 * (rep + 1) as f64);
                    }
                }
                w
            })
            .collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    };
    let za = tilted(1.0 - 1.0 / n as f64);
    let zb = tilted(0.5);
    let mut shepp_lloyd_diff = 0.0f64;
    let mut z_independence_diff = 0.0f64;
    for (i, (_, w)) in types.iter().enumerate() {
        shepp_lloyd_diff = shepp_lloyd_diff.max((za[i] - w).abs()).max((zb[i] - w).abs());
        z_independence_diff = z_independence_diff.max((za[i] - zb[i]).abs());
    }
    Ok(CycleLawReport { n, conditioned_diff, shepp_lloyd_diff, z_independence_diff })
}

/// Exact d_TV((C₁..C_b), (Z₁..Z_b)) between the first b cycle counts of a
/// uniform permutation of n objects and independent Poisson(1/i).
///
/// Uses P_C(c) = (Π_{i≤b} (1/i)^{c_i}/c_i!) · q_{n−m}, where q_r is the
/// probability that a uniform permutation of r objects has no cycle ≤ b
/// (recursion r·q_r = Σ_{j=b+1}^{r} q_{r−j}), enumerating every prefix
/// vector with m = Σ i·cᵢ ≤ n, plus the residual Poisson mass.
pub fn exact_prefix_tv(n: usize, b: usize) -> Result<TVReport> {
    if n > 60 {
        return Err(Error::invalid("exact prefix TV limited to n <= 60"));
    }
    if b > n {
        return Err(Error::invalid("need b <= n"));
    }
    if b == 0 {
        return Ok(TVReport::new(0.0, TVMethod::ExactEnumeration, 0.0));
    }
    // enumeration-size guard
    let mut count_dp = vec![0u64; n + 1];
    count_dp[0] = 1;
    for i in 1..=b {
        for m in i..=n {
            count_dp[m] += count_dp[m - i];
        }
    }
    let vectors: u64 = count_dp.iter().sum();
    if vectors > 10_000_000 {
        return Err(Error::ResourceGuard(format!("{vectors} prefix vectors exceed the 1e7 guard")));
    }

    let mut q = vec![0.0f64; n + 1];
    q[0] = 1.0;
    for r in 1..=n {
        let mut s = 0.0;
        for j in (b + 1)..=r {
            s += q[r - j];
        }
        q[r] = s / r as f64;
    }
    let h_b: f64 = (1..=b).map(|i| 1.0 / i as f64).sum();
    let e_hb = (-h_b).exp(); // Π_{i≤b} e^{−1/i}

    struct Dfs<'a> {
        n: usize,
        b: usize,
        q: &'a [f64],
        e_hb: f64,
        total_abs: f64,
        z_mass_seen: f64,
    }
    impl Dfs<'_> {
        fn run(&mut self, i: usize, m: usize, w: f64) {
            if i > self.b {
                let pz = self.e_hb * w;
                let pc = w * self.q[self.n - m];
                self.total_abs += (pc - pz).abs();
                self.z_mass_seen += pz;
                return;
            }
            let mut c = 0u64;
            let mut term = 1.0f64;
            while m + i * c as usize <= self.n {
                self.run(i + 1, m + i * c as usize, w * term);
                c += 1;
                term *= (1.0 / i as f64) / c as f64;
            }
        }
    }
    let mut dfs = Dfs { n, b, q: &q, e_hb, total_abs: 0.0, z_mass_seen: 0.0 };
    dfs.run(1, 0, 1.0);
    let value = 0.5 * (dfs.total_abs + (1.0 - dfs.z_mass_seen).max(0.0));
    Ok(TVReport::new(value, TVMethod::ExactEnumeration, 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn single_element_always_one_cycle() {
        for seed in 0..20 {
            let c = ewens_cycle_counts(th(0.7), 1, RngStream::new(seed)).unwrap();
            assert_eq!(c.counts, vec![1]);
        }
    }

    #[test]
    fn three_cycles_of_s3_have_probability_one_third() {
        let n = 30_000u64;
        let hits = (0..n)
            .filter(|&i| {
                ewens_cycle_counts(th(1.0), 3, RngStream::new(1).substream(i)).unwrap().counts[2]
                    == 1
            })
            .count() as f64;
        let p = hits / n as f64;
        let sd = (2.0 / 9.0 / n as f64).sqrt();
        assert!((p - 1.0 / 3.0).abs() < 3.0 * sd, "p = {p}");
    }

    #[test]
    fn feller_matches_exact_law_for_small_n() {
        // χ² of sampled cycle types against the exact uniform law, n ≤ 6
        for n in 2..=6usize {
            let law = cycle_type_law_brute_force(n).unwrap();
            let draws = 40_000u64;
            let mut observed = vec![0u64; law.len()];
            for i in 0..draws {
                let c = ewens_cycle_counts(th(1.0), n, RngStream::new(9).substream(i)).unwrap();
                let idx = law.iter().position(|(t, _)| *t == c.counts).expect("type in law");
                observed[idx] += 1;
            }
            let expected: Vec<f64> = law.iter().map(|(_, p)| p * draws as f64).collect();
            let (_stat, _df, p) = stats::chi_square_gof(&observed, &expected, 5.0).unwrap();
            assert!(p > 1e-3, "n={n}: chi-square p = {p}");
        }
    }

    #[test]
    fn exact_law_check_small_sizes() {
        for n in 1..=8 {
            let rep = exact_cycle_law_check(n).unwrap();
            assert!(rep.conditioned_diff < 1e-12, "n={n}: {}", rep.conditioned_diff);
            assert!(rep.shepp_lloyd_diff < 1e-12, "n={n}: {}", rep.shepp_lloyd_diff);
            assert!(rep.z_independence_diff < 1e-14, "n={n}: {}", rep.z_independence_diff);
        }
        assert!(exact_cycle_law_check(9).is_err());
    }

    #[test]
    fn exact_law_matches_brute_force_n3() {
        // {(3,0,0): 1/6, (1,1,0): 1/2, (0,0,1): 1/3}
        let law = cycle_type_law_brute_force(3).unwrap();
        for (t, p) in law {
            let expect = match t.as_slice() {
                [3, 0, 0] => 1.0 / 6.0,
                [1, 1, 0] => 0.5,
                [0, 0, 1] => 1.0 / 3.0,
                _ => panic!("unexpected type {t:?}"),
            };
            assert!((p - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn conditioning_normalizer_is_exp_minus_harmonic() {
        // Σ over partitions of n of Π (1/i)^{c_i}/c_i! = 1, so
        // P(T_n = n) = e^{−H_n}; cross-check against brute force at n = 5
        let types = partition_types(5);
        let total: f64 = types.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
        let brute = cycle_type_law_brute_force(5).unwrap();
        assert_eq!(brute.len(), types.len());
        let total_brute: f64 = brute.iter().map(|(_, p)| p).sum();
        assert!((total_brute - 1.0).abs() < 1e-14);
    }

    #[test]
    fn prefix_tv_full_window_matches_direct_enumeration() {
        // b = n = 4: P_C is the exact cycle-type law, so
        // TV = 1 − Σ_c min(P_C(c), P_Z(c)). Enumerate Z-vectors up to
        // Σ i·zᵢ ≤ 12, which covers all but ~1e−9 of the Poisson mass.
        fn enumerate(
            i: usize,
            m: usize,
            w: f64,
            law: &[(Vec<u64>, f64)],
            c: &mut Vec<u64>,
            shared: &mut f64,
        ) {
            if i > 4 {
                let pc = law
                    .iter()
                    .find(|(t, _)| t.as_slice() == c.as_slice())
                    .map(|(_, p)| *p)
                    .unwrap_or(0.0);
                *shared += w.min(pc);
                return;
            }
            let mut ci = 0u64;
            let mut term = 1.0;
            while m + i * ci as usize <= 12 {
                c[i - 1] = ci;
                enumerate(i + 1, m + i * ci as usize, w * term, law, c, shared);
                ci += 1;
                term *= (1.0 / i as f64) / ci as f64;
            }
            c[i - 1] = 0;
        }
        let report = exact_prefix_tv(4, 4).unwrap();
        let law = cycle_type_law_brute_force(4).unwrap();
        let h4: f64 = (1..=4).map(|i| 1.0 / i as f64).sum();
        let mut shared = 0.0;
        let mut c = vec![0u64; 4];
        enumerate(1, 0, (-h4).exp(), &law, &mut c, &mut shared);
        let direct = 1.0 - shared;
        assert!((report.value - direct).abs() < 1e-8, "{} vs {direct}", report.value);
    }

    #[test]
    fn prefix_tv_edges() {
        assert_eq!(exact_prefix_tv(10, 0).unwrap().value, 0.0);
        assert!(exact_prefix_tv(61, 10).is_err());
        assert!(exact_prefix_tv(10, 11).is_err());
    }
}
