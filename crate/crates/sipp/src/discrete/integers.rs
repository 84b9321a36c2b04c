//! Prime factorization of uniform integers, smooth/rough counting sieves,
//! divisor measures, and the Lévy metric between discrete measures.

use crate::error::{Error, Result};
use crate::model::DiscreteMeasure;
use crate::stream::RngStream;
use rand::Rng;

/// Prime factorization of a uniform integer, primes listed largest first
/// with multiplicity; Pᵢ = 1 beyond Ω(N) by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMultiset {
    pub n_ceiling: u64,
    pub value: u64,
    /// nonincreasing prime factors with multiplicity (empty for value 1)
    pub primes: Vec<u64>,
}

impl FactorMultiset {
    /// Pᵢ (1-based), padding with 1 past the number of prime factors.
    pub fn prime(&self, i: usize) -> u64 {
        if i == 0 {
            return 1;
        }
        self.primes.get(i - 1).copied().unwrap_or(1)
    }

    pub fn omega_with_multiplicity(&self) -> usize {
        self.primes.len()
    }
}

/// Trial-division factorization with a 2-3-5 wheel; deterministic and exact
/// for n within u64 (intended scale: n ≤ 10¹²).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut w = 0usize;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// N uniform on [1, ceiling], fully factorized.
pub fn factor_uniform_integer(n_ceiling: u64, stream: RngStream) -> Result<FactorMultiset> {
    if !(2..=1_000_000_000).contains(&n_ceiling) {
        return Err(Error::invalid("ceiling must lie in [2, 1e9]"));
    }
    let mut rng = stream.rng();
    let value = rng.gen_range(1..=n_ceiling);
    let mut primes = Vec::new();
    for (p, e) in factorize(value) {
        for _ in 0..e {
            primes.push(p);
        }
    }
    primes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(FactorMultiset { n_ceiling, value, primes })
}

/// Ψ(x, y) = #{n ≤ x: largest prime factor ≤ y} and
/// Φ(x, y) = #{n ≤ x: no prime factor ≤ y} (n = 1 counts in both), by a
/// residual-division sieve. y < 2 degenerates to Ψ = 1 and Φ = x.
pub fn smooth_rough_counts(x: u64, y: u64) -> Result<(u64, u64)> {
    if x < 1 || y < 1 || y > x {
        return Err(Error::invalid("need 1 <= y <= x"));
    }
    if x > 100_000_000 {
        return Err(Error::ResourceGuard(format!("sieve size {x} exceeds the 1e8 guard")));
    }
    if y < 2 {
        return Ok((1, x));
    }
    let xs = x as usize;
    // residual[n] = n with every prime factor ≤ y divided out
    let mut residual: Vec<u32> = (0..=xs as u32).collect();
    let mut sieve_prime = vec![true; (y as usize) + 1];
    for p in 2..=y as usize {
        if !sieve_prime[p] {
            continue;
        }
        let mut q = p * p;
        while q <= y as usize {
            sieve_prime[q] = false;
            q += p;
        }
        let mut j = p;
        while j <= xs {
            while residual[j] % p as u32 == 0 {
                residual[j] /= p as u32;
            }
            j += p;
        }
    }
    let mut psi = 0u64;
    let mut phi = 0u64;
    for n in 1..=xs {
        if residual[n] == 1 {
            psi += 1;
        }
        if residual[n] == n as u32 {
            phi += 1;
        }
    }
    Ok((psi, phi))
}

/// All divisors of m, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(m) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// The measure placing mass 1/τ(m) at log d / log m for each divisor d of m
/// (with 0/0 read as 1, so m = 1 gives the point mass at 1).
pub fn divisor_measure(m: u64) -> Result<DiscreteMeasure> {
    if m == 0 {
        return Err(Error::invalid("divisor measure needs m >= 1"));
    }
    if m == 1 {
        return Ok(DiscreteMeasure::point_mass(1.0));
    }
    let ds = divisors(m);
    let mass = 1.0 / ds.len() as f64;
    let log_m = (m as f64).ln();
    let support: Vec<f64> = ds.iter().map(|&d| (d as f64).ln() / log_m).collect();
    let masses = vec![mass; ds.len()];
    DiscreteMeasure::new(support, masses)
}

fn cdf_left(m: &DiscreteMeasure, x: f64) -> f64 {
    let mut acc = 0.0;
    for (s, w) in m.support().iter().zip(m.masses()) {
        if *s < x {
            acc += w;
        } else {
            break;
        }
    }
    acc
}

/// Lévy metric between two finitely supported measures: the least ε such
/// that each CDF fits inside the other's ε-band (±ε horizontally and
/// vertically). Feasibility is checked exactly at the CDF breakpoints;
/// the ε is then located by bisection to f64 precision.
pub fn levy_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let violation = |eps: f64| -> f64 {
        let mut worst = 0.0f64;
        for (g, f) in [(mu, nu), (nu, mu)] {
            // sup_x G(x) − F(x+ε) over breakpoints of both step functions
            for &s in g.support() {
                worst = worst.max(g.cdf(s) - f.cdf(s + eps));
            }
            for &s in f.support() {
                let x = s - eps;
                worst = worst.max(cdf_left(g, x) - cdf_left(f, s));
            }
        }
        worst
    };
    if violation(0.0) <= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if violation(mid) <= mid {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
