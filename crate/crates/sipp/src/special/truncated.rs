//! Law of the sum of the points in (β, 1] of a scale-invariant Poisson
//! process: an atom of mass β^θ at 0 plus a continuous density j on (β, ∞).
//!
//! Size-biasing the Poisson sum gives the exact renewal equation
//!     s·j(s) = θ·β^θ·1{β < s ≤ 1} + θ·∫_{max(β, s−1)}^{s−β} j(y) dy,
//! which is stepped upward from s = β on panels aligned with the breakpoint
//! set {m·β + n}. On (β, min(2β, 1)] the density is exactly θβ^θ/s. For
//! θ = 1 and β = 1/u, j(s) = ω(s·u) on (β, 1], Buchstab's function.

use super::panel::{Panel, PanelTable, PowerHead, BLOCK};
use crate::error::{Error, Result};
use crate::model::Theta;

#[derive(Debug, Clone)]
pub struct TruncatedSumLaw {
    pub theta: f64,
    pub beta: f64,
    /// Probability of no points in (β, 1]: exactly β^θ.
    pub atom_at_zero: f64,
    pub s_max: f64,
    table: PanelTable,
}

fn breakpoints(beta: f64, s_max: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let m_max = (s_max / beta).ceil() as i64 + 1;
    let n_max = s_max.ceil() as i64 + 1;
    for n in 0..=n_max {
        for m in 0..=m_max {
            let s = m as f64 * beta + n as f64;
            if s > beta * (1.0 + 1e-12) && s < s_max * (1.0 - 1e-12) {
                pts.push(s);
            }
        }
    }
    pts.push(s_max);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-11 * (1.0 + b.abs()));
    pts
}

fn truncated_table_at(theta: f64, beta: f64, s_max: f64, target_h: f64) -> PanelTable {
    let bps = breakpoints(beta, s_max);
    let atom = beta.powf(theta);
    // head: θβ^θ / s up to the first breakpoint
    let head_hi = bps[0];
    let mut table = PanelTable {
        head: Some(PowerHead { a: beta, b: head_hi, coeff: theta * atom, exponent: -1.0 }),
        panels: Vec::new(),
        error_bound: 0.0,
        domain_lo: beta,
        domain_hi: s_max,
    };
    for w in bps.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let len = hi - lo;
        let cells = (((len / target_h).ceil() as usize).max(16) + BLOCK - 1) / BLOCK * BLOCK;
        let h = len / cells as f64;
        let indicator = if lo < 1.0 { theta * atom } else { 0.0 };
        let mut vals = vec![0.0; cells + 1];
        for (i, v) in vals.iter_mut().enumerate() {
            let s = lo + i as f64 * h;
            let upper = s - beta;
            let lower = (s - 1.0).max(beta);
            let integral = if upper > lower { table.integrate(lower, upper) } else { 0.0 };
            *v = (indicator + theta * integral) / s;
        }
        let mut panel = Panel { a: lo, b: hi, h, values: vals, cum: Vec::new(), sing: None };
        panel.build_cum();
        table.panels.push(panel);
    }
    table
}

impl TruncatedSumLaw {
    /// Build the law of the sum of points in (β, 1], tabulated on (β, s_max].
    pub fn build(theta: Theta, beta: f64, s_max: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::invalid(format!("beta must lie in (0,1), got {beta}")));
        }
        if !(s_max >= 2.0 && s_max.is_finite()) {
            return Err(Error::invalid(format!("s_max must be >= 2, got {s_max}")));
        }
        let th = theta.get();
        let target_h = (beta / 16.0).min(1.0 / 256.0);
        let coarse = truncated_table_at(th, beta, s_max, target_h);
        let fine = truncated_table_at(th, beta, s_max, target_h / 2.0);
        let diff = coarse.max_node_diff(&fine);
        let mut table = fine;
        table.error_bound = 1.1 * diff + 1e-13;
        Ok(Self { theta: th, beta, atom_at_zero: beta.powf(th), s_max, table })
    }

    /// Continuous density at s (0 outside (β, s_max]); left limit at
    /// breakpoints, so `density(1.0)` is the value at 1−.
    pub fn density(&self, s: f64) -> f64 {
        self.table.eval_or_zero(s)
    }

    /// The density evaluated at 1−.
    pub fn density_at_one_minus(&self) -> f64 {
        self.density(1.0)
    }

    /// Certified uniform error bound on the density table.
    pub fn error_bound(&self) -> f64 {
        self.table.error_bound
    }

    /// atom + ∫_β^{s_max} j: equals 1 up to the mass beyond s_max.
    pub fn total_mass(&self) -> f64 {
        self.atom_at_zero + self.table.total_integral()
    }

    /// ∫ of the continuous part over [lo, hi].
    pub fn integrate_density(&self, lo: f64, hi: f64) -> f64 {
        self.table.integrate(lo, hi)
    }

    /// Panel boundaries (kink locations) of the density table.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.table.breakpoints()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(TruncatedSumLaw::build(th(1.0), 0.0, 4.0).is_err());
        assert!(TruncatedSumLaw::build(th(1.0), 1.0, 4.0).is_err());
    }

    #[test]
    fn atom_is_beta_to_theta() {
        let law = TruncatedSumLaw::build(th(2.0), 0.25, 2.0).unwrap();
        assert_eq!(law.atom_at_zero, 0.25f64.powi(2));
    }

    #[test]
    fn head_density_closed_form() {
        // j(s) = θ β^θ / s on (β, 2β] for β < 1/2
        let law = TruncatedSumLaw::build(th(1.5), 0.3, 2.0).unwrap();
        for &s in &[0.35, 0.45, 0.55] {
            let exact = 1.5 * 0.3f64.powf(1.5) / s;
            assert!((law.density(s) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn density_vanishes_between_one_and_two_beta_for_large_beta() {
        // β > 1/2: one point gives sum ≤ 1, two points give sum > 2β > 1,
        // so the density is 0 on (1, 2β).
        let law = TruncatedSumLaw::build(th(1.0), 0.7, 2.5).unwrap();
        assert!(law.density(1.2).abs() < 1e-12);
        assert!(law.density(1.39).abs() < 1e-12);
        assert!(law.density(1.5) > 0.0);
    }

    #[test]
    fn second_panel_closed_form_theta_one() {
        // θ=1, β=1/4: on (2β, 3β] ∩ (…,1]: j(s) = (1 + log(s/β − 1))·β/s
        let law = TruncatedSumLaw::build(th(1.0), 0.25, 2.0).unwrap();
        for &s in &[0.55, 0.6, 0.7] {
            let exact = (1.0 + (s / 0.25 - 1.0f64).ln()) * 0.25 / s;
            assert!((law.density(s) - exact).abs() < 1e-11, "s={s}");
        }
    }

    #[test]
    fn mass_is_conserved() {
        for &(theta, beta) in &[(1.0, 0.5), (0.5, 0.25), (2.0, 1.0 / 3.0)] {
            let law = TruncatedSumLaw::build(th(theta), beta, 10.0).unwrap();
            let mass = law.total_mass();
            assert!((mass - 1.0).abs() < 1e-7, "theta={theta} beta={beta}: mass {mass}");
        }
    }
}
