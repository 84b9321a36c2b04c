//! Builders for the delay-equation tables.
//!
//! The density g of the total mass below 1 of a scale-invariant Poisson
//! process with intensity θ/x satisfies the renewal form
//!     t·g(t) = θ·∫_{t−1}^{t} g(u) du,      g(t) = c·t^{θ−1} on (0, 1],
//! with c = e^{−γθ}/Γ(θ). Dickman's ρ is the same recursion with θ = 1 and
//! head coefficient 1. Buchstab's ω satisfies the explicit form
//!     u·ω(u) = 1 + ∫_{1}^{u−1} ω(t) dt,    ω(u) = 1/u on [1, 2].
//!
//! Both are stepped panel by panel over unit intervals aligned with the
//! integer breakpoints. The implicit builder solves blocks of 8 nodes
//! against the degree-8 interpolant of the unknown; non-integer θ gets an
//! analytic singular correction Σ βₘ τ^{θ+k−1+m} at the k-th breakpoint,
//! with coefficients obtained by matching orders in the renewal equation.

use super::panel::{block_weights, solve_dense, Panel, PanelTable, PowerHead, SingularPart, BLOCK};

/// Where the singular expansion stops mattering for degree-8 interpolation.
const SMOOTH_ORDER: f64 = 8.5;

fn singular_coeffs(theta: f64, k: usize, prev: Option<&SingularPart>) -> Option<SingularPart> {
    let q = theta + k as f64 - 1.0;
    let m_count = (SMOOTH_ORDER - q).ceil().max(0.0) as usize;
    if m_count == 0 {
        return None;
    }
    let mut coeffs = vec![0.0; m_count.min(12)];
    let mut beta_prev = 0.0;
    for m in 0..coeffs.len() {
        let b_m = prev.and_then(|sp| sp.coeffs.get(m)).copied().unwrap_or(0.0);
        let qm = q + m as f64;
        let beta = ((theta * (-b_m + beta_prev)) / qm - beta_prev) / k as f64;
        coeffs[m] = beta;
        beta_prev = beta;
    }
    Some(SingularPart { exponent: q, coeffs })
}

/// One resolution of the implicit delay table. `head_coeff` scales the
/// closed-form head c·t^{θ−1} on (0, 1].
fn delay_table_at(theta: f64, head_coeff: f64, u_max: usize, cells: usize) -> PanelTable {
    assert!(u_max >= 2 && cells % BLOCK == 0);
    let h = 1.0 / cells as f64;
    let w = block_weights();
    let mut table = PanelTable {
        head: Some(PowerHead { a: 0.0, b: 1.0, coeff: head_coeff, exponent: theta - 1.0 }),
        panels: Vec::with_capacity(u_max - 1),
        error_bound: 0.0,
        domain_lo: 0.0,
        domain_hi: u_max as f64,
    };
    let integer_theta = (theta - theta.round()).abs() < 1e-12;
    // head acts as "panel 0" with singular family c·τ^{θ-1} at τ = t
    let mut prev_sing =
        if integer_theta { None } else { Some(SingularPart { exponent: theta - 1.0, coeffs: vec![head_coeff] }) };
    let mut start_value = head_coeff; // g(1) from the head

    for k in 1..u_max {
        let a = k as f64;
        let sing = if integer_theta { None } else { singular_coeffs(theta, k, prev_sing.as_ref()) };
        let sing_eval = |tau: f64| sing.as_ref().map_or(0.0, |sp| sp.eval(tau));
        let sing_int = |lo: f64, hi: f64| sing.as_ref().map_or(0.0, |sp| sp.integral(lo, hi));

        let mut gvals = vec![0.0; cells + 1];
        gvals[0] = start_value;
        for block in 0..cells / BLOCK {
            let i0 = block * BLOCK;
            let t0 = a + i0 as f64 * h;
            let tau0 = i0 as f64 * h;
            let g0 = gvals[i0];
            let phi0 = g0 - sing_eval(tau0);
            let mut mat = [[0.0f64; BLOCK]; BLOCK];
            let mut rhs = [0.0f64; BLOCK];
            for j in 1..=BLOCK {
                let tj = t0 + j as f64 * h;
                let tauj = tau0 + j as f64 * h;
                for i in 1..=BLOCK {
                    mat[j - 1][i - 1] = -theta * h * w[j - 1][i];
                }
                mat[j - 1][j - 1] += tj;
                let lag = table.integrate(t0 - 1.0, tj - 1.0);
                let mut sing_terms = h * w[j - 1][0] * phi0 + sing_int(tau0, tauj);
                for i in 1..=BLOCK {
                    sing_terms -= h * w[j - 1][i] * sing_eval(tau0 + i as f64 * h);
                }
                rhs[j - 1] = t0 * g0 + theta * (sing_terms - lag);
            }
            solve_dense(&mut mat, &mut rhs);
            gvals[i0 + 1..i0 + 1 + BLOCK].copy_from_slice(&rhs);
        }

        start_value = gvals[cells];
        let values: Vec<f64> = gvals
            .iter()
            .enumerate()
            .map(|(i, g)| g - sing_eval(i as f64 * h))
            .collect();
        let mut panel = Panel { a, b: a + 1.0, h, values, cum: Vec::new(), sing: sing.clone() };
        panel.build_cum();
        table.panels.push(panel);
        prev_sing = sing;
    }
    table
}

/// One resolution of the explicit Buchstab table.
fn buchstab_table_at(u_max: usize, cells: usize) -> PanelTable {
    assert!(u_max >= 3 && cells % BLOCK == 0);
    let h = 1.0 / cells as f64;
    let mut table = PanelTable {
        head: Some(PowerHead { a: 1.0, b: 2.0, coeff: 1.0, exponent: -1.0 }),
        panels: Vec::with_capacity(u_max - 2),
        error_bound: 0.0,
        domain_lo: 1.0,
        domain_hi: u_max as f64,
    };
    let mut start_value = 0.5;
    for k in 2..u_max {
        let a = k as f64;
        let mut vals = vec![0.0; cells + 1];
        vals[0] = start_value;
        for i in 1..=cells {
            let t = a + i as f64 * h;
            let lag = table.integrate(t - 1.0 - h, t - 1.0);
            vals[i] = ((t - h) * vals[i - 1] + lag) / t;
        }
        start_value = vals[cells];
        let mut panel = Panel { a, b: a + 1.0, h, values: vals, cum: Vec::new(), sing: None };
        panel.build_cum();
        table.panels.push(panel);
    }
    table
}

/// Accumulated-roundoff floor added to every certified bound.
const ERROR_FLOOR: f64 = 1e-13;

fn certify(coarse: PanelTable, fine: PanelTable) -> PanelTable {
    let diff = coarse.max_node_diff(&fine);
    let mut out = fine;
    out.error_bound = 1.1 * diff + ERROR_FLOOR;
    out
}

/// Certified table for the renewal equation t·f = θ∫_{t−1}^t f with head
/// `head_coeff`·t^{θ−1}: the working grid is `cells_per_unit` doubled once,
/// and the error bound is the step-halving difference.
pub fn build_delay_table(theta: f64, head_coeff: f64, u_max: usize, cells_per_unit: usize) -> PanelTable {
    let coarse = delay_table_at(theta, head_coeff, u_max, cells_per_unit);
    let fine = delay_table_at(theta, head_coeff, u_max, cells_per_unit * 2);
    certify(coarse, fine)
}

/// Certified Buchstab table on [1, u_max].
pub fn build_buchstab_table(u_max: usize, cells_per_unit: usize) -> PanelTable {
    let coarse = buchstab_table_at(u_max, cells_per_unit);
    let fine = buchstab_table_at(u_max, cells_per_unit * 2);
    certify(coarse, fine)
}
