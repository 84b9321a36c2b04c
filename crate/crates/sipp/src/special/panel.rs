//! Piecewise-panel tables for the delay-equation special functions.
//!
//! Each function is represented as an optional closed-form head of the form
//! c·t^e plus a sequence of panels whose boundaries sit exactly on the
//! breakpoints of the defining integral equation, so polynomial convergence
//! is not lost to kinks. Within a panel the stored node values are the
//! *smooth* part; a panel may carry an analytic singular part
//! Σ cₘ (t−a)^{q+m} that is subtracted before interpolation and added back
//! on evaluation (needed for non-integer intensity parameters, where the
//! solution has algebraic branch points at the breakpoints).
//!
//! Interpolation is degree-8 Lagrange on 9 consecutive nodes; in-cell
//! integrals use 5-point Gauss–Legendre, which is exact for the
//! interpolant. Error bounds are certified by step halving.

use std::sync::OnceLock;

/// Cells per implicit block; the Lagrange stencil is BLOCK+1 nodes.
pub(crate) const BLOCK: usize = 8;

// 5-point Gauss–Legendre nodes/weights on [-1, 1].
const GL5_X: [f64; 5] = [
    -0.906179845938663992797626878299393,
    -0.538469310105683091036314420700208,
    0.0,
    0.538469310105683091036314420700208,
    0.906179845938663992797626878299393,
];
const GL5_W: [f64; 5] = [
    0.236926885056189087514264040719917,
    0.478628670499366468041291514835638,
    0.568888888888888888888888888888889,
    0.478628670499366468041291514835638,
    0.236926885056189087514264040719917,
];

// Barycentric weights for 9 equispaced nodes: (-1)^j C(8, j).
const BARY9: [f64; 9] = [1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0];

/// Degree-8 Lagrange interpolation of `values` at node coordinate `s` ∈ [0, 8].
#[inline]
pub(crate) fn lagrange9(values: &[f64], s: f64) -> f64 {
    debug_assert!(values.len() >= 9);
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, (&v, &w)) in values.iter().take(9).zip(BARY9.iter()).enumerate() {
        let d = s - j as f64;
        if d == 0.0 {
            return v;
        }
        let t = w / d;
        num += t * v;
        den += t;
    }
    num / den
}

fn lagr_basis(i: usize, s: f64) -> f64 {
    let mut p = 1.0;
    for m in 0..9 {
        if m != i {
            p *= (s - m as f64) / (i as f64 - m as f64);
        }
    }
    p
}

/// W[j-1][i] = ∫₀^j ℓᵢ(s) ds on the 9-node stencil, j = 1..=8.
pub(crate) fn block_weights() -> &'static [[f64; 9]; 8] {
    static W: OnceLock<[[f64; 9]; 8]> = OnceLock::new();
    W.get_or_init(|| {
        let mut w = [[0.0; 9]; 8];
        for i in 0..9 {
            let mut acc = 0.0;
            for j in 1..=8 {
                // ∫_{j-1}^{j} ℓ_i via GL5
                let (a, b) = ((j - 1) as f64, j as f64);
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                let mut seg = 0.0;
                for (x, wt) in GL5_X.iter().zip(GL5_W.iter()) {
                    seg += wt * lagr_basis(i, c + h * x);
                }
                acc += seg * h;
                w[j - 1][i] = acc;
            }
        }
        w
    })
}

/// Solve a small dense linear system in place (partial pivoting).
pub(crate) fn solve_dense(a: &mut [[f64; BLOCK]; BLOCK], b: &mut [f64; BLOCK]) {
    let n = BLOCK;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if piv != col {
            a.swap(piv, col);
            b.swap(piv, col);
        }
        let d = a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col][c] * b[c];
        }
        b[col] = s / a[col][col];
    }
}

/// Closed-form head segment c·t^e on [a, b].
#[derive(Debug, Clone)]
pub struct PowerHead {
    pub a: f64,
    pub b: f64,
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerHead {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.coeff * t.powf(self.exponent)
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let e = self.exponent;
        if (e + 1.0).abs() < 1e-14 {
            self.coeff * (hi / lo).ln()
        } else {
            self.coeff * (hi.powf(e + 1.0) - lo.powf(e + 1.0)) / (e + 1.0)
        }
    }
}

/// Analytic singular part Σ cₘ τ^{q+m} anchored at the panel's left edge.
#[derive(Debug, Clone)]
pub struct SingularPart {
    pub exponent: f64,
    pub coeffs: Vec<f64>,
}

impl SingularPart {
    #[inline]
    pub fn eval(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut p = tau.powf(self.exponent);
        for &c in &self.coeffs {
            acc += c * p;
            p *= tau;
        }
        acc
    }

    /// ∫ over [lo, hi] in panel-local coordinates (both ≥ 0).
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let anti = |tau: f64| -> f64 {
            if tau <= 0.0 {
                return 0.0;
            }
            let mut acc = 0.0;
            let mut p = tau.powf(self.exponent + 1.0);
            for (m, &c) in self.coeffs.iter().enumerate() {
                acc += c * p / (self.exponent + m as f64 + 1.0);
                p *= tau;
            }
            acc
        };
        anti(hi) - anti(lo)
    }
}

/// One panel: uniform nodes on [a, b], smooth node values, cumulative
/// integrals of the smooth part, optional singular part.
#[derive(Debug, Clone)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub values: Vec<f64>,
    pub cum: Vec<f64>,
    pub sing: Option<SingularPart>,
}

impl Panel {
    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    #[inline]
    fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }

    #[inline]
    fn stencil_lo(&self, cell: usize) -> usize {
        (cell as i64 - 4).clamp(0, (self.cells() - BLOCK) as i64) as usize
    }

    fn eval_smooth(&self, t: f64) -> f64 {
        let cells = self.cells();
        let cell = (((t - self.a) / self.h).floor() as i64).clamp(0, cells as i64 - 1) as usize;
        let lo = self.stencil_lo(cell);
        let s = (t - self.a) / self.h - lo as f64;
        lagrange9(&self.values[lo..lo + 9], s)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.eval_smooth(t);
        if let Some(sp) = &self.sing {
            v += sp.eval(t - self.a);
        }
        v
    }

    /// Integral of the smooth interpolant over [x, y] within one cell.
    fn partial_cell(&self, cell: usize, x: f64, y: f64) -> f64 {
        if y <= x {
            return 0.0;
        }
        let lo = self.stencil_lo(cell);
        let c = 0.5 * (x + y);
        let hw = 0.5 * (y - x);
        let mut acc = 0.0;
        for (gx, gw) in GL5_X.iter().zip(GL5_W.iter()) {
            let t = c + hw * gx;
            let s = (t - self.a) / self.h - lo as f64;
            acc += gw * lagrange9(&self.values[lo..lo + 9], s);
        }
        acc * hw
    }

    pub(crate) fn build_cum(&mut self) {
        let cells = self.cells();
        let mut cum = Vec::with_capacity(cells + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for cell in 0..cells {
            acc += self.partial_cell(cell, self.node(cell), self.node(cell + 1));
            cum.push(acc);
        }
        self.cum = cum;
    }

    /// ∫ of the full function (smooth + singular) over [x, y] ⊆ [a, b].
    pub fn integrate(&self, x: f64, y: f64) -> f64 {
        if y <= x {
            return 0.0;
        }
        let cells = self.cells();
        let ix = (((x - self.a) / self.h).floor() as i64).clamp(0, cells as i64 - 1) as usize;
        let iy = (((y - self.a) / self.h).ceil() as i64 - 1).clamp(0, cells as i64 - 1) as usize;
        let smooth = if ix == iy {
            self.partial_cell(ix, x, y)
        } else {
            self.partial_cell(ix, x, self.node(ix + 1))
                + (self.cum[iy] - self.cum[ix + 1])
                + self.partial_cell(iy, self.node(iy), y)
        };
        let sing = match &self.sing {
            Some(sp) => sp.integral(x - self.a, y - self.a),
            None => 0.0,
        };
        smooth + sing
    }
}

/// A head segment plus breakpoint-aligned panels covering [domain_lo, domain_hi].
#[derive(Debug, Clone)]
pub struct PanelTable {
    pub head: Option<PowerHead>,
    pub panels: Vec<Panel>,
    pub error_bound: f64,
    pub domain_lo: f64,
    pub domain_hi: f64,
}

impl PanelTable {
    /// Evaluate at `t`; at an interior breakpoint this returns the left limit.
    /// Returns 0 below the domain; `None` above it.
    pub fn eval_checked(&self, t: f64) -> Option<f64> {
        if t > self.domain_hi * (1.0 + 1e-14) {
            return None;
        }
        Some(self.eval_or_zero(t))
    }

    /// Evaluate, treating everything outside the domain as 0.
    pub fn eval_or_zero(&self, t: f64) -> f64 {
        if t < self.domain_lo || t > self.domain_hi {
            return 0.0;
        }
        if let Some(head) = &self.head {
            if t <= head.b {
                return head.eval(t);
            }
        }
        let idx = self.panels.partition_point(|p| p.b < t);
        match self.panels.get(idx) {
            Some(p) => p.eval(t),
            None => match self.panels.last() {
                Some(p) => p.eval(t),
                None => self.head.as_ref().map_or(0.0, |h| h.eval(t)),
            },
        }
    }

    /// ∫ over [x, y] clipped to the domain.
    pub fn integrate(&self, x: f64, y: f64) -> f64 {
        if y <= x {
            return 0.0;
        }
        let x = x.max(self.domain_lo);
        let y = y.min(self.domain_hi);
        if y <= x {
            return 0.0;
        }
        let mut acc = 0.0;
        if let Some(head) = &self.head {
            let lo = x.max(head.a);
            let hi = y.min(head.b);
            if hi > lo {
                acc += head.integral(lo, hi);
            }
        }
        let start = self.panels.partition_point(|p| p.b <= x);
        for p in &self.panels[start..] {
            if p.a >= y {
                break;
            }
            let lo = x.max(p.a);
            let hi = y.min(p.b);
            if hi > lo {
                acc += p.integrate(lo, hi);
            }
        }
        acc
    }

    /// Total integral over the domain.
    pub fn total_integral(&self) -> f64 {
        self.integrate(self.domain_lo, self.domain_hi)
    }

    /// Breakpoints (head edges and panel edges), ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if let Some(h) = &self.head {
            out.push(h.a);
            out.push(h.b);
        }
        for p in &self.panels {
            if out.last().map_or(true, |&l| (l - p.a).abs() > 1e-14) {
                out.push(p.a);
            }
            out.push(p.b);
        }
        out
    }

    /// Max |self − other| over this table's panel nodes (full values).
    pub(crate) fn max_node_diff(&self, other: &PanelTable) -> f64 {
        let mut worst = 0.0f64;
        for p in &self.panels {
            for i in 0..=p.cells() {
                let t = p.a + i as f64 * p.h;
                let mine = p.eval(t.min(p.b));
                let theirs = other.eval_or_zero(t.min(p.b).min(other.domain_hi));
                worst = worst.max((mine - theirs).abs());
            }
        }
        worst
    }
}
