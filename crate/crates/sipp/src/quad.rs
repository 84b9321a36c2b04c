//! Adaptive Gauss–Kronrod quadrature and small root/minimum helpers.

use crate::error::{Error, Result};

// (G7, K15) nodes and weights on [-1, 1]; positive half, symmetric.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 15-point panel: returns (estimate, |K15 − G7|).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fl, fr) = if i == 7 {
            let v = f(c);
            (v, 0.0)
        } else {
            (f(c - h * x), f(c + h * x))
        };
        let s = fl + fr;
        kron += wk * s;
        // odd Kronrod indices (plus the centre) are the embedded Gauss nodes
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        } else if i == 7 {
            gauss += WG[3] * fl;
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

// Panel budget: below an achievable tolerance the bisection tree would
// otherwise grow exponentially; past the budget, estimates are accepted
// and their error contributions reported honestly.
const MAX_PANELS: u32 = 20_000;

fn adapt<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    out_err: &mut f64,
    budget: &mut u32,
) -> f64 {
    let (val, err) = gk15(f, a, b);
    *budget += 1;
    if err <= tol
        || depth >= 48
        || *budget >= MAX_PANELS
        || (b - a).abs() < 1e-15 * (a.abs() + b.abs() + 1.0)
    {
        *out_err += err;
        return val;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol / 2.0, depth + 1, out_err, budget)
        + adapt(f, m, b, tol / 2.0, depth + 1, out_err, budget)
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Adaptive integration of `f` over [a, b] to absolute tolerance `abs_tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0 };
    }
    let mut err = 0.0;
    let mut budget = 0;
    let value = adapt(&mut f, a, b, abs_tol.max(1e-16), 0, &mut err, &mut budget);
    Quadrature { value, error: err }
}

/// Adaptive integration with interior breakpoints (kinks, jumps, |·| roots).
/// Breakpoints outside (a, b) are ignored; duplicates are merged.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Quadrature {
    let mut bps: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    bps.sort_by(|x, y| x.partial_cmp(y).unwrap());
    bps.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * (1.0 + y.abs()));
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    let n_seg = bps.len() + 1;
    let mut lo = a;
    for hi in bps.into_iter().chain(std::iter::once(b)) {
        let q = integrate(&mut f, lo, hi, abs_tol / n_seg as f64);
        total.value += q.value;
        total.error += q.error;
        lo = hi;
    }
    total
}

/// Bisection to a root of `f` on [lo, hi]; requires a sign change.
pub fn bisect_root<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::invalid("bisect_root requires a sign change"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo).abs() < 4.0 * f64::EPSILON * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimizer of a unimodal function on [lo, hi].
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
