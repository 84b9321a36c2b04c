//! Core domain types: the intensity parameter, labelled point configurations,
//! stick-breaking spacings, ranked simplices, discrete measures, and the
//! `rank` / `relabel` operations shared by every other module.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default absolute tolerance for equality of reals in invariant checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// The intensity scalar θ > 0 of a scale-invariant Poisson process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::invalid(format!("theta must be positive and finite, got {value}")));
        }
        Ok(Theta(value))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Labelling convention for a point configuration.
///
/// `AtZero` focusses on (0,1) with points stored in decreasing order
/// (the first point is the largest below 1); `AtInfinity` stores points ≥ 1
/// in increasing order; `Window(a, b)` stores points of a bounded window in
/// increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Labelling {
    AtZero,
    AtInfinity,
    Window(f64, f64),
}

/// A finite truncated realization of a point process on (0,∞).
///
/// Ordering is fixed by the labelling: decreasing under `AtZero`, increasing
/// otherwise. `truncation` is the lower cutoff ε (mandatory and positive for
/// `AtZero`, since the untruncated process accumulates at 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    points: Vec<f64>,
    labelling: Labelling,
    truncation: f64,
    theta: Theta,
}

impl PointConfiguration {
    /// Points in (ε, 1), decreasing.
    pub fn at_zero(points: Vec<f64>, eps: f64, theta: Theta) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("AtZero cutoff must lie in (0,1), got {eps}")));
        }
        check_sorted(&points, Dir::Decreasing)?;
        if points.iter().any(|&x| x <= eps || x >= 1.0) {
            return Err(Error::invalid("AtZero points must lie in (eps, 1)"));
        }
        Ok(Self { points, labelling: Labelling::AtZero, truncation: eps, theta })
    }

    /// Points ≥ 1, increasing.
    pub fn at_infinity(points: Vec<f64>, theta: Theta) -> Result<Self> {
        check_sorted(&points, Dir::Increasing)?;
        if points.iter().any(|&x| x < 1.0) {
            return Err(Error::invalid("AtInfinity points must be >= 1"));
        }
        Ok(Self { points, labelling: Labelling::AtInfinity, truncation: 0.0, theta })
    }

    /// Points in (a, b), increasing.
    pub fn window(points: Vec<f64>, a: f64, b: f64, theta: Theta) -> Result<Self> {
        if !(0.0 < a && a < b && b.is_finite()) {
            return Err(Error::invalid(format!("window requires 0 < a < b, got ({a}, {b})")));
        }
        check_sorted(&points, Dir::Increasing)?;
        if points.iter().any(|&x| x <= a || x >= b) {
            return Err(Error::invalid("window points must lie in (a, b)"));
        }
        Ok(Self { points, labelling: Labelling::Window(a, b), truncation: a, theta })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn labelling(&self) -> Labelling {
        self.labelling
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// L_i = −log X_i, in the same order as the stored points.
    pub fn log_points(&self) -> Vec<f64> {
        self.points.iter().map(|x| -x.ln()).collect()
    }

    /// Sum of the stored points.
    pub fn total(&self) -> f64 {
        self.points.iter().sum()
    }
}

enum Dir {
    Increasing,
    Decreasing,
}

fn check_sorted(points: &[f64], dir: Dir) -> Result<()> {
    for &x in points {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::invalid(format!("points must be positive and finite, got {x}")));
        }
    }
    let ok = match dir {
        Dir::Increasing => points.windows(2).all(|w| w[0] < w[1]),
        Dir::Decreasing => points.windows(2).all(|w| w[0] > w[1]),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Structural("points must be strictly sorted (no ties)".into()))
    }
}

/// Relabel a configuration, preserving the point set bit-for-bit.
///
/// The conversion must be information-preserving on the retained window:
/// a point that the target labelling cannot host is rejected.
pub fn relabel(config: &PointConfiguration, target: Labelling) -> Result<PointConfiguration> {
    let mut pts = config.points.clone();
    match target {
        Labelling::AtZero => {
            let eps = match config.labelling {
                Labelling::AtZero => config.truncation,
                Labelling::Window(a, b) => {
                    if b > 1.0 {
                        return Err(Error::invalid(
                            "cannot relabel to AtZero: window extends past 1",
                        ));
                    }
                    a
                }
                Labelling::AtInfinity => {
                    return Err(Error::invalid("cannot relabel AtInfinity points (>= 1) to AtZero"))
                }
            };
            pts.sort_by(|x, y| y.partial_cmp(x).unwrap());
            PointConfiguration::at_zero(pts, eps, config.theta)
        }
        Labelling::AtInfinity => {
            pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            PointConfiguration::at_infinity(pts, config.theta)
        }
        Labelling::Window(a, b) => {
            pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            PointConfiguration::window(pts, a, b, config.theta)
        }
    }
}

/// GEM-style spacings Y₁..Y_n of the unit interval: all in (0,1) with
/// partial sums < 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingVector {
    entries: Vec<f64>,
    theta: Theta,
}

impl SpacingVector {
    pub fn new(entries: Vec<f64>, theta: Theta) -> Result<Self> {
        let mut partial = 0.0;
        for &y in &entries {
            if !(y > 0.0 && y < 1.0 && y.is_finite()) {
                return Err(Error::invalid(format!("spacing entries must lie in (0,1), got {y}")));
            }
            partial += y;
            // summation rounding of a long stick sequence can graze 1.0
            if partial >= 1.0 + DEFAULT_TOL {
                return Err(Error::Structural("partial sums of spacings must stay below 1".into()));
            }
        }
        Ok(Self { entries, theta })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// 1 − ΣYᵢ, the mass not yet broken off (clamped at 0 against rounding).
    pub fn remainder(&self) -> f64 {
        (1.0 - self.entries.iter().sum::<f64>()).max(0.0)
    }
}

/// Leading coordinates of a ranked (nonincreasing) partition of 1, plus the
/// unranked tail mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSimplex {
    entries: Vec<f64>,
    tail_mass: f64,
}

impl RankedSimplex {
    pub fn new(entries: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Structural("ranked entries must be nonincreasing".into()));
        }
        if entries.iter().any(|&v| v <= 0.0 || !v.is_finite()) || tail_mass < -DEFAULT_TOL {
            return Err(Error::invalid("entries must be positive, tail mass nonnegative"));
        }
        let total = entries.iter().sum::<f64>() + tail_mass;
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Structural(format!(
                "entries plus tail mass must equal 1 within {DEFAULT_TOL:e}, got {total}"
            )));
        }
        Ok(Self { entries, tail_mass: tail_mass.max(0.0) })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }
}

/// A finitely supported probability measure on the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    support: Vec<f64>,
    masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if support.len() != masses.len() {
            return Err(Error::invalid("support and masses must have equal length"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Structural("support must be strictly increasing".into()));
        }
        if masses.iter().any(|&m| m < 0.0 || !m.is_finite()) {
            return Err(Error::invalid("masses must be nonnegative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Structural(format!("masses must sum to 1 within {DEFAULT_TOL:e}, got {total}")));
        }
        Ok(Self { support, masses })
    }

    pub fn point_mass(at: f64) -> Self {
        Self { support: vec![at], masses: vec![1.0] }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// CDF evaluated at x (right-continuous).
    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (s, m) in self.support.iter().zip(&self.masses) {
            if *s <= x {
                acc += m;
            } else {
                break;
            }
        }
        acc
    }
}

/// How a total-variation value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TVMethod {
    ExplicitFormula,
    GeneralDensities,
    ExactEnumeration,
    EmpiricalBinned,
}

/// A total-variation distance together with the certified error of the
/// producing computation: true TV lies in [value − error_bound, value + error_bound].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TVReport {
    pub value: f64,
    pub method: TVMethod,
    pub error_bound: f64,
}

impl TVReport {
    pub fn new(value: f64, method: TVMethod, error_bound: f64) -> Self {
        Self { value, method, error_bound }
    }
}

/// Sort values into nonincreasing order (stable for ties).
///
/// Rejects nonpositive or non-finite entries.
pub fn rank(values: &[f64]) -> Result<Vec<f64>> {
    for &v in values {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid(format!("rank requires positive finite values, got {v}")));
        }
    }
    let mut out = values.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn rank_sorts_descending() {
        assert_eq!(rank(&[0.2, 0.5, 0.3]).unwrap(), vec![0.5, 0.3, 0.2]);
        assert_eq!(rank(&[]).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn rank_rejects_bad_input() {
        assert!(rank(&[1.0, -0.5]).is_err());
        assert!(rank(&[f64::NAN]).is_err());
        assert!(rank(&[0.0]).is_err());
    }

    #[test]
    fn relabel_at_zero_to_window_is_identity_on_points() {
        let cfg = PointConfiguration::at_zero(vec![0.5, 0.25], 0.1, th(1.0)).unwrap();
        let win = relabel(&cfg, Labelling::Window(0.1, 1.0)).unwrap();
        assert_eq!(win.points(), &[0.25, 0.5]);
        let back = relabel(&win, Labelling::AtZero).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn relabel_window_above_one_round_trip() {
        let cfg =
            PointConfiguration::window(vec![1.3, 2.0, 2.6], 1.0, std::f64::consts::E, th(1.0))
                .unwrap();
        let inf = relabel(&cfg, Labelling::AtInfinity).unwrap();
        let back = relabel(&inf, Labelling::Window(1.0, std::f64::consts::E)).unwrap();
        assert_eq!(back.points(), cfg.points());
    }

    #[test]
    fn relabel_rejects_points_outside_target() {
        let cfg = PointConfiguration::window(vec![1.5], 1.0, 2.0, th(1.0)).unwrap();
        assert!(relabel(&cfg, Labelling::AtZero).is_err());
        let cfg = PointConfiguration::at_zero(vec![0.5], 0.1, th(1.0)).unwrap();
        assert!(relabel(&cfg, Labelling::AtInfinity).is_err());
    }

    #[test]
    fn log_points_round_trip() {
        let cfg = PointConfiguration::at_zero(vec![0.9, 0.5, 0.2], 0.1, th(2.0)).unwrap();
        for (l, x) in cfg.log_points().iter().zip(cfg.points()) {
            assert!(((-l).exp() - x).abs() <= 1e-14);
        }
    }

    #[test]
    fn constructors_reject_unsorted() {
        assert!(PointConfiguration::at_zero(vec![0.2, 0.5], 0.1, th(1.0)).is_err());
        assert!(PointConfiguration::window(vec![2.0, 1.5], 1.0, 3.0, th(1.0)).is_err());
        assert!(PointConfiguration::at_zero(vec![0.5, 0.5], 0.1, th(1.0)).is_err());
    }

    #[test]
    fn ranked_simplex_checks_mass() {
        assert!(RankedSimplex::new(vec![0.6, 0.3], 0.1).is_ok());
        assert!(RankedSimplex::new(vec![0.3, 0.6], 0.1).is_err());
        assert!(RankedSimplex::new(vec![0.6, 0.3], 0.2).is_err());
    }

    #[test]
    fn discrete_measure_invariants() {
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![0.5, 0.5]).is_ok());
        assert!(DiscreteMeasure::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![0.5, 0.4]).is_err());
    }

    proptest! {
        // rank agrees with a naive selection-sort oracle and is idempotent
        // and permutation-invariant.
        #[test]
        fn rank_matches_naive_sort(mut xs in proptest::collection::vec(1e-6f64..1e6, 0..40)) {
            let ranked = rank(&xs).unwrap();
            // naive selection sort, descending
            let mut oracle = Vec::new();
            let mut pool = xs.clone();
            while !pool.is_empty() {
                let (mut best, mut bi) = (pool[0], 0);
                for (i, &v) in pool.iter().enumerate() {
                    if v > best { best = v; bi = i; }
                }
                oracle.push(best);
                pool.remove(bi);
            }
            prop_assert_eq!(ranked.clone(), oracle);
            prop_assert_eq!(rank(&ranked).unwrap(), ranked.clone());
            xs.reverse();
            prop_assert_eq!(rank(&xs).unwrap(), ranked);
        }
    }
}
