//! Certified evaluation of the special functions attached to the
//! scale-invariant Poisson process: Dickman's ρ, Buchstab's ω, the density
//! g_θ of the total mass T below 1, the law of the sum above a cutoff, the
//! Laplace transform of T, the Hildebrand expansion, and the joint densities
//! of Poisson–Dirichlet coordinates.

pub mod panel;

mod delay;
mod export;
mod hildebrand;
mod joint;
mod laplace;
mod truncated;

pub use export::{FunctionTable, TableKind};
pub use hildebrand::{hildebrand_approx, hildebrand_remainder_scale};
pub use joint::{conditional_joint_density, pd_joint_density};
pub use laplace::{cumulant, laplace_exponent, laplace_t};
pub use truncated::TruncatedSumLaw;

use crate::error::{Error, Result};
use crate::model::Theta;
use crate::EULER_GAMMA;
use panel::PanelTable;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest argument of the default ρ, ω and g tables. Beyond this the
/// functions underflow well past every tolerance used here, and evaluation
/// is refused rather than extrapolated.
pub const U_MAX: usize = 50;

/// Cells per unit interval before the certification halving.
const CELLS: usize = 256;

/// Head coefficient of g_θ: the value g(1) = e^{−γθ}/Γ(θ).
pub fn g_norm_constant(theta: Theta) -> f64 {
    let th = theta.get();
    (-EULER_GAMMA * th).exp() / statrs::function::gamma::gamma(th)
}

/// The default Dickman table on [0, 50].
pub fn rho_table() -> &'static PanelTable {
    static RHO: OnceLock<PanelTable> = OnceLock::new();
    RHO.get_or_init(|| delay::build_delay_table(1.0, 1.0, U_MAX, CELLS))
}

/// A Dickman table extended to a caller-chosen range (asymptotics checks
/// need u past the default 50; ρ(100) ≈ 1e−230 still sits inside f64 range).
pub fn extended_rho_table(u_max: usize) -> PanelTable {
    delay::build_delay_table(1.0, 1.0, u_max, CELLS)
}

/// The default Buchstab table on [1, 50].
pub fn omega_table() -> &'static PanelTable {
    static OMEGA: OnceLock<PanelTable> = OnceLock::new();
    OMEGA.get_or_init(|| delay::build_buchstab_table(U_MAX, CELLS))
}

/// The density table of T for this θ (built once per θ and shared).
pub fn g_table(theta: Theta) -> Arc<PanelTable> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<PanelTable>>>> = OnceLock::new();
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let key = theta.get().to_bits();
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let table = Arc::new(delay::build_delay_table(
        theta.get(),
        g_norm_constant(theta),
        U_MAX,
        CELLS,
    ));
    cache.lock().unwrap().entry(key).or_insert(table).clone()
}

/// Dickman's function: ρ = 1 on [0,1], ρ′(u) = −ρ(u−1)/u; 0 for u < 0.
pub fn dickman_rho(u: f64) -> Result<f64> {
    if u.is_nan() {
        return Err(Error::invalid("rho of NaN"));
    }
    if u < 0.0 {
        return Ok(0.0);
    }
    rho_table()
        .eval_checked(u)
        .ok_or(Error::OutOfRange { value: u, lo: 0.0, hi: U_MAX as f64 })
}

/// Buchstab's function: uω(u) = 1 on [1,2], (uω(u))′ = ω(u−1) for u > 2.
pub fn buchstab_omega(u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(Error::OutOfRange { value: u, lo: 1.0, hi: U_MAX as f64 });
    }
    omega_table()
        .eval_checked(u)
        .ok_or(Error::OutOfRange { value: u, lo: 1.0, hi: U_MAX as f64 })
}

/// Density of T = Σ Xᵢ over the points in (0,1): c·t^{θ−1} on (0,1] with
/// c = e^{−γθ}/Γ(θ), extended by t·g(t) = θ∫_{t−1}^t g; 0 for t < 0.
pub fn density_g(theta: Theta, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::invalid("density_g of NaN"));
    }
    if t < 0.0 {
        return Ok(0.0);
    }
    g_table(theta)
        .eval_checked(t)
        .ok_or(Error::OutOfRange { value: t, lo: 0.0, hi: U_MAX as f64 })
}

/// g, with everything past the table treated as the underflowed 0.
pub(crate) fn density_g_or_zero(theta: Theta, t: f64) -> f64 {
    g_table(theta).eval_or_zero(t)
}

/// Certified uniform error bound of the g table for this θ.
pub fn g_error_bound(theta: Theta) -> f64 {
    g_table(theta).error_bound
}

/// Sample a panel table onto a uniform export grid.
pub fn tabulate(kind: TableKind, max: f64, step: f64) -> Result<FunctionTable> {
    if !(step > 0.0 && max > 0.0) {
        return Err(Error::invalid("tabulate requires positive max and step"));
    }
    let (table, start): (Arc<PanelTable>, f64) = match kind {
        TableKind::Rho => (Arc::new(rho_table().clone()), 0.0),
        TableKind::Omega => (Arc::new(omega_table().clone()), 1.0),
        TableKind::GTheta { theta } => (g_table(Theta::new(theta)?), step),
        TableKind::JBeta { theta, beta } => {
            let law = TruncatedSumLaw::build(Theta::new(theta)?, beta, max.max(2.0))?;
            let mut values = Vec::new();
            let mut u = beta;
            while u <= max + 1e-12 {
                values.push(law.density(u));
                u += step;
            }
            return FunctionTable::new(kind, beta, step, values, law.error_bound());
        }
    };
    if max > table.domain_hi {
        return Err(Error::OutOfRange { value: max, lo: start, hi: table.domain_hi });
    }
    let n = ((max - start) / step).round() as usize;
    let values: Vec<f64> = (0..=n).map(|i| table.eval_or_zero(start + i as f64 * step)).collect();
    FunctionTable::new(kind, start, step, values, table.error_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn rho_basics() {
        assert_eq!(dickman_rho(0.5).unwrap(), 1.0);
        assert_eq!(dickman_rho(-3.0).unwrap(), 0.0);
        let r2 = dickman_rho(2.0).unwrap();
        assert!((r2 - (1.0 - std::f64::consts::LN_2)).abs() < 1e-10, "rho(2) = {r2}");
        assert!(dickman_rho(51.0).is_err());
    }

    #[test]
    fn rho_integrates_to_e_gamma() {
        let total = rho_table().total_integral();
        assert!((total - EULER_GAMMA.exp()).abs() < 1e-6, "area {total}");
    }

    #[test]
    fn rho_against_independent_values() {
        // ρ(3) by two-panel closed form: 1 − log 3 + ∫_2^3 log(t−1)/t dt,
        // evaluated here with the generic quadrature as an independent route
        let tail = quad::integrate(|t| (t - 1.0f64).ln() / t, 2.0, 3.0, 1e-13).value;
        let expect = 1.0 - 3.0f64.ln() + tail;
        assert!((dickman_rho(3.0).unwrap() - expect).abs() < 1e-11);
    }

    #[test]
    fn omega_basics() {
        assert!((buchstab_omega(1.5).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((buchstab_omega(2.0).unwrap() - 0.5).abs() < 1e-13);
        assert!(buchstab_omega(0.9).is_err());
        // large-u limit e^{−γ}, checked at two points for mutual agreement
        let w20 = buchstab_omega(20.0).unwrap();
        let w30 = buchstab_omega(30.0).unwrap();
        let egm = (-EULER_GAMMA).exp();
        assert!((w20 - egm).abs() < 1e-9, "omega(20) = {w20}");
        assert!((w20 - w30).abs() < 1e-9);
    }

    #[test]
    fn g_theta_one_is_scaled_rho() {
        let egm = (-EULER_GAMMA).exp();
        let bound = g_error_bound(th(1.0)) + rho_table().error_bound;
        for i in 0..=80 {
            let t = 0.05 + i as f64 * 0.06;
            let g = density_g(th(1.0), t).unwrap();
            let r = dickman_rho(t).unwrap();
            assert!((g - egm * r).abs() <= bound + 1e-14, "t={t}");
        }
    }

    #[test]
    fn g_value_at_one_and_special_point() {
        // θ=1 on (0,1]: g = e^{−γ}
        let egm = (-EULER_GAMMA).exp();
        assert!((density_g(th(1.0), 0.7).unwrap() - egm).abs() < 1e-13);
        for &theta in &[0.5, 1.0, 2.0, 3.3] {
            let g1 = density_g(th(theta), 1.0).unwrap();
            assert!((g1 - g_norm_constant(th(theta))).abs() < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn g_normalization_and_mean() {
        for &theta in &[0.5, 1.0, 2.0] {
            let table = g_table(th(theta));
            let mass = table.total_integral();
            assert!((mass - 1.0).abs() < 1e-8, "theta={theta}: mass {mass}");
            // mean: head contributes c·∫ t^θ = c/(θ+1); panels via moment quadrature
            let mut mean = g_norm_constant(th(theta)) / (theta + 1.0);
            for p in &table.panels {
                mean += quad::integrate(|t| t * p.eval(t), p.a, p.b, 1e-10).value;
            }
            assert!((mean - theta).abs() < 1e-6, "theta={theta}: mean {mean}");
        }
    }

    // ∫_lo^hi g by adaptive quadrature on point evaluations, independent of
    // the builder's panel integrator. The (0,1) part is integrated in the
    // variable v = u^θ, which removes the u^{θ−1} endpoint singularity.
    fn independent_g_integral(table: &panel::PanelTable, theta: f64, lo: f64, hi: f64) -> f64 {
        let mut acc = 0.0;
        let e1 = hi.min(1.0);
        if e1 > lo {
            let (a, b) = (lo.powf(theta), e1.powf(theta));
            acc += quad::integrate(
                |v: f64| {
                    let u = v.powf(1.0 / theta);
                    table.eval_or_zero(u) * v.powf(1.0 / theta - 1.0) / theta
                },
                a,
                b,
                1e-14,
            )
            .value;
        }
        if hi > 1.0 {
            let breaks: Vec<f64> = (2..=5).map(|k| k as f64).collect();
            acc += quad::integrate_with_breakpoints(
                |u| table.eval_or_zero(u),
                lo.max(1.0),
                hi,
                &breaks,
                1e-14,
            )
            .value;
        }
        acc
    }

    #[test]
    fn size_bias_residual_on_grid() {
        // |t g(t) − θ ∫_{t−1}^t g| small, with the integral done by the
        // generic adaptive quadrature rather than the builder's panels
        for &theta in &[0.5, 1.0, 2.0] {
            let table = g_table(th(theta));
            let bound = 5.0 * table.error_bound;
            for i in 1..=50 {
                let t = i as f64 * 0.1;
                let g = table.eval_or_zero(t);
                let lo = (t - 1.0).max(0.0);
                let integral = independent_g_integral(&table, theta, lo, t);
                let resid = (t * g - theta * integral).abs();
                assert!(resid <= bound, "theta={theta} t={t}: residual {resid}");
            }
        }
    }

    #[test]
    fn laplace_matches_density_transform() {
        // two independent routes to E e^{−sT}
        for &theta in &[1.0, 2.0] {
            let table = g_table(th(theta));
            for &s in &[0.5, 1.0, 2.0] {
                let direct = laplace_t(th(theta), s).unwrap();
                let head = quad::integrate(
                    |t: f64| (-s * t).exp() * g_norm_constant(th(theta)) * t.powf(theta - 1.0),
                    0.0,
                    1.0,
                    1e-12,
                )
                .value;
                let mut via_density = head;
                for p in &table.panels {
                    via_density +=
                        quad::integrate(|t: f64| (-s * t).exp() * p.eval(t), p.a, p.b, 1e-12).value;
                }
                assert!(
                    (direct - via_density).abs() < 1e-7,
                    "theta={theta} s={s}: {direct} vs {via_density}"
                );
            }
        }
    }

    #[test]
    fn tabulate_rho_export() {
        let t = tabulate(TableKind::Rho, 10.0, 0.01).unwrap();
        assert_eq!(t.values.len(), 1001);
        assert_eq!(t.values[0], 1.0);
        assert!(t.error_bound < 1e-10);
    }
}
