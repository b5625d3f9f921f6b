//! Integrals against `dμ_{m,α}`, the projection `P_β` and F^p norms.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::fock::kernel::{inner, norm, Kernel};
use crate::fock::params::{ln_density_const, ln_monomial_norm_sq, MultiIndex, SpaceParams};
use crate::fock::symbol::TaylorSymbol;
use crate::linalg::op_norm;
use crate::quad::radial::{radial_rule, QuadratureRule, DEFAULT_RADIAL_NODES};
use crate::quad::sphere::SphereCubature;
use crate::special::ln_gamma;
use crate::{CMatrix, C64};

/// Largest phase count per coordinate; cost grows like `order^d`.
fn max_sphere_order(d: usize) -> usize {
    match d {
        1 => 1024,
        2 => 96,
        _ => 24,
    }
}

/// `∫ f dμ` by the rule, propagating the first error of `f`.
pub fn try_integrate_mu<F>(f: F, rule: &QuadratureRule) -> Result<CMatrix>
where
    F: Fn(&[C64]) -> Result<CMatrix> + Sync,
{
    let d = rule.params.d;
    let cub = SphereCubature::new(d, rule.sphere_order);
    // One sphere average per radial node; collected in node order for a
    // reproducible reduction.
    let shells: Vec<Result<Option<CMatrix>>> = rule
        .radial_nodes
        .par_iter()
        .map(|&r| {
            let mut acc: Option<CMatrix> = None;
            let mut point = vec![C64::new(0.0, 0.0); d];
            for (eta, w) in cub.iter() {
                for (p, e) in point.iter_mut().zip(eta) {
                    *p = e * r;
                }
                let v = f(&point)? * C64::new(w, 0.0);
                match acc.as_mut() {
                    Some(a) => *a += v,
                    None => acc = Some(v),
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total: Option<CMatrix> = None;
    for (shell, &w) in shells.into_iter().zip(&rule.radial_weights) {
        if let Some(s) = shell? {
            let s = s * C64::new(w, 0.0);
            match total.as_mut() {
                Some(t) => *t += s,
                None => total = Some(s),
            }
        }
    }
    total.ok_or_else(|| crate::LabError::Domain("empty quadrature rule".into()))
}

/// `∫ f dμ_{m,α}` for a matrix-valued integrand.
pub fn integrate_mu<F>(f: F, rule: &QuadratureRule) -> CMatrix
where
    F: Fn(&[C64]) -> CMatrix + Sync,
{
    try_integrate_mu(|z| Ok(f(z)), rule).expect("infallible integrand")
}

/// `∫ f dμ_{m,α}` for a scalar integrand.
pub fn integrate_mu_scalar<F>(f: F, rule: &QuadratureRule) -> C64
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    integrate_mu(|z| CMatrix::from_element(1, 1, f(z)), rule)[(0, 0)]
}

/// Phase count per coordinate making the aliasing error of a projection
/// negligible.
///
/// Sampling `ζ^ν K(z, ζ)` with `N` phases aliases the kernel term `ζ̄^μ` with
/// `|μ| = |ν| + N`; its size is bounded by
/// `|z|^{|μ|} E[|ζ|^{|ν|+|μ|}] / s_{β,μ}` with the moment taken under the
/// radial weight `e^{-a|ζ|^{2m}}` of the rule. The smallest `N` (a multiple
/// of 4) pushing this below `1e-17` is returned, clamped to a cost cap.
pub fn projection_sphere_order(params: &SpaceParams, weight_alpha: f64, z_norm: f64, degree: u32) -> usize {
    let (d, m) = (params.d, params.m);
    let cap = max_sphere_order(d);
    let floor = (degree as usize + 8).next_multiple_of(4).max(16);
    if z_norm == 0.0 {
        return floor.min(cap);
    }
    let ln_moment = |q: f64| ln_gamma((d as f64 + q) / m) - ln_gamma(d as f64 / m) - q / m * weight_alpha.ln();
    let mut n = floor;
    while n < cap {
        let k = degree as usize + n;
        let mu = MultiIndex::axis(d, 0, k as u32);
        let ln_t =
            k as f64 * z_norm.ln() + ln_moment((degree as usize + k) as f64 / 2.0) - ln_monomial_norm_sq(params, &mu);
        if ln_t < -17.0 * std::f64::consts::LN_10 {
            break;
        }
        n += 4;
    }
    n.min(cap)
}

/// Quadrature of `P_β c(z) = ∫ c(ζ) K_{m,β}(z, ζ) dμ_{m,β}(ζ)`.
///
/// `rule` must be built for `(d, m, β)`. The kernel is formed in scaled
/// arithmetic and multiplied by the node weight before leaving it, so large
/// kernel values at outer nodes do not overflow.
pub fn project<F>(c: F, params: &SpaceParams, beta: f64, z: &[C64], rule: &QuadratureRule) -> Result<CMatrix>
where
    F: Fn(&[C64]) -> CMatrix + Sync,
{
    let kparams = params.with_alpha(beta)?;
    check_rule(rule, &kparams)?;
    project_weighted(&c, &Kernel::new(&kparams)?, z, rule, 1.0)
}

fn check_rule(rule: &QuadratureRule, p: &SpaceParams) -> Result<()> {
    let q = &rule.params;
    if q.d != p.d || q.m != p.m || (q.alpha - p.alpha).abs() > 1e-12 * p.alpha {
        return domain(format!(
            "rule built for (d={}, m={}, α={}) but (d={}, m={}, α={}) is required",
            q.d, q.m, q.alpha, p.d, p.m, p.alpha
        ));
    }
    Ok(())
}

/// `factor · ∫ c(ζ) K(z, ζ) dμ_rule(ζ)`.
fn project_weighted(
    c: &(dyn Fn(&[C64]) -> CMatrix + Sync),
    kernel: &Kernel,
    z: &[C64],
    rule: &QuadratureRule,
    factor: f64,
) -> Result<CMatrix> {
    let d = rule.params.d;
    if z.len() != d {
        return domain(format!("point has {} coordinates, expected {d}", z.len()));
    }
    let cub = SphereCubature::new(d, rule.sphere_order);
    let shells: Vec<Result<CMatrix>> = rule
        .radial_nodes
        .par_iter()
        .zip(&rule.radial_weights)
        .map(|(&r, &wr)| {
            let mut acc: Option<CMatrix> = None;
            let mut point = vec![C64::new(0.0, 0.0); d];
            for (eta, ws) in cub.iter() {
                for (p, e) in point.iter_mut().zip(eta) {
                    *p = e * r;
                }
                let k = kernel
                    .eval_inner_fast(inner(z, &point))?
                    .scale(wr * ws * factor)
                    .to_complex_lossy();
                let v = c(&point) * k;
                match acc.as_mut() {
                    Some(a) => *a += v,
                    None => acc = Some(v),
                }
            }
            acc.ok_or_else(|| crate::LabError::Domain("empty sphere cubature".into()))
        })
        .collect();
    let mut shells = shells.into_iter();
    let mut total = shells.next().expect("rule has nodes")?;
    for s in shells {
        total += s?;
    }
    Ok(total)
}

/// Rule for `(d, m, α)` with a sphere order fit for projecting a degree
/// `degree` function at points of norm up to `z_max`.
fn projection_rule(params: &SpaceParams, weight_alpha: f64, z_max: f64, degree: u32) -> Result<QuadratureRule> {
    let rp = params.with_alpha(weight_alpha)?;
    let order = projection_sphere_order(params, weight_alpha, z_max, degree);
    Ok(radial_rule(&rp, DEFAULT_RADIAL_NODES)?.with_sphere_order(order))
}

fn max_norm(z_list: &[Vec<C64>]) -> f64 {
    z_list.iter().map(|z| norm(z)).fold(0.0, f64::max)
}

/// Largest `‖P_α f(z) − f(z)‖ / max(1, ‖f(z)‖)` over `z_list`.
pub fn verify_reproducing(f: &TaylorSymbol, params: &SpaceParams, z_list: &[Vec<C64>]) -> Result<f64> {
    let rule = projection_rule(params, params.alpha, max_norm(z_list), f.degree())?;
    let mut worst = 0.0f64;
    for z in z_list {
        let pz = project(|zeta| f.eval(zeta), params, params.alpha, z, &rule)?;
        let fz = f.eval(z);
        worst = worst.max(op_norm(&(pz - &fz)) / op_norm(&fz).max(1.0));
    }
    Ok(worst)
}

/// Checks `b = P_{2β} c` with `c(ζ) = 2^{d/m} b(2^{1/m} ζ) e^{-2β|ζ|^{2m}}`.
///
/// The two Gaussian-type factors are merged into a rule for `dμ_{m,4β}`, so
/// the integral computed is
/// `(c_{m,2β}/c_{m,4β}) ∫ 2^{d/m} b(2^{1/m}ζ) K_{m,2β}(z, ζ) dμ_{m,4β}(ζ)`.
/// Returns the largest error relative to `max(1, ‖b(z)‖)` over `z_list`.
pub fn growth_space_projection_check(
    b: &TaylorSymbol,
    params: &SpaceParams,
    beta: f64,
    z_list: &[Vec<C64>],
) -> Result<f64> {
    let (d, m) = (params.d, params.m);
    let two_beta = params.with_alpha(2.0 * beta)?;
    let kernel = Kernel::new(&two_beta)?;
    let rule = projection_rule(&two_beta, 4.0 * beta, max_norm(z_list), 0)?;
    let factor =
        (ln_density_const(d, m, 2.0 * beta) - ln_density_const(d, m, 4.0 * beta)).exp() * 2f64.powf(d as f64 / m);
    let stretch = 2f64.powf(1.0 / m);
    let c = |zeta: &[C64]| {
        let s: Vec<C64> = zeta.iter().map(|x| x * stretch).collect();
        b.eval(&s)
    };
    let mut worst = 0.0f64;
    for z in z_list {
        let pz = project_weighted(&c, &kernel, z, &rule, factor)?;
        let bz = b.eval(z);
        worst = worst.max(op_norm(&(pz - &bz)) / op_norm(&bz).max(1.0));
    }
    Ok(worst)
}

/// `‖f‖_{F^p_{m,α}}` for a function given by its pointwise norm.
///
/// Uses `‖f‖_p^p = (c_{m,α}/c_{m,pα/2}) ∫ ‖f‖^p dμ_{m,pα/2}`, so the rule
/// integrates the full weight `e^{-pα/2 |ζ|^{2m}}` exactly and only `‖f‖^p`
/// is sampled.
pub fn fp_norm_with<F>(params: &SpaceParams, p: f64, radial_nodes: usize, sphere_order: usize, f: F) -> Result<f64>
where
    F: Fn(&[C64]) -> Result<f64> + Sync,
{
    if !(p >= 1.0) {
        return domain(format!("p must be at least 1, got {p}"));
    }
    let (d, m, a) = (params.d, params.m, params.alpha);
    let pa = 0.5 * p * a;
    let rule = radial_rule(&params.with_alpha(pa)?, radial_nodes)?.with_sphere_order(sphere_order);
    let integral = try_integrate_mu(|z| Ok(CMatrix::from_element(1, 1, C64::new(f(z)?.powf(p), 0.0))), &rule)?;
    let ln = ln_density_const(d, m, a) - ln_density_const(d, m, pa) + integral[(0, 0)].re.ln();
    Ok((ln / p).exp())
}

/// `‖f‖_{F^p_{m,α}}` of a Taylor symbol, with operator norms pointwise.
///
/// For `p = 2` orthogonality of monomials gives the exact value
/// `Σ_ν ‖f̂_ν‖_F² s_{α,ν}` only for Frobenius norms, so the operator-norm
/// quantity is always computed by quadrature.
pub fn fp_norm(f: &TaylorSymbol, params: &SpaceParams, p: f64) -> Result<f64> {
    let deg = f.degree() as usize;
    let order = ((p.ceil() as usize) * deg + 8).min(max_sphere_order(params.d)).max(8);
    let nodes = DEFAULT_RADIAL_NODES + 2 * deg;
    fp_norm_with(params, p, nodes, order, |z| Ok(op_norm(&f.eval(z))))
}
