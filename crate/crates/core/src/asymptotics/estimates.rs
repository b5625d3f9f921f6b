//! Growth of the integrals, suprema and norms built from `E^{(l−1)}_{1/m,1/m}`
//! as `|z| → ∞`, measured by quadrature and regression.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::fit::{ExponentCheck, GrowthFit};
use crate::error::{domain, LabError, Result};
use crate::fock::kernel::Kernel;
use crate::fock::params::SpaceParams;
use crate::hankel::testfn::{TestFunctionX, TestFunctionY};
use crate::mlf::{MLOrder, MlFamily};
use crate::quad::axial::{ln_axial_integral_tol, ln_fp_norm_axial, AxialRegion, AXIAL_TOL};
use crate::C64;

/// Tolerance on fitted exponents.
pub const EXPONENT_TOL: f64 = 0.25;
/// Slack for one-sided exponent bounds.
pub const BOUND_SLACK: f64 = 0.2;
/// Relative tolerance of complement integrals, above the evaluation noise
/// admitted there.
pub const COMPLEMENT_TOL: f64 = 1e-7;
/// Radius `R` of the sector `S_R`.
pub const SECTOR_RADIUS: f64 = 1.0;

fn unit(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.len() < 4 || radii.iter().any(|&r| !(r > 0.0)) {
        return domain("need at least 4 positive radii");
    }
    Ok(())
}

/// Runs `f` per radius in parallel, keeping the input order.
fn per_radius(radii: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    radii.par_iter().map(|&r| f(r)).collect()
}

/// `ln ∫_{region} |⟨z, ξ⟩|^c |E^{(l−1)}(α^{1/m}⟨z, ξ⟩)|^p e^{−β|ξ|^{2m}} dv(ξ)` at `z = r e_1`.
///
/// `⟨z, ξ⟩ = r ξ̄_1`, and the sector condition on `r ξ̄_1` is the same
/// condition on `ξ_1` with radius `R/r`.
fn ln_lemma4_integral(
    params: &SpaceParams,
    fam: &MlFamily,
    c: f64,
    p: f64,
    beta: f64,
    r: f64,
    sector: bool,
) -> Result<f64> {
    let m = params.m;
    let ar = params.alpha.powf(1.0 / m);
    let half_angle = PI / (2.0 * m);
    let min_radius = SECTOR_RADIUS / r;
    let region = if sector {
        AxialRegion::Sector { half_angle, min_radius }
    } else {
        AxialRegion::Complement { half_angle, min_radius }
    };
    let failed = AtomicBool::new(false);
    let ln_h = |w: C64| {
        let t = w.conj() * r;
        // Inside the sector the fast evaluation is accurate relative to the
        // value. Outside it the series may cancel; the full policy is used
        // where its rounding exceeds 1e-9 of the value.
        let v = fam.eval_fast(t * ar).and_then(|v| {
            if sector || v.error_estimate <= 1e-9 * v.value.ln_abs().exp() {
                Ok(v)
            } else {
                fam.eval(t * ar)
            }
        });
        match v {
            Ok(v) => {
                let base = p * v.value.ln_abs();
                if c == 0.0 {
                    base
                } else {
                    base + c * t.norm().ln()
                }
            }
            Err(_) => {
                failed.store(true, Ordering::Relaxed);
                f64::NEG_INFINITY
            }
        }
    };
    let tol = if sector { AXIAL_TOL } else { COMPLEMENT_TOL };
    let v = ln_axial_integral_tol(params.d, m, beta, region, &ln_h, tol);
    if failed.into_inner() {
        return Err(LabError::Domain(
            "Mittag-Leffler evaluation failed inside the integral".into(),
        ));
    }
    Ok(v)
}

/// Sector integral `I(z)` against `|z|^{2(pl−d)(m−1)+2c} e^{(p²α²/4β)|z|^{2m}}`.
pub fn verify_lemma4(params: &SpaceParams, c: f64, l: usize, p: f64, beta: f64, radii: &[f64]) -> Result<GrowthFit> {
    params.validate()?;
    check_radii(radii)?;
    if !(p >= 1.0) || !(beta > 0.0) {
        return domain("need p ≥ 1 and β > 0");
    }
    let (d, m, alpha) = (params.d as f64, params.m, params.alpha);
    let fam = MlFamily::new(m, MLOrder::new(l as i32 - 1)?)?;
    let ln_values = per_radius(radii, |r| ln_lemma4_integral(params, &fam, c, p, beta, r, true))?;
    let target = 2.0 * (p * l as f64 - d) * (m - 1.0) + 2.0 * c;
    let rate = p * p * alpha * alpha / (4.0 * beta);
    GrowthFit::fit(radii, &ln_values, m, target, rate, ExponentCheck::Equal(EXPONENT_TOL))
}

/// Complement integral `I^e(z)` against the bound `|z|^c`.
pub fn verify_lemma4_complement(
    params: &SpaceParams,
    c: f64,
    l: usize,
    p: f64,
    beta: f64,
    radii: &[f64],
) -> Result<GrowthFit> {
    params.validate()?;
    check_radii(radii)?;
    if !(p >= 1.0) || !(beta > 0.0) || !(c > -2.0 * params.d as f64) {
        return domain("need p ≥ 1, β > 0 and c > −2d");
    }
    let fam = MlFamily::new(params.m, MLOrder::new(l as i32 - 1)?)?;
    let ln_values = per_radius(radii, |r| ln_lemma4_integral(params, &fam, c, p, beta, r, false))?;
    GrowthFit::fit(radii, &ln_values, params.m, c, 0.0, ExponentCheck::AtMost(BOUND_SLACK))
}

/// `max_{t>0} ln u(t)` for a function peaked near `t_peak`: a scan of
/// `(0, 3 t_peak]` followed by golden-section refinement.
fn ln_ray_sup(ln_u: impl Fn(f64) -> Result<f64>, t_peak: f64) -> Result<f64> {
    let hi = 3.0 * t_peak.max(1.0);
    let n = 600;
    let mut best = (f64::NEG_INFINITY, 0usize);
    for k in 1..=n {
        let v = ln_u(hi * k as f64 / n as f64)?;
        if v > best.0 {
            best = (v, k);
        }
    }
    let step = hi / n as f64;
    let (mut a, mut b) = ((best.1 as f64 - 1.0) * step, (best.1 as f64 + 1.0) * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (ln_u(x1.max(1e-300))?, ln_u(x2)?);
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = ln_u(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = ln_u(x1.max(1e-300))?;
        }
    }
    Ok(best.0.max(f1).max(f2))
}

/// `sup_ζ |⟨z, ζ⟩|^c |E^{(l−1)}(α^{1/m}⟨z, ζ⟩)| e^{−(α/2)|ζ|^{2m}}` against
/// `|z|^{2c+2l(m−1)} e^{(α/2)|z|^{2m}}`.
///
/// For fixed `|⟨z, ζ⟩|` the modulus of `E^{(l−1)}` is largest on the positive
/// axis (its coefficients are positive) and `|ζ|` is smallest when `ζ` is
/// parallel to `z`, so the sup is taken over `ζ = t z/|z|`, `t > 0`.
pub fn verify_lemma5(params: &SpaceParams, c: f64, l: usize, radii: &[f64]) -> Result<GrowthFit> {
    params.validate()?;
    check_radii(radii)?;
    if !(c >= 0.0) || l == 0 {
        return domain("need c ≥ 0 and l ≥ 1");
    }
    let (m, alpha) = (params.m, params.alpha);
    let fam = MlFamily::new(m, MLOrder::new(l as i32 - 1)?)?;
    let ar = alpha.powf(1.0 / m);
    let ln_values = per_radius(radii, |r| {
        ln_ray_sup(
            |t| {
                let x = r * t;
                let e = fam.eval(unit(ar * x))?.value.ln_abs();
                Ok(c * x.ln() + e - 0.5 * alpha * t.powf(2.0 * m))
            },
            r,
        )
    })?;
    let target = 2.0 * c + 2.0 * l as f64 * (m - 1.0);
    GrowthFit::fit(
        radii,
        &ln_values,
        m,
        target,
        0.5 * alpha,
        ExponentCheck::AtMost(BOUND_SLACK),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelNormReport {
    pub p: f64,
    pub fit: GrowthFit,
    /// `max_r |‖K_z‖²_{F²} / K(z, z) − 1|`, present for `p = 2`.
    pub reproducing_error: Option<f64>,
}

/// `‖K_z‖_{F^p}` against `|z|^{2d(1−1/p)(m−1)} e^{(α/2)|z|^{2m}}`.
pub fn verify_kernel_norms(params: &SpaceParams, p: f64, radii: &[f64]) -> Result<KernelNormReport> {
    params.validate()?;
    check_radii(radii)?;
    if !(p >= 1.0) {
        return domain("need p ≥ 1");
    }
    let kernel = Kernel::new(params)?;
    let ln_norm = |r: f64| -> Result<f64> {
        let failed = AtomicBool::new(false);
        let ln_g = |t: C64| match kernel.eval_inner_fast(t) {
            Ok(v) => v.ln_abs(),
            Err(_) => {
                failed.store(true, Ordering::Relaxed);
                f64::NEG_INFINITY
            }
        };
        let v = ln_fp_norm_axial(params, p, r, &ln_g);
        if failed.into_inner() {
            return Err(LabError::Domain("kernel evaluation failed inside the integral".into()));
        }
        Ok(v)
    };
    let ln_values = per_radius(radii, ln_norm)?;
    let reproducing_error = if p == 2.0 {
        let mut worst = 0.0f64;
        for (&r, &ln) in radii.iter().zip(&ln_values) {
            let mut z = vec![C64::new(0.0, 0.0); params.d];
            z[0] = unit(r);
            let kzz = kernel.eval(&z, &z)?.ln_abs();
            worst = worst.max(((2.0 * ln - kzz).exp() - 1.0).abs());
        }
        Some(worst)
    } else {
        None
    };
    let (d, m) = (params.d as f64, params.m);
    let target = 2.0 * d * (1.0 - 1.0 / p) * (m - 1.0);
    let fit = GrowthFit::fit(
        radii,
        &ln_values,
        m,
        target,
        0.5 * params.alpha,
        ExponentCheck::Equal(EXPONENT_TOL),
    )?;
    Ok(KernelNormReport {
        p,
        fit,
        reproducing_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSupBound {
    /// `C` fitted at the smallest radius.
    pub constant: f64,
    /// `(r, ‖K_z‖_{F^∞} / (m^d r^{2d(m−1)} e^{(α/2) r^{2m}}))`.
    pub ratios: Vec<(f64, f64)>,
    /// Every ratio stays within `(1 + slack) C`.
    pub holds: bool,
    pub slack: f64,
}

/// `‖K_z‖_{F^∞} ≤ C m^d |z|^{2d(m−1)} e^{(α/2)|z|^{2m}}` with `C` taken at the
/// smallest radius and checked, up to the relative `slack`, at the others.
pub fn verify_kernel_sup_bound(params: &SpaceParams, radii: &[f64], slack: f64) -> Result<KernelSupBound> {
    params.validate()?;
    check_radii(radii)?;
    let kernel = Kernel::new(params)?;
    let (d, m, alpha) = (params.d as f64, params.m, params.alpha);
    let ln_sups = per_radius(radii, |r| {
        ln_ray_sup(
            |t| Ok(kernel.eval_inner(unit(r * t))?.ln_abs() - 0.5 * alpha * t.powf(2.0 * m)),
            r,
        )
    })?;
    let ratios: Vec<(f64, f64)> = radii
        .iter()
        .zip(&ln_sups)
        .map(|(&r, &s)| {
            let ln_bound = d * m.ln() + 2.0 * d * (m - 1.0) * r.ln() + 0.5 * alpha * r.powf(2.0 * m);
            (r, (s - ln_bound).exp())
        })
        .collect();
    let constant = ratios[0].1;
    let holds = ratios.iter().all(|&(_, q)| q <= constant * (1.0 + slack));
    Ok(KernelSupBound {
        constant,
        ratios,
        holds,
        slack,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFnNormReport {
    pub p: f64,
    /// `‖x_z‖_{F^p}` against `|z|^{2(p−d)(m−1)/p} e^{(α/2)|z|^{2m}}`.
    pub x: GrowthFit,
    /// `‖y_z‖_{F^{p′}}` against the bound `|z|^{2(d/p)(m−1)+2} e^{(α/2)|z|^{2m}}`;
    /// absent for `p = 1`.
    pub y: Option<GrowthFit>,
    /// `‖a_d G_d y0‖_{F^{p′}} / ‖y_z‖_{F^{p′}}` at the largest radius.
    pub y_dominance: Option<f64>,
}

pub fn verify_testfn_norms(params: &SpaceParams, p: f64, radii: &[f64]) -> Result<TestFnNormReport> {
    params.validate()?;
    check_radii(radii)?;
    if !(p >= 1.0) {
        return domain("need p ≥ 1");
    }
    let (d, m, alpha) = (params.d, params.m, params.alpha);
    let point = |r: f64| {
        let mut z = vec![C64::new(0.0, 0.0); d];
        z[0] = unit(r);
        z
    };
    let mut e1 = vec![C64::new(0.0, 0.0); 1];
    e1[0] = unit(1.0);
    let x_values = per_radius(radii, |r| TestFunctionX::new(params, &point(r), &e1)?.ln_fp_norm(p))?;
    let x_target = 2.0 * (p - d as f64) * (m - 1.0) / p;
    let x = GrowthFit::fit(
        radii,
        &x_values,
        m,
        x_target,
        0.5 * alpha,
        ExponentCheck::Equal(EXPONENT_TOL),
    )?;
    let (y, y_dominance) = if p > 1.0 {
        let q = p / (p - 1.0);
        let y_values = per_radius(radii, |r| TestFunctionY::new(params, &point(r), &e1)?.ln_fp_norm(q))?;
        let y_target = 2.0 * (d as f64 / p) * (m - 1.0) + 2.0;
        let fit = GrowthFit::fit(
            radii,
            &y_values,
            m,
            y_target,
            0.5 * alpha,
            ExponentCheck::AtMost(EXPONENT_TOL),
        )?;
        let r_max = radii.iter().copied().fold(0.0, f64::max);
        let yf = TestFunctionY::new(params, &point(r_max), &e1)?;
        let dominance = (yf.ln_term_fp_norm(d, q)? - yf.ln_fp_norm(q)?).exp();
        (Some(fit), Some(dominance))
    } else {
        (None, None)
    };
    Ok(TestFnNormReport { p, x, y, y_dominance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn lemma4_gaussian_case() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        for c in [0.0, 1.0] {
            let f = verify_lemma4(&p, c, 1, 2.0, 1.0, &window(3.0, 8.0, 8)).unwrap();
            assert!(f.exponent_deviation().abs() <= 0.15, "{c}: {f:?}");
            assert!(!f.flagged);
        }
        let f = verify_lemma4(&p, 0.0, 1, 2.0, 1.0, &window(3.0, 8.0, 8)).unwrap();
        assert!(f.rate_relative_error() < 0.02, "{}", f.fitted_rate);
    }

    #[test]
    fn lemma4_complement_bounded() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let f = verify_lemma4_complement(&p, 1.0, 1, 2.0, 1.0, &window(3.0, 8.0, 6)).unwrap();
        assert!(f.passed, "{f:?}");
    }

    #[test]
    fn lemma5_exponents() {
        let p1 = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let f = verify_lemma5(&p1, 0.0, 1, &window(3.0, 8.0, 8)).unwrap();
        assert!(f.fitted_exponent.abs() < 0.15 && f.passed, "{f:?}");
        let f = verify_lemma5(&p1, 1.0, 1, &window(3.0, 8.0, 8)).unwrap();
        assert!((f.fitted_exponent - 2.0).abs() < 0.15, "{f:?}");
        let p2 = SpaceParams::new(1, 2.0, 1.0).unwrap();
        let f = verify_lemma5(&p2, 0.0, 1, &window(1.5, 3.0, 8)).unwrap();
        assert!((f.fitted_exponent - 2.0).abs() < 0.25 && f.passed, "{f:?}");
    }

    #[test]
    fn kernel_norms_at_m_one() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let r2 = verify_kernel_norms(&p, 2.0, &window(3.0, 8.0, 6)).unwrap();
        assert!(r2.reproducing_error.unwrap() < 1e-8);
        assert!(r2.fit.fitted_exponent.abs() < 0.05, "{:?}", r2.fit);
        let r1 = verify_kernel_norms(&p, 1.0, &window(3.0, 8.0, 6)).unwrap();
        assert!(r1.fit.fitted_exponent.abs() < 0.05 && r1.reproducing_error.is_none());
    }

    #[test]
    fn kernel_sup_bound_m_one() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let b = verify_kernel_sup_bound(&p, &window(3.0, 8.0, 6), 1e-6).unwrap();
        // K_z(ζ) = e^{ζ z̄}: the sup equals e^{|z|²/2} exactly.
        assert!((b.constant - 1.0).abs() < 1e-9 && b.holds);
    }

    #[test]
    fn testfn_norms_at_m_one() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let r = verify_testfn_norms(&p, 2.0, &window(3.0, 6.0, 5)).unwrap();
        assert!(r.x.fitted_exponent.abs() < 0.05 && r.x.passed, "{:?}", r.x);
        assert!((r.x.ln_constant - 0.5f64.ln()).abs() < 0.05);
        let y = r.y.unwrap();
        assert!(y.passed, "{y:?}");
        // a_0 = 0 at m = 1, so y_z is its top term.
        assert!((r.y_dominance.unwrap() - 1.0).abs() < 1e-12);
    }
}
