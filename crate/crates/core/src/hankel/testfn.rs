//! The coefficients `a_l` and the test functions `x_z`, `y_z`.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::fock::params::{c_norm_const, SpaceParams};
use crate::mlf::{p_family, GFunction, MLOrder, MlFamily, RealPolynomial};
use crate::quad::axial::ln_fp_norm_axial;
use crate::scaled::ScaledComplex;
use crate::C64;

/// Relative residual accepted in the polynomial identity.
const IDENTITY_TOL: f64 = 1e-9;

/// `a_0, …, a_d` with `p_{1+d}(2T) = p_1(T) Σ_l a_l p_l(T)`.
///
/// `p_1(T) = mT` and every `p_k` with `k ≥ 1` vanishes at 0, so the left side
/// divided by `mT` is a degree-`d` polynomial; since `p_l` has degree exactly
/// `l`, the expansion in the `p_l` is back substitution from the top.
pub fn solve_a_coeffs(m: f64, d: usize) -> Result<Vec<f64>> {
    if !(m >= 1.0) || d == 0 {
        return Err(LabError::Domain(format!("need m ≥ 1 and d ≥ 1 (m = {m}, d = {d})")));
    }
    let p = p_family(m, d + 1);
    let lhs = p[d + 1].compose_scale(2.0);
    let scale = lhs.max_abs_coeff();
    let constant = lhs.coeff(0).abs() / scale;
    if constant > IDENTITY_TOL {
        return Err(LabError::Singular { residual: constant });
    }
    let mut rest: Vec<f64> = (0..=d).map(|k| lhs.coeff(k + 1) / m).collect();
    let mut a = vec![0.0; d + 1];
    for l in (0..=d).rev() {
        a[l] = rest[l] / p[l].leading();
        for (k, r) in rest.iter_mut().enumerate().take(l + 1) {
            *r -= a[l] * p[l].coeff(k);
        }
    }
    let mut sum = RealPolynomial::zero();
    for (l, &al) in a.iter().enumerate() {
        sum = sum.add(&p[l].scale(al));
    }
    let residual = lhs.add(&p[1].mul(&sum).scale(-1.0)).max_abs_coeff() / scale;
    if residual > IDENTITY_TOL {
        return Err(LabError::Singular { residual });
    }
    let top = 2f64.powi(1 + d as i32);
    if (a[d] - top).abs() > IDENTITY_TOL * top {
        return Err(LabError::Singular {
            residual: (a[d] - top).abs() / top,
        });
    }
    Ok(a)
}

/// `x_z(ζ) = 2^{-d/m} C_m E(α^{1/m}⟨ζ, z̄⟩) x0` with `E = E_{1/m,1/m}` and
/// `⟨ζ, z̄⟩ = Σ ζ_j z_j`.
#[derive(Debug, Clone)]
pub struct TestFunctionX {
    params: SpaceParams,
    z: Vec<C64>,
    x0: Vec<C64>,
    family: MlFamily,
    prefactor: f64,
    alpha_root: f64,
}

impl TestFunctionX {
    pub fn new(params: &SpaceParams, z: &[C64], x0: &[C64]) -> Result<Self> {
        params.validate()?;
        if z.len() != params.d {
            return Err(LabError::Domain("z must have d coordinates".into()));
        }
        let (d, m) = (params.d as f64, params.m);
        Ok(Self {
            params: *params,
            z: z.to_vec(),
            x0: x0.to_vec(),
            family: MlFamily::new(m, MLOrder::new(0)?)?,
            prefactor: 2f64.powf(-d / m) * c_norm_const(params.d, m),
            alpha_root: params.alpha.powf(1.0 / m),
        })
    }

    fn argument(&self, zeta: &[C64]) -> C64 {
        zeta.iter().zip(&self.z).map(|(a, b)| a * b).sum::<C64>() * self.alpha_root
    }

    /// The scalar factor multiplying `x0`.
    pub fn scalar(&self, zeta: &[C64]) -> Result<ScaledComplex> {
        Ok(self.family.eval(self.argument(zeta))?.value.scale(self.prefactor))
    }

    pub fn eval(&self, zeta: &[C64]) -> Result<Vec<ScaledComplex>> {
        let s = self.scalar(zeta)?;
        Ok(self.x0.iter().map(|&c| s.mul_complex(c)).collect())
    }

    pub fn x0(&self) -> &[C64] {
        &self.x0
    }

    /// `ln ‖x_z‖_{F^p_{m,α}}`.
    pub fn ln_fp_norm(&self, p: f64) -> Result<f64> {
        let zn = crate::fock::kernel::norm(&self.z);
        let x0n = crate::fock::kernel::norm(&self.x0);
        let ar = self.alpha_root;
        let fam = &self.family;
        let failed = std::sync::atomic::AtomicBool::new(false);
        let ln_g = |t: C64| match fam.eval_fast(t * ar) {
            Ok(v) => v.value.ln_abs(),
            Err(_) => {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                f64::NEG_INFINITY
            }
        };
        let ln = ln_fp_norm_axial(&self.params, p, zn, &ln_g);
        if failed.into_inner() {
            return Err(LabError::Domain("test function evaluation failed".into()));
        }
        Ok(ln + self.prefactor.ln() + x0n.ln())
    }
}

/// `y_z(ζ) = Σ_l a_l G_l(α^{1/m}⟨ζ, z⟩) y0`.
#[derive(Debug, Clone)]
pub struct TestFunctionY {
    params: SpaceParams,
    z: Vec<C64>,
    y0: Vec<C64>,
    terms: Vec<(f64, GFunction)>,
    alpha_root: f64,
}

impl TestFunctionY {
    pub fn new(params: &SpaceParams, z: &[C64], y0: &[C64]) -> Result<Self> {
        params.validate()?;
        if z.len() != params.d {
            return Err(LabError::Domain("z must have d coordinates".into()));
        }
        let a = solve_a_coeffs(params.m, params.d)?;
        let terms = a
            .into_iter()
            .enumerate()
            .map(|(l, al)| Ok((al, GFunction::new(params.m, params.d, l)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: *params,
            z: z.to_vec(),
            y0: y0.to_vec(),
            terms,
            alpha_root: params.alpha.powf(1.0 / params.m),
        })
    }

    fn argument(&self, zeta: &[C64]) -> C64 {
        crate::fock::kernel::inner(zeta, &self.z) * self.alpha_root
    }

    /// `Σ_l a_l G_l(t)`, or the single term `only`.
    fn combine(&self, t: C64, fast: bool, only: Option<usize>) -> Result<ScaledComplex> {
        let mut acc = ScaledComplex::ZERO;
        for (l, (al, g)) in self.terms.iter().enumerate() {
            if *al == 0.0 || only.is_some_and(|k| k != l) {
                continue;
            }
            let v = if fast { g.eval_fast(t)? } else { g.eval(t)? };
            acc = acc + v.scale(*al);
        }
        Ok(acc)
    }

    pub fn scalar(&self, zeta: &[C64]) -> Result<ScaledComplex> {
        self.combine(self.argument(zeta), false, None)
    }

    pub fn eval(&self, zeta: &[C64]) -> Result<Vec<ScaledComplex>> {
        let s = self.scalar(zeta)?;
        Ok(self.y0.iter().map(|&c| s.mul_complex(c)).collect())
    }

    pub fn y0(&self) -> &[C64] {
        &self.y0
    }

    /// `ln ‖y_z‖_{F^p_{m,α}}`.
    pub fn ln_fp_norm(&self, p: f64) -> Result<f64> {
        self.ln_norm_of(p, None)
    }

    /// `ln ‖a_l G_l(α^{1/m}⟨·, z⟩) y0‖_{F^p_{m,α}}`.
    pub fn ln_term_fp_norm(&self, l: usize, p: f64) -> Result<f64> {
        if l >= self.terms.len() {
            return Err(LabError::Domain(format!("term index {l} exceeds d")));
        }
        self.ln_norm_of(p, Some(l))
    }

    fn ln_norm_of(&self, p: f64, only: Option<usize>) -> Result<f64> {
        let zn = crate::fock::kernel::norm(&self.z);
        let y0n = crate::fock::kernel::norm(&self.y0);
        let ar = self.alpha_root;
        let failed = std::sync::atomic::AtomicBool::new(false);
        let ln_g = |t: C64| match self.combine(t * ar, true, only) {
            Ok(v) => v.ln_abs(),
            Err(_) => {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                f64::NEG_INFINITY
            }
        };
        let ln = ln_fp_norm_axial(&self.params, p, zn, &ln_g);
        if failed.into_inner() {
            return Err(LabError::Domain("test function evaluation failed".into()));
        }
        Ok(ln + y0n.ln())
    }
}

/// Data of a test-function pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunctionPair {
    pub z: Vec<C64>,
    pub x0: Vec<C64>,
    pub y0: Vec<C64>,
    pub a_coeffs: Vec<f64>,
}

impl TestFunctionPair {
    pub fn new(params: &SpaceParams, z: &[C64], x0: &[C64], y0: &[C64]) -> Result<Self> {
        Ok(Self {
            z: z.to_vec(),
            x0: x0.to_vec(),
            y0: y0.to_vec(),
            a_coeffs: solve_a_coeffs(params.m, params.d)?,
        })
    }

    pub fn x(&self, params: &SpaceParams) -> Result<TestFunctionX> {
        TestFunctionX::new(params, &self.z, &self.x0)
    }

    pub fn y(&self, params: &SpaceParams) -> Result<TestFunctionY> {
        TestFunctionY::new(params, &self.z, &self.y0)
    }
}

pub fn test_function_x(params: &SpaceParams, z: &[C64], x0: &[C64]) -> Result<TestFunctionX> {
    TestFunctionX::new(params, z, x0)
}

pub fn test_function_y(params: &SpaceParams, z: &[C64], y0: &[C64]) -> Result<TestFunctionY> {
    TestFunctionY::new(params, z, y0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_gamma;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn a_coeffs_for_d_one() {
        for m in [1.0, 1.5, 2.0, 3.0] {
            let a = solve_a_coeffs(m, 1).unwrap();
            assert!((a[1] - 4.0).abs() < 1e-12);
            assert!((a[0] - 2.0 * (m - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn a_top_coefficient() {
        for d in 1..=3 {
            for m in [1.0, 2.0, 3.0] {
                let a = solve_a_coeffs(m, d).unwrap();
                assert!((a[d] - 2f64.powi(1 + d as i32)).abs() < 1e-9);
            }
        }
        assert!(solve_a_coeffs(0.5, 1).is_err());
    }

    #[test]
    fn x_at_m_one_is_half_exponential() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let z = [c(0.7, -0.4)];
        let x = TestFunctionX::new(&p, &z, &[c(1.0, 0.0)]).unwrap();
        let zeta = [c(-0.3, 1.1)];
        let v = x.scalar(&zeta).unwrap().to_complex().unwrap();
        assert!((v - 0.5 * (zeta[0] * z[0]).exp()).norm() < 1e-14);
    }

    #[test]
    fn x_at_origin() {
        let p = SpaceParams::new(2, 1.5, 0.6).unwrap();
        let x = TestFunctionX::new(&p, &[c(1.0, 1.0), c(0.0, 2.0)], &[c(2.0, 0.0)]).unwrap();
        let v = x.scalar(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap().to_complex().unwrap();
        let expected = 2f64.powf(-2.0 / 1.5) * c_norm_const(2, 1.5) * (-ln_gamma(1.0 / 1.5)).exp();
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn x_norm_closed_form_at_m_one() {
        // ‖x_z‖_2 = ½ e^{|z|²/2} for m = d = α = 1.
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        for r in [3.0, 4.5, 6.0] {
            let x = TestFunctionX::new(&p, &[c(0.0, r)], &[c(1.0, 0.0)]).unwrap();
            let ln = x.ln_fp_norm(2.0).unwrap();
            assert!((ln - (0.5f64.ln() + 0.5 * r * r)).abs() < 1e-10, "{r}: {ln}");
        }
    }

    #[test]
    fn y_combines_g_functions() {
        // d = 1: y_z = a_0 E^{(-1)}(t) + a_1 t E(t), and a_0 = 0 at m = 1.
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let z = [c(0.5, 0.5)];
        let y = TestFunctionY::new(&p, &z, &[c(1.0, 0.0)]).unwrap();
        let zeta = [c(1.0, -0.2)];
        let t = zeta[0] * z[0].conj();
        let v = y.scalar(&zeta).unwrap().to_complex().unwrap();
        assert!((v - 4.0 * t * t.exp()).norm() < 1e-13, "{v}");
    }
}
