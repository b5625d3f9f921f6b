//! Reproducing kernel `K_{m,α}(ξ, ζ) = C_m E^{(d-1)}_{1/m,1/m}(α^{1/m}⟨ξ, ζ⟩)`.

use crate::error::Result;
use crate::fock::params::{c_norm_const, SpaceParams};
use crate::mlf::{MLOrder, MlFamily};
use crate::scaled::ScaledComplex;
use crate::C64;

/// `⟨z, w⟩ = Σ z_j w̄_j`.
pub fn inner(z: &[C64], w: &[C64]) -> C64 {
    assert_eq!(z.len(), w.len(), "vectors must have equal length");
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Kernel evaluator with its Mittag-Leffler family prepared once.
#[derive(Debug, Clone)]
pub struct Kernel {
    params: SpaceParams,
    family: MlFamily,
    c_m: f64,
    alpha_root: f64,
}

impl Kernel {
    pub fn new(params: &SpaceParams) -> Result<Self> {
        params.validate()?;
        let order = MLOrder::new(params.d as i32 - 1)?;
        Ok(Self {
            params: *params,
            family: MlFamily::new(params.m, order)?,
            c_m: c_norm_const(params.d, params.m),
            alpha_root: params.alpha.powf(1.0 / params.m),
        })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    /// Kernel as a function of `t = ⟨ξ, ζ⟩`.
    pub fn eval_inner(&self, t: C64) -> Result<ScaledComplex> {
        Ok(self.family.eval(t * self.alpha_root)?.value.scale(self.c_m))
    }

    /// [`eval_inner`](Self::eval_inner) with error relative to `|K(ξ, ζ)|` at
    /// its largest over the phase of `t`; see [`MlFamily::eval_fast`].
    pub fn eval_inner_fast(&self, t: C64) -> Result<ScaledComplex> {
        Ok(self.family.eval_fast(t * self.alpha_root)?.value.scale(self.c_m))
    }

    /// `K(ξ, ζ)`.
    pub fn eval(&self, xi: &[C64], zeta: &[C64]) -> Result<ScaledComplex> {
        self.eval_inner(inner(xi, zeta))
    }
}

/// `K_{m,α}(z, w)` in scaled form.
pub fn kernel_eval(params: &SpaceParams, z: &[C64], w: &[C64]) -> Result<ScaledComplex> {
    Kernel::new(params)?.eval(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kernel_at_origin_is_one() {
        for &(d, m, a) in &[(1, 1.0, 1.0), (1, 2.0, 0.5), (2, 1.5, 2.0), (3, 3.0, 1.0)] {
            let p = SpaceParams::new(d, m, a).unwrap();
            let z: Vec<C64> = (0..d).map(|j| c(0.3 * j as f64 + 0.1, -0.2)).collect();
            let w = vec![C64::new(0.0, 0.0); d];
            let k = kernel_eval(&p, &z, &w).unwrap().to_complex().unwrap();
            assert!((k - 1.0).norm() < 1e-13, "{d} {m} {a}: {k}");
        }
    }

    #[test]
    fn segal_bargmann_closed_forms() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let (z, w) = (c(0.7, -1.2), c(-0.4, 2.0));
        let k = kernel_eval(&p, &[z], &[w]).unwrap();
        assert!(k.relative_distance(&ScaledComplex::exp(z * w.conj())) < 1e-13);
        let p = SpaceParams::new(2, 1.0, 2.0).unwrap();
        let zz = [c(1.0, 0.5), c(-0.3, 0.2)];
        let ww = [c(0.2, -0.1), c(1.5, 1.0)];
        let k = kernel_eval(&p, &zz, &ww).unwrap();
        assert!(k.relative_distance(&ScaledComplex::exp(inner(&zz, &ww) * 2.0)) < 1e-13);
    }

    #[test]
    fn hermitian_symmetry() {
        let p = SpaceParams::new(2, 2.0, 1.0).unwrap();
        let kern = Kernel::new(&p).unwrap();
        let z = [c(0.5, 0.4), c(-1.0, 0.3)];
        let w = [c(1.2, -0.7), c(0.1, 0.9)];
        let a = kern.eval(&z, &w).unwrap();
        let b = kern.eval(&w, &z).unwrap().conj();
        assert!(a.relative_distance(&b) < 1e-13);
    }
}
