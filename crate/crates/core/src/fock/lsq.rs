//! Approximation of monomials by finite spans of kernel sections.

use serde::Serialize;

use crate::error::{domain, LabError, Result};
use crate::fock::kernel::{norm, Kernel};
use crate::fock::params::{ln_monomial_norm_sq, MultiIndex, SpaceParams};
use crate::linalg::singular_values;
use crate::{CMatrix, C64};

/// Gram matrices with a larger condition number are rejected.
pub const CONDITION_LIMIT: f64 = 1e14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeastSquares {
    /// `c_l` in `ζ^ν ≈ Σ_l c_l K(·, a_l)`.
    pub coefficients: Vec<C64>,
    /// `‖ζ^ν − Σ_l c_l K(·, a_l)‖_{F²_{m,α}}`.
    pub residual: f64,
    pub condition: f64,
}

/// Best `F²_{m,α}` approximation of `ζ^ν` by kernel sections at `nodes`.
///
/// With `K_a = K(·, a)`, the normal equations are `G c = f(a)` where
/// `G_{il} = K(a_i, a_l)` and `f(a_i) = a_i^ν = ⟨ζ^ν, K_{a_i}⟩`. The residual
/// is not taken from `‖f‖² − f(a)^* G^{-1} f(a)`, which cancels catastrophically
/// for small residuals, but summed from the Taylor coefficients of the error
/// `δ_{μν} − Σ_l c_l ā_l^μ / s_{α,μ}` weighted by `s_{α,μ}`.
pub fn kernel_least_squares(params: &SpaceParams, target_nu: &MultiIndex, nodes: &[Vec<C64>]) -> Result<LeastSquares> {
    params.validate()?;
    let d = params.d;
    if target_nu.dim() != d || nodes.iter().any(|a| a.len() != d) {
        return domain("target index and nodes must have dimension d");
    }
    if nodes.is_empty() {
        return domain("at least one node is required");
    }
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[..i] {
            let gap: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if norm(&gap) <= 1e-14 * (1.0 + norm(a)) {
                return domain("nodes must be pairwise distinct");
            }
        }
    }
    let kernel = Kernel::new(params)?;
    let n = nodes.len();
    let mut gram = CMatrix::zeros(n, n);
    for i in 0..n {
        for l in 0..n {
            gram[(i, l)] = kernel.eval(&nodes[i], &nodes[l])?.to_complex()?;
        }
    }
    let sv = singular_values(&gram);
    let condition = sv[0] / sv[n - 1];
    if !(condition <= CONDITION_LIMIT) {
        return Err(LabError::IllConditioned { condition });
    }
    let rhs = nalgebra::DVector::from_iterator(n, nodes.iter().map(|a| target_nu.monomial(a)));
    let coefficients: Vec<C64> = gram
        .lu()
        .solve(&rhs)
        .ok_or(LabError::IllConditioned { condition })?
        .iter()
        .copied()
        .collect();
    let residual = coefficient_residual(params, target_nu, nodes, &coefficients);
    Ok(LeastSquares {
        coefficients,
        residual,
        condition,
    })
}

/// `(Σ_μ |δ_{μν} − Σ_l c_l ā_l^μ / s_μ|² s_μ)^{1/2}`, summed by degree until
/// the tail is negligible.
fn coefficient_residual(params: &SpaceParams, nu: &MultiIndex, nodes: &[Vec<C64>], c: &[C64]) -> f64 {
    let d = params.d;
    let conj_nodes: Vec<Vec<C64>> = nodes.iter().map(|a| a.iter().map(|x| x.conj()).collect()).collect();
    let mut total = 0.0f64;
    let mut quiet = 0;
    let target_degree = nu.degree();
    for k in 0u32..2000 {
        let mut level = 0.0;
        for mu in MultiIndex::of_degree(d, k) {
            let ln_s = ln_monomial_norm_sq(params, &mu);
            let inv_s = (-ln_s).exp();
            let sum: C64 = conj_nodes.iter().zip(c).map(|(a, cl)| cl * mu.monomial(a)).sum();
            let mut coef = -sum * inv_s;
            if &mu == nu {
                coef += 1.0;
            }
            level += coef.norm_sqr() * ln_s.exp();
        }
        total += level;
        if k > target_degree && level <= 1e-34 * total.max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    total.sqrt()
}
