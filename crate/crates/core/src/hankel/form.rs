//! The Hankel form `⟨h_b x, y⟩_α = ∫ ⟨b(ζ) x(ζ̄), y(ζ)⟩ dμ_{m,α}(ζ)` by exact
//! coefficient algebra and by quadrature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::fock::params::{ln_monomial_norm_sq, MultiIndex, SpaceParams};
use crate::fock::symbol::TaylorSymbol;
use crate::hankel::matrix::{build_hankel, hankel_entry};
use crate::quad::measure::{fp_norm, integrate_mu_scalar};
use crate::quad::radial::{radial_rule, QuadratureRule, DEFAULT_RADIAL_NODES};
use crate::{CMatrix, C64};

fn check_columns(b: &TaylorSymbol, x: &TaylorSymbol, y: &TaylorSymbol) -> Result<()> {
    let n = b.n();
    if !b.is_square() || x.shape() != (n, 1) || y.shape() != (n, 1) {
        return domain("x and y must be n × 1 columns for an n × n symbol");
    }
    if x.dim() != b.dim() || y.dim() != b.dim() {
        return domain("symbol and test functions must share d");
    }
    Ok(())
}

/// `h_b x` for a polynomial column `x`, kept to degrees `≤ n_trunc`:
/// `(h_b x)^_λ = Σ_μ b̂_{μ+λ} x̂_μ s_{α,μ+λ}/s_{α,λ}`.
pub fn apply_hankel(params: &SpaceParams, b: &TaylorSymbol, x: &TaylorSymbol, n_trunc: u32) -> Result<TaylorSymbol> {
    let mut out = TaylorSymbol::zero_shaped(b.dim(), b.n(), 1, n_trunc);
    for lam in MultiIndex::all_up_to(b.dim(), n_trunc) {
        let ln_sl = ln_monomial_norm_sq(params, &lam);
        let mut acc = CMatrix::zeros(b.n(), 1);
        for (mu, xm) in x.iter() {
            let kappa = mu.add(&lam);
            if let Some(bk) = b.coeff(&kappa) {
                let scale = (ln_monomial_norm_sq(params, &kappa) - ln_sl).exp();
                acc += bk * xm * C64::new(scale, 0.0);
            }
        }
        out.insert(lam, acc)?;
    }
    Ok(out)
}

/// `Σ_{κ = μ+λ} ŷ_λ^* b̂_κ x̂_μ s_{α,κ}`, the form by monomial orthogonality.
pub fn hankel_form_exact(params: &SpaceParams, b: &TaylorSymbol, x: &TaylorSymbol, y: &TaylorSymbol) -> Result<C64> {
    check_columns(b, x, y)?;
    let mut total = C64::new(0.0, 0.0);
    for (lam, yl) in y.iter() {
        for (mu, xm) in x.iter() {
            let kappa = mu.add(lam);
            if let Some(bk) = b.coeff(&kappa) {
                let v = (yl.adjoint() * bk * xm)[(0, 0)];
                total += v * ln_monomial_norm_sq(params, &kappa).exp();
            }
        }
    }
    Ok(total)
}

/// Rule for `(d, m, α)` integrating the form of polynomials of total degree
/// `degree` without phase aliasing.
pub fn form_rule(params: &SpaceParams, degree: u32) -> Result<QuadratureRule> {
    let nodes = DEFAULT_RADIAL_NODES.max(degree as usize + 8);
    Ok(radial_rule(params, nodes)?.with_sphere_order(degree as usize + 2))
}

/// `∫ ⟨b(ζ) x(ζ̄), y(ζ)⟩ dμ_{m,α}(ζ)` by quadrature.
pub fn hankel_form_quadrature(
    params: &SpaceParams,
    b: &TaylorSymbol,
    x: &TaylorSymbol,
    y: &TaylorSymbol,
    rule: &QuadratureRule,
) -> Result<C64> {
    check_columns(b, x, y)?;
    if rule.params.d != params.d || rule.params.m != params.m || rule.params.alpha != params.alpha {
        return domain("quadrature rule does not match the space parameters");
    }
    Ok(integrate_mu_scalar(
        |zeta| {
            let conj: Vec<C64> = zeta.iter().map(|v| v.conj()).collect();
            (y.eval(zeta).adjoint() * b.eval(zeta) * x.eval(&conj))[(0, 0)]
        },
        rule,
    ))
}

fn unit_column(d: usize, n: usize, nu: &MultiIndex, i: usize) -> TaylorSymbol {
    let mut col = CMatrix::zeros(n, 1);
    col[(i, 0)] = C64::new(1.0, 0.0);
    let mut s = TaylorSymbol::zero_shaped(d, n, 1, nu.degree());
    s.insert(nu.clone(), col).expect("degree matches");
    s
}

/// Closed-form entries against the quadrature oracle on random blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub triples: usize,
    pub max_relative_error: f64,
}

/// Compares `hankel_entry(μ, λ)_{j,i}` with the quadrature of the form on
/// `(ζ^μ e_i, ζ^λ e_j)` divided by `√(s_μ s_λ)`, for `count` random
/// `(μ, λ, i, j)` with `|μ|, |λ| ≤ max_index_degree` and a fresh random
/// symbol per triple.
pub fn entry_oracle_check(
    params: &SpaceParams,
    n: usize,
    count: usize,
    max_index_degree: u32,
    seed: u64,
) -> Result<OracleCheck> {
    let d = params.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbol_degree = 2 * max_index_degree;
    let rule = form_rule(params, 2 * symbol_degree)?;
    let indices = MultiIndex::all_up_to(d, max_index_degree);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let b = TaylorSymbol::random_decay(d, n, rng.gen(), 0.9, symbol_degree);
        let mu = &indices[rng.gen_range(0..indices.len())];
        let lam = &indices[rng.gen_range(0..indices.len())];
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let closed = hankel_entry(params, &b, mu, lam)?[(j, i)];
        let x = unit_column(d, n, mu, i);
        let y = unit_column(d, n, lam, j);
        let q = hankel_form_quadrature(params, &b, &x, &y, &rule)?;
        let norm = (0.5 * (ln_monomial_norm_sq(params, mu) + ln_monomial_norm_sq(params, lam))).exp();
        let err = (q / norm - closed).norm() / closed.norm().max(f64::MIN_POSITIVE);
        worst = worst.max(err);
    }
    Ok(OracleCheck {
        triples: count,
        max_relative_error: worst,
    })
}

/// `⟨h_b x, y⟩` for `x = ζ^ν f`, `y = b̂_ν f`, which equals `‖b̂_ν f‖² s_{α,ν}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalIdentityCheck {
    pub closed_form: f64,
    /// From the assembled Hankel matrix in normalized coordinates.
    pub via_matrix: C64,
    pub via_quadrature: C64,
}

impl DiagonalIdentityCheck {
    pub fn matrix_relative_error(&self) -> f64 {
        (self.via_matrix - self.closed_form).norm() / self.closed_form.abs().max(f64::MIN_POSITIVE)
    }

    pub fn quadrature_relative_error(&self) -> f64 {
        (self.via_quadrature - self.closed_form).norm() / self.closed_form.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn diagonal_identity_check(
    params: &SpaceParams,
    b: &TaylorSymbol,
    nu: &MultiIndex,
    f: &[C64],
) -> Result<DiagonalIdentityCheck> {
    let n = b.n();
    if f.len() != n {
        return domain("f must have n coordinates");
    }
    let d = params.d;
    let f_col = CMatrix::from_column_slice(n, 1, f);
    let bnu = b.coeff(nu).cloned().unwrap_or_else(|| CMatrix::zeros(n, n));
    let bf = &bnu * &f_col;
    let s_nu = ln_monomial_norm_sq(params, nu).exp();
    let closed_form = bf.norm_squared() * s_nu;

    // x has coordinates √s_ν f at (ν, ·); y has b̂_ν f at (0, ·).
    let h = build_hankel(params, b, nu.degree())?;
    let size = h.size();
    let mut xv = CMatrix::zeros(size, 1);
    let mut yv = CMatrix::zeros(size, 1);
    for (k, (idx, i)) in h.basis_index.iter().enumerate() {
        if idx == nu {
            xv[(k, 0)] = f[*i] * s_nu.sqrt();
        }
        if idx.degree() == 0 {
            yv[(k, 0)] = bf[(*i, 0)];
        }
    }
    let via_matrix = (yv.adjoint() * &h.entries * xv)[(0, 0)];

    let mut x = TaylorSymbol::zero_shaped(d, n, 1, nu.degree());
    x.insert(nu.clone(), f_col)?;
    let mut y = TaylorSymbol::zero_shaped(d, n, 1, 0);
    y.insert(MultiIndex::zero(d), bf)?;
    let rule = form_rule(params, 2 * b.degree().max(nu.degree()))?;
    let via_quadrature = hankel_form_quadrature(params, b, &x, &y, &rule)?;
    Ok(DiagonalIdentityCheck {
        closed_form,
        via_matrix,
        via_quadrature,
    })
}

/// Lower bound `max ‖h_b x‖_p / ‖x‖_p` over monomial inputs `ζ^μ e_i` with
/// `|μ| ≤ max_input_degree`, outputs truncated at `n_trunc`.
///
/// Truncated operator norms are exact only for `p = 2`; this quotient is the
/// reported quantity for other `p`.
pub fn rayleigh_lower_bound(
    params: &SpaceParams,
    b: &TaylorSymbol,
    p: f64,
    n_trunc: u32,
    max_input_degree: u32,
) -> Result<f64> {
    let (d, n) = (params.d, b.n());
    let mut best = 0.0f64;
    for mu in MultiIndex::all_up_to(d, max_input_degree) {
        for i in 0..n {
            let x = unit_column(d, n, &mu, i);
            let hx = apply_hankel(params, b, &x, n_trunc)?;
            if hx.is_zero() {
                continue;
            }
            best = best.max(fp_norm(&hx, params, p)? / fp_norm(&x, params, p)?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_symbol_pairs_constants() {
        let p = SpaceParams::new(1, 1.5, 1.0).unwrap();
        let b0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(2.0, 0.0), c(-1.0, 1.0), c(0.0, 3.0)]);
        let mut b = TaylorSymbol::zero(1, 2, 0);
        b.insert(MultiIndex::zero(1), b0.clone()).unwrap();
        let rule = form_rule(&p, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = unit_column(1, 2, &MultiIndex::zero(1), i);
                let y = unit_column(1, 2, &MultiIndex::zero(1), j);
                let q = hankel_form_quadrature(&p, &b, &x, &y, &rule).unwrap();
                assert!((q - b0[(j, i)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_matches_closed_form() {
        for &(d, m, a) in &[(1, 1.0, 1.0), (1, 2.0, 1.0), (2, 1.0, 2.0)] {
            let p = SpaceParams::new(d, m, a).unwrap();
            let chk = entry_oracle_check(&p, 2, 20, 4, 17).unwrap();
            assert!(chk.max_relative_error < 1e-8, "{d} {m} {a}: {}", chk.max_relative_error);
        }
    }

    #[test]
    fn exact_form_matches_matrix_and_apply() {
        let p = SpaceParams::new(2, 1.5, 0.8).unwrap();
        let b = TaylorSymbol::random_decay(2, 2, 5, 0.9, 6);
        let mut x = TaylorSymbol::zero_shaped(2, 2, 1, 3);
        let mut y = TaylorSymbol::zero_shaped(2, 2, 1, 3);
        x.insert(
            MultiIndex::new(vec![1, 0]),
            CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 1.0)]),
        )
        .unwrap();
        x.insert(
            MultiIndex::new(vec![0, 2]),
            CMatrix::from_column_slice(2, 1, &[c(0.5, 0.0), c(0.2, 0.0)]),
        )
        .unwrap();
        y.insert(
            MultiIndex::new(vec![1, 1]),
            CMatrix::from_column_slice(2, 1, &[c(0.3, -1.0), c(1.0, 0.0)]),
        )
        .unwrap();
        y.insert(
            MultiIndex::new(vec![0, 0]),
            CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(2.0, 0.0)]),
        )
        .unwrap();
        let exact = hankel_form_exact(&p, &b, &x, &y).unwrap();
        let hx = apply_hankel(&p, &b, &x, 3).unwrap();
        // ⟨h_b x, y⟩ = Σ_λ ŷ_λ^* (h_b x)^_λ s_λ.
        let via_apply: C64 = y
            .iter()
            .map(|(lam, yl)| {
                let v = hx.coeff(lam).cloned().unwrap_or_else(|| CMatrix::zeros(2, 1));
                (yl.adjoint() * v)[(0, 0)] * ln_monomial_norm_sq(&p, lam).exp()
            })
            .sum();
        assert!((exact - via_apply).norm() < 1e-13 * exact.norm());
        let rule = form_rule(&p, 12).unwrap();
        let q = hankel_form_quadrature(&p, &b, &x, &y, &rule).unwrap();
        assert!((q - exact).norm() < 1e-10 * exact.norm());
    }

    #[test]
    fn lemma19_identity() {
        let p = SpaceParams::new(2, 2.0, 1.0).unwrap();
        let b = TaylorSymbol::random_decay(2, 3, 2, 1.0, 5);
        let nu = MultiIndex::new(vec![2, 1]);
        let chk = diagonal_identity_check(&p, &b, &nu, &[c(1.0, 0.0), c(-0.5, 0.5), c(0.0, 2.0)]).unwrap();
        assert!(chk.matrix_relative_error() < 1e-12);
        assert!(chk.quadrature_relative_error() < 1e-8);
    }

    #[test]
    fn rayleigh_bound_at_p_two_is_below_operator_norm() {
        let p = SpaceParams::new(1, 1.0, 1.0).unwrap();
        let b = TaylorSymbol::exp_quadratic(1, 1, 0.1, 30);
        let lb = rayleigh_lower_bound(&p, &b, 2.0, 15, 4).unwrap();
        let nrm = build_hankel(&p, &b, 15).unwrap().operator_norm();
        assert!(lb > 0.0 && lb <= nrm + 1e-10, "{lb} vs {nrm}");
        assert!(rayleigh_lower_bound(&p, &b, 1.5, 15, 2).unwrap() > 0.0);
    }
}
