//! Radial Gauss rules for `dμ_{m,α}`.
//!
//! In polar form `dμ_{m,α} = dν(u) dσ` with `u = |ζ|²` and the probability
//! measure `dν(u) = m α^{d/m}/Γ(d/m) · u^{d-1} e^{-α u^m} du`. A Gauss rule for
//! `ν` integrates every polynomial in `|ζ|²` of degree `< 2n` exactly, and
//! sphere averages of polynomials in `ζ, ζ̄` are polynomials in `|ζ|²`.
//!
//! For `m = 1` the recurrence is the generalized Laguerre one. Otherwise the
//! recurrence coefficients come from the Stieltjes procedure on a fine
//! composite Gauss–Legendre discretization of `ν`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fock::params::SpaceParams;
use crate::quad::gauss::{golub_welsch, legendre_cached};
use crate::special::ln_gamma;

/// Default number of radial nodes.
pub const DEFAULT_RADIAL_NODES: usize = 64;

/// Default phase samples per circle factor.
pub const DEFAULT_SPHERE_ORDER: usize = 32;

/// Largest node count reached by automatic doubling.
const MAX_RADIAL_NODES: usize = 256;

/// Tolerance of the mass and moment self-checks.
const SELF_CHECK_TOL: f64 = 1e-12;

/// Highest moment `∫ u^k dν` compared against its closed form.
const CHECKED_MOMENTS: usize = 10;

/// Radial nodes and weights for `dμ_{m,α}`, paired with a sphere sampling order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub params: SpaceParams,
    /// Radii `r_i > 0`.
    pub radial_nodes: Vec<f64>,
    /// Positive weights summing to one.
    pub radial_weights: Vec<f64>,
    pub sphere_order: usize,
    pub self_check: RuleSelfCheck,
}

/// Residuals recorded when a rule is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSelfCheck {
    /// `|Σ w_i - 1|`.
    pub mass_error: f64,
    /// Worst relative error of `∫ u^k dν`, `k ≤ 10`.
    pub moment_error: f64,
    /// Node counts tried, last one kept.
    pub attempts: Vec<usize>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radial_nodes.is_empty()
    }

    pub fn with_sphere_order(mut self, order: usize) -> Self {
        self.sphere_order = order.max(1);
        self
    }

    /// `Σ_i w_i g(r_i)`, the integral of a radial function.
    pub fn integrate_radial(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.radial_nodes
            .iter()
            .zip(&self.radial_weights)
            .map(|(&r, &w)| w * g(r))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule serializes")
    }
}

/// Gauss rule with `n_nodes` radial points for `dμ_{m,α}`, doubled until the
/// self-checks pass.
pub fn radial_rule(params: &SpaceParams, n_nodes: usize) -> Result<QuadratureRule> {
    params.validate()?;
    if n_nodes < 8 {
        return domain(format!("radial rule needs at least 8 nodes, got {n_nodes}"));
    }
    let exponent = params.d as f64 / params.m - 1.0;
    assert!(exponent > -1.0, "d/m - 1 > -1 holds for d ≥ 1, m ≥ 1");
    let mut attempts = Vec::new();
    let mut n = n_nodes;
    loop {
        attempts.push(n);
        let (u, w) = gauss_in_u(params.d, params.m, n);
        let scale = params.alpha.powf(-1.0 / params.m);
        let (mass_error, moment_error) = self_check(params.d, params.m, &u, &w);
        let passed = mass_error <= SELF_CHECK_TOL && moment_error <= SELF_CHECK_TOL;
        if passed || 2 * n > MAX_RADIAL_NODES {
            return Ok(QuadratureRule {
                params: *params,
                radial_nodes: u.iter().map(|x| (x * scale).sqrt()).collect(),
                radial_weights: w,
                sphere_order: DEFAULT_SPHERE_ORDER,
                self_check: RuleSelfCheck {
                    mass_error,
                    moment_error,
                    attempts,
                },
            });
        }
        n *= 2;
    }
}

/// Nodes in `u` (for `α = 1`) and weights of the `n`-point rule.
fn gauss_in_u(d: usize, m: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = if m == 1.0 {
        laguerre_recurrence(d as f64 - 1.0, n)
    } else {
        let (x, w) = discretize(d, m, n);
        stieltjes(&x, &w, n)
    };
    let rule = golub_welsch(&a, &b[1..], 1.0);
    (rule.nodes, rule.weights)
}

/// Monic recurrence `a_k = 2k + a + 1`, `b_k = k(k + a)` of the normalized
/// generalized Laguerre measure.
fn laguerre_recurrence(a: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let alpha = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
    let beta = (0..n).map(|k| k as f64 * (k as f64 + a)).collect();
    (alpha, beta)
}

/// Discrete probability measure approximating `ν` for `α = 1`: composite
/// Gauss–Legendre panels uniform in `t = u^m`, graded geometrically toward 0.
fn discretize(d: usize, m: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let t_max = 4.0 * n as f64 + 20.0 * (n as f64).sqrt() + 60.0;
    let panels = (t_max / 2.0).ceil() as usize;
    let mut breaks: Vec<f64> = (0..=panels)
        .map(|i| (t_max * i as f64 / panels as f64).powf(1.0 / m))
        .collect();
    let first = breaks[1];
    breaks.remove(0);
    for l in 1..=30 {
        breaks.push(first * 0.5f64.powi(l));
    }
    breaks.push(0.0);
    breaks.sort_by(f64::total_cmp);

    let ln_norm = m.ln() - ln_gamma(d as f64 / m);
    let rule = legendre_cached(24);
    let mut x = Vec::new();
    let mut w = Vec::new();
    for p in breaks.windows(2) {
        for (u, wt) in rule.mapped(p[0], p[1]) {
            let dens = (ln_norm + (d as f64 - 1.0) * u.ln() - u.powf(m)).exp();
            x.push(u);
            w.push(wt * dens);
        }
    }
    (x, w)
}

/// Recurrence coefficients `(a_k, b_k)`, `k < n`, of a discrete measure by the
/// Stieltjes procedure with normalized vectors (`b_0` is the total mass).
fn stieltjes(x: &[f64], w: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mass: f64 = w.iter().sum();
    b[0] = mass;
    let mut prev = vec![0.0; x.len()];
    let mut cur = vec![1.0 / mass.sqrt(); x.len()];
    for k in 0..n {
        let ak: f64 = (0..x.len()).map(|i| w[i] * x[i] * cur[i] * cur[i]).sum();
        a[k] = ak;
        if k + 1 == n {
            break;
        }
        let sqrt_bk = if k == 0 { 0.0 } else { b[k].sqrt() };
        let mut next: Vec<f64> = (0..x.len()).map(|i| (x[i] - ak) * cur[i] - sqrt_bk * prev[i]).collect();
        let norm_sq: f64 = (0..x.len()).map(|i| w[i] * next[i] * next[i]).sum();
        let norm = norm_sq.sqrt();
        for v in &mut next {
            *v /= norm;
        }
        b[k + 1] = norm_sq;
        prev = std::mem::replace(&mut cur, next);
    }
    (a, b)
}

/// Mass error and worst relative moment error for `α = 1`.
fn self_check(d: usize, m: f64, u: &[f64], w: &[f64]) -> (f64, f64) {
    let mass: f64 = w.iter().sum();
    let df = d as f64;
    let mut worst: f64 = 0.0;
    for k in 1..=CHECKED_MOMENTS {
        let exact = (ln_gamma((df + k as f64) / m) - ln_gamma(df / m)).exp();
        let approx: f64 = u.iter().zip(w).map(|(x, wt)| wt * x.powi(k as i32)).sum();
        worst = worst.max((approx - exact).abs() / exact);
    }
    ((mass - 1.0).abs(), worst)
}
