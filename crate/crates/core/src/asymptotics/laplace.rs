//! Laplace's method for `J(λ) = ∫_a^b f(x) e^{λ g(x)} dx`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::quad::axial::adaptive;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative step of the nested central differences.
pub const FD_STEP: f64 = 1e-4;

pub struct LaplaceProblem {
    pub f: RealFn,
    pub g: RealFn,
    pub dg: RealFn,
    pub d2g: RealFn,
    /// `[a, b)`; `b` may be `+∞`.
    pub interval: (f64, f64),
    pub interior_max: Option<f64>,
    /// Analytic `c_0, c_1, …` for the boundary expansion.
    pub boundary_coeffs: Option<Vec<f64>>,
}

impl std::fmt::Debug for LaplaceProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplaceProblem")
            .field("interval", &self.interval)
            .field("interior_max", &self.interior_max)
            .field("boundary_coeffs", &self.boundary_coeffs)
            .finish_non_exhaustive()
    }
}

impl LaplaceProblem {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dg: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        interval: (f64, f64),
    ) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b > a) {
            return domain("interval must be [a, b) with finite a < b");
        }
        Ok(Self {
            f: Box::new(f),
            g: Box::new(g),
            dg: Box::new(dg),
            d2g: Box::new(d2g),
            interval,
            interior_max: None,
            boundary_coeffs: None,
        })
    }

    pub fn with_interior_max(mut self, x0: f64) -> Self {
        self.interior_max = Some(x0);
        self
    }

    pub fn with_boundary_coeffs(mut self, c: Vec<f64>) -> Self {
        self.boundary_coeffs = Some(c);
        self
    }
}

/// `f(x₀) e^{λ g(x₀)} √(−2π / (λ g''(x₀)))`.
pub fn laplace_interior(prob: &LaplaceProblem, lambda: f64) -> Result<f64> {
    let Some(x0) = prob.interior_max else {
        return domain("no interior maximum supplied");
    };
    let (a, b) = prob.interval;
    if !(a < x0 && x0 < b) {
        return domain("interior maximum must lie strictly inside the interval");
    }
    if !(lambda > 0.0) {
        return domain("λ must be positive");
    }
    let g2 = (prob.d2g)(x0);
    if !(g2 < 0.0) {
        return domain(format!("g''(x₀) = {g2} is not negative"));
    }
    Ok((prob.f)(x0) * (lambda * (prob.g)(x0)).exp() * (-2.0 * std::f64::consts::PI / (lambda * g2)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceEstimate {
    pub value: f64,
    pub coefficients: Vec<f64>,
    /// The coefficients came from finite differences, not analytic input.
    pub finite_difference: bool,
}

/// `e^{λ g(a)} Σ_{k<K} c_k λ^{−k−1}` with
/// `c_k = ((1/(−g′)) d/dx)^k (f/(−g′))` at `a`.
///
/// Without analytic coefficients, derivatives are nested central differences
/// of step `FD_STEP · max(1, |a|)`, so `f` and `g′` must be defined slightly
/// left of `a`.
pub fn laplace_boundary(prob: &LaplaceProblem, lambda: f64, terms: usize) -> Result<LaplaceEstimate> {
    let a = prob.interval.0;
    if !(lambda > 0.0) || terms == 0 {
        return domain("need λ > 0 and at least one term");
    }
    let slope = (prob.dg)(a);
    if slope == 0.0 {
        return domain("g′(a) vanishes");
    }
    let (coefficients, finite_difference) = match &prob.boundary_coeffs {
        Some(c) if c.len() >= terms => (c[..terms].to_vec(), false),
        _ => {
            let h = FD_STEP * a.abs().max(1.0);
            ((0..terms).map(|k| nested(prob, k, a, h)).collect(), true)
        }
    };
    let series: f64 = coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| c * lambda.powi(-(k as i32) - 1))
        .sum();
    Ok(LaplaceEstimate {
        value: (lambda * (prob.g)(a)).exp() * series,
        coefficients,
        finite_difference,
    })
}

/// `h_k(x)` with `h_0 = f/(−g′)` and `h_{k+1} = h_k′/(−g′)`.
fn nested(prob: &LaplaceProblem, k: usize, x: f64, h: f64) -> f64 {
    let inv = -1.0 / (prob.dg)(x);
    if k == 0 {
        return (prob.f)(x) * inv;
    }
    let deriv = (nested(prob, k - 1, x + h, h) - nested(prob, k - 1, x - h, h)) / (2.0 * h);
    deriv * inv
}

/// `J(λ)` by adaptive Gauss–Legendre, scaled by `e^{−λ g*}` internally where
/// `g*` is the larger of `g(a)` and `g(x₀)`.
pub fn laplace_quadrature(prob: &LaplaceProblem, lambda: f64) -> f64 {
    let (a, b) = prob.interval;
    let peak = prob.interior_max.map_or(a, |x| x);
    let g_star = (prob.g)(peak).max((prob.g)(a));
    let h = |x: f64| (prob.f)(x) * (lambda * ((prob.g)(x) - g_star)).exp();
    let scale = (lambda * g_star).exp();
    if b.is_finite() {
        let mut breaks = vec![a, b];
        if peak > a && peak < b {
            breaks.insert(1, peak);
        }
        let total: f64 = breaks.windows(2).map(|w| adaptive(&h, w[0], w[1], 1e-15, 30)).sum();
        return scale * total;
    }
    // Panels of width 1/√λ until several contribute nothing.
    let width = 1.0 / lambda.sqrt();
    let mut total = 0.0;
    let mut left = a;
    let mut quiet = 0;
    for _ in 0..100_000 {
        let right = left + width;
        let part = adaptive(&h, left, right, 1e-16, 20);
        total += part;
        left = right;
        if left > peak && part.abs() <= 1e-17 * total.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    scale * total
}
