//! Regression of `ln V(r) ≈ A + e ln r + ρ r^{2m}` on a radius window.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{domain, Result};

/// Fits with a larger RMS residual (log units) are flagged.
pub const RESIDUAL_LIMIT: f64 = 0.1;

/// How the fitted exponent is compared with its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "tolerance", rename_all = "snake_case")]
pub enum ExponentCheck {
    /// `|fitted − target| ≤ tolerance`.
    Equal(f64),
    /// `fitted ≤ target + tolerance`.
    AtMost(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub radii: Vec<f64>,
    /// `ln V(r)` at each radius.
    pub ln_values: Vec<f64>,
    pub target_exponent: f64,
    /// Slope of `ln V − target_rate · r^{2m}` against `ln r`.
    pub fitted_exponent: f64,
    pub target_rate: f64,
    /// Coefficient of `r^{2m}` when the rate is fitted together with the exponent.
    pub fitted_rate: f64,
    /// `A` of the stripped fit: the logarithm of the implied constant.
    pub ln_constant: f64,
    /// RMS residual of the stripped fit.
    pub residual: f64,
    pub check: ExponentCheck,
    /// The residual is at least [`RESIDUAL_LIMIT`].
    pub flagged: bool,
    pub passed: bool,
}

fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let n = y.len();
    let a = DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .expect("SVD computed with both factors");
    let res = &a * &coef - b;
    let rms = (res.norm_squared() / n as f64).sqrt();
    (coef.iter().copied().collect(), rms)
}

impl GrowthFit {
    pub fn fit(
        radii: &[f64],
        ln_values: &[f64],
        m: f64,
        target_exponent: f64,
        target_rate: f64,
        check: ExponentCheck,
    ) -> Result<Self> {
        if radii.len() != ln_values.len() || radii.len() < 4 {
            return domain("a growth fit needs at least 4 radii with one value each");
        }
        if radii.iter().any(|&r| !(r > 0.0)) || ln_values.iter().any(|v| !v.is_finite()) {
            return domain("radii must be positive and values finite");
        }
        let ones = vec![1.0; radii.len()];
        let logs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let powers: Vec<f64> = radii.iter().map(|r| r.powf(2.0 * m)).collect();
        let stripped: Vec<f64> = ln_values
            .iter()
            .zip(&powers)
            .map(|(v, p)| v - target_rate * p)
            .collect();
        let (c2, residual) = least_squares(&[ones.clone(), logs.clone()], &stripped);
        let (c3, _) = least_squares(&[ones, logs, powers], ln_values);
        let fitted_exponent = c2[1];
        let flagged = !(residual < RESIDUAL_LIMIT);
        let within = match check {
            ExponentCheck::Equal(tol) => (fitted_exponent - target_exponent).abs() <= tol,
            ExponentCheck::AtMost(tol) => fitted_exponent <= target_exponent + tol,
        };
        Ok(Self {
            radii: radii.to_vec(),
            ln_values: ln_values.to_vec(),
            target_exponent,
            fitted_exponent,
            target_rate,
            fitted_rate: c3[2],
            ln_constant: c2[0],
            residual,
            check,
            flagged,
            passed: within && !flagged,
        })
    }

    pub fn exponent_deviation(&self) -> f64 {
        self.fitted_exponent - self.target_exponent
    }

    /// `|fitted_rate / target_rate − 1|`.
    pub fn rate_relative_error(&self) -> f64 {
        (self.fitted_rate / self.target_rate - 1.0).abs()
    }
}
