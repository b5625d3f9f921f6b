//! Large-`|z|` expansion of `E^{(j)}_{1/m,1/m}` and its leading term.
//!
//! With `k = j + 1` the exponential part is `p_k(z^m) z^{-k} e^{z^m}` (and
//! `e^{z^m}` for `k = 0`). The algebraic part comes from
//! `E_{1/m,1/m}(z) ~ -Σ_{i≥1} z^{-i}/Γ((1-i)/m)` differentiated termwise, and
//! from `E^{(-1)} = (E_{1/m,1} - 1)/m` for the antiderivative.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mlf::integral::integral_parts;
use crate::mlf::poly::p_poly;
use crate::mlf::series::{MLOrder, MlFamily};
use crate::scaled::ScaledComplex;
use crate::special::recip_gamma;

/// Maximum number of algebraic terms tried before optimal truncation stops.
const MAX_ALGEBRAIC_TERMS: usize = 80;

/// Slack on the sector boundary test.
const SECTOR_SLACK: f64 = 1e-12;

/// `|arg z| ≤ π/(2m)`.
pub fn in_sector(m: f64, z: Complex64) -> bool {
    z.arg().abs() <= PI / (2.0 * m) + SECTOR_SLACK
}

/// Exponential contribution `p_k(z^m) z^{-k} e^{z^m}` (`e^{z^m}` for `k = 0`).
pub(crate) fn exponential_part(m: f64, k: usize, z: Complex64) -> ScaledComplex {
    let w = z.powf(m);
    let e = ScaledComplex::exp(w);
    if k == 0 {
        return e;
    }
    let p = p_poly(m, k).eval_complex(w);
    e.mul_complex(p * z.powi(-(k as i32)))
}

/// Algebraic part of the expansion with its optimal-truncation error estimate.
pub(crate) fn algebraic_part(m: f64, order: MLOrder, z: Complex64) -> (Complex64, f64) {
    let j = order.j();
    let zinv = z.inv();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    let (mut constant, mut seen) = (Complex64::new(0.0, 0.0), false);
    if j == -1 {
        constant = Complex64::new(-1.0 / m, 0.0);
    }
    for i in 1..=MAX_ALGEBRAIC_TERMS {
        let term = if j == -1 {
            -zinv.powi(i as i32) * (recip_gamma(1.0 - i as f64 / m) / m)
        } else {
            // d^j/dz^j z^{-i} = (-1)^j (i)_j z^{-i-j}.
            let rising: f64 = (0..j).map(|s| (i as i32 + s) as f64).product();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            -zinv.powi(i as i32 + j) * (sign * rising * recip_gamma((1.0 - i as f64) / m))
        };
        let t = term.norm();
        if t == 0.0 {
            continue;
        }
        if seen && t > last {
            err = last;
            break;
        }
        sum += term;
        last = t;
        err = t;
        seen = true;
    }
    (constant + sum, err)
}

/// Leading term `p_k(z^m) z^{-k} e^{z^m}` of `E^{(k-1)}_{1/m,1/m}` (`e^{z^m}` for `k = 0`).
pub fn ml_asymptotic_leading(m: f64, k: usize, z: Complex64) -> Result<ScaledComplex> {
    if !(m >= 1.0) {
        return domain(format!("m must be ≥ 1, got {m}"));
    }
    if z.norm() == 0.0 {
        return domain("leading term is undefined at z = 0");
    }
    if !in_sector(m, z) {
        return domain(format!(
            "arg z = {} lies outside the sector |arg z| ≤ π/(2m) = {}",
            z.arg(),
            PI / (2.0 * m)
        ));
    }
    Ok(exponential_part(m, k, z))
}

/// Reference used to measure the error of the leading term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reference {
    /// Log-space power series.
    Series,
    /// Integral representation; taken when the series cannot resolve the error.
    Integral,
}

/// Relative error of the leading term and how it was measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCheck {
    pub relative_error: f64,
    pub reference: Reference,
    /// Estimated relative rounding error of the reference.
    pub reference_rounding: f64,
}

/// `|E^{(k-1)}(z) − leading| / |leading|` for `z` in the sector.
///
/// The power series is summed in log space; where its rounding error is not
/// well below the quantity being measured (which happens once the remainder
/// drops under `ε e^{|z|^m}`), the remainder is taken from the integral
/// representation instead, which yields it without subtracting the leading term.
pub fn asymptotic_check(m: f64, k: usize, z: Complex64) -> Result<AsymptoticCheck> {
    let leading = ml_asymptotic_leading(m, k, z)?;
    let order = MLOrder::from_k(k);
    let fam = MlFamily::new(m, order)?;
    let series = fam.series_scaled(z, 1e-16);
    if let Ok(series) = &series {
        let rel = series.value.relative_distance(&leading);
        if m == 1.0 || (series.rounding <= 1e-3 * rel && series.rounding <= 1e-6) {
            return Ok(AsymptoticCheck {
                relative_error: rel,
                reference: Reference::Series,
                reference_rounding: series.rounding,
            });
        }
    } else if m == 1.0 {
        series?;
    }
    let parts = integral_parts(m, order, z);
    let ln_lead = leading.ln_abs();
    let ln_rem = parts.algebraic.norm().ln();
    Ok(AsymptoticCheck {
        relative_error: (ln_rem - ln_lead).exp(),
        reference: Reference::Integral,
        reference_rounding: parts.error / parts.algebraic.norm(),
    })
}

/// `|series − leading| / |leading|` for `E^{(k-1)}_{1/m,1/m}` at `z` in the sector.
pub fn asymptotic_relative_error(m: f64, k: usize, z: Complex64) -> Result<f64> {
    Ok(asymptotic_check(m, k, z)?.relative_error)
}
