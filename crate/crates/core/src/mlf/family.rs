//! Branch selection for `E^{(j)}_{1/m,1/m}` and the tail functions `G_l`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mlf::asymptotic::{algebraic_part, exponential_part, in_sector};
use crate::mlf::integral::integral_value;
use crate::mlf::series::{MLOrder, MlFamily};
use crate::scaled::ScaledComplex;

/// Beyond this value of `|z|^m` the large-argument expansion is used.
pub const CROSSOVER: f64 = 30.0;

/// Largest relative rounding estimate at which a series value is accepted.
const SERIES_TRUST: f64 = 1e-13;

/// Relative tolerance of series evaluations.
const SERIES_TOL: f64 = 1e-16;

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Closed form `e^z` (only `m = 1`).
    Exact,
    Series,
    /// Integral along a ray plus the exponential term; used inside the
    /// crossover where the series cancels.
    Integral,
    /// Exponential plus algebraic expansion inside `|arg z| ≤ π/(2m)`.
    Asymptotic,
    /// Expansion outside the sector, where only its remainder bound is certified.
    OffSector,
}

/// A family value with its provenance and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlValue {
    pub value: ScaledComplex,
    pub branch: Branch,
    /// Absolute error estimate: rounding for series and integral, the first
    /// omitted term (plus Stokes ambiguity) for the expansions.
    pub error_estimate: f64,
}

impl MlFamily {
    /// `E^{(j)}_{1/m,1/m}(z)`.
    pub fn eval(&self, z: Complex64) -> Result<MlValue> {
        let m = self.m();
        if m == 1.0 {
            return self.eval_exact(z);
        }
        let w = z.norm().powf(m);
        if w > CROSSOVER {
            let branch = if in_sector(m, z) {
                Branch::Asymptotic
            } else {
                Branch::OffSector
            };
            return Ok(self.eval_expansion(z, branch));
        }
        let s = self.series(z, SERIES_TOL)?;
        if w <= 1.0 || s.rounding_estimate() <= SERIES_TRUST {
            return Ok(MlValue {
                value: ScaledComplex::from_complex(s.value),
                branch: Branch::Series,
                error_estimate: f64::EPSILON * s.abs_sum,
            });
        }
        let (value, error_estimate) = integral_value(m, self.order(), z);
        Ok(MlValue {
            value,
            branch: Branch::Integral,
            error_estimate,
        })
    }

    /// Like [`eval`](Self::eval) but accepts the series inside the crossover
    /// whatever its cancellation, so the error is small relative to
    /// `e^{|z|^m}` rather than to the value. Suited to integrands dominated by
    /// their peak, where the cancelling region contributes negligibly.
    pub fn eval_fast(&self, z: Complex64) -> Result<MlValue> {
        let m = self.m();
        if m == 1.0 {
            return self.eval_exact(z);
        }
        let w = z.norm().powf(m);
        if w > CROSSOVER {
            let branch = if in_sector(m, z) {
                Branch::Asymptotic
            } else {
                Branch::OffSector
            };
            return Ok(self.eval_expansion(z, branch));
        }
        let s = self.series(z, SERIES_TOL)?;
        Ok(MlValue {
            value: ScaledComplex::from_complex(s.value),
            branch: Branch::Series,
            error_estimate: f64::EPSILON * s.abs_sum,
        })
    }

    /// Evaluation by the large-argument expansion regardless of `|z|`.
    pub fn eval_expansion(&self, z: Complex64, branch: Branch) -> MlValue {
        let m = self.m();
        let (alg, mut err) = algebraic_part(m, self.order(), z);
        let w = z.norm().powf(m);
        // Distance of arg z^m from the Stokes line, where e^{z^m} is maximally
        // subdominant and switches off smoothly.
        let sigma = (m * z.arg().abs() - PI) * (0.5 * w).sqrt();
        let multiplier = 0.5 * libm::erfc(sigma);
        let value = if multiplier > 0.0 {
            let expo = exponential_part(m, self.order().k(), z);
            if sigma.abs() < 3.0 {
                err += expo.to_complex_lossy().norm() * multiplier.min(1.0 - multiplier);
            }
            expo.scale(multiplier) + ScaledComplex::from_complex(alg)
        } else {
            ScaledComplex::from_complex(alg)
        };
        MlValue {
            value,
            branch,
            error_estimate: err,
        }
    }

    fn eval_exact(&self, z: Complex64) -> Result<MlValue> {
        if self.order().j() >= 0 {
            return Ok(MlValue {
                value: ScaledComplex::exp(z),
                branch: Branch::Exact,
                error_estimate: 0.0,
            });
        }
        // e^z - 1 loses digits near the origin; sum the series there.
        if z.norm() < 1.0 {
            let s = self.series(z, SERIES_TOL)?;
            return Ok(MlValue {
                value: ScaledComplex::from_complex(s.value),
                branch: Branch::Exact,
                error_estimate: f64::EPSILON * s.abs_sum,
            });
        }
        Ok(MlValue {
            value: ScaledComplex::exp(z) - ScaledComplex::ONE,
            branch: Branch::Exact,
            error_estimate: 0.0,
        })
    }
}

/// `E^{(j)}_{1/m,1/m}(z)` in scaled form.
pub fn ml_family_eval(m: f64, order: MLOrder, z: Complex64) -> Result<ScaledComplex> {
    Ok(MlFamily::new(m, order)?.eval(z)?.value)
}

/// `G_l(t) = t^{-(d-l-1)} [E^{(l-1)}(t) - T_{d-l-2} E^{(l-1)}(t)]` for `0 ≤ l ≤ d`.
#[derive(Debug, Clone)]
pub struct GFunction {
    family: MlFamily,
    /// `d - l - 1 ≥ -1`.
    shift: i32,
}

impl GFunction {
    pub fn new(m: f64, d: usize, l: usize) -> Result<Self> {
        if d == 0 || l > d {
            return domain(format!("G_l needs d ≥ 1 and 0 ≤ l ≤ d (d = {d}, l = {l})"));
        }
        Ok(Self {
            family: MlFamily::new(m, MLOrder::new(l as i32 - 1)?)?,
            shift: d as i32 - l as i32 - 1,
        })
    }

    pub fn eval(&self, t: Complex64) -> Result<ScaledComplex> {
        if self.shift <= 0 {
            // T_{-1} = T_{-2} = 0, so G_l = t^{-shift} E^{(l-1)}.
            let e = self.family.eval(t)?.value;
            return Ok(if self.shift == 0 { e } else { e.mul_complex(t) });
        }
        let s = self.shift as usize;
        if t.norm().powf(self.family.m()) <= CROSSOVER {
            let shifted = self.family.series_shifted(t, s, SERIES_TOL)?;
            if t.norm() <= 1.0 || shifted.rounding_estimate() <= SERIES_TRUST {
                return Ok(ScaledComplex::from_complex(shifted.value));
            }
        }
        let mut head = ScaledComplex::ZERO;
        for n in 0..s {
            head = head + ScaledComplex::from_complex(t.powi(n as i32) * self.family.coeff(n));
        }
        let e = self.family.eval(t)?.value;
        Ok((e - head).mul_complex(t.powi(-(s as i32))))
    }
}

impl GFunction {
    /// [`eval`](Self::eval) with the error of [`MlFamily::eval_fast`].
    pub fn eval_fast(&self, t: Complex64) -> Result<ScaledComplex> {
        if self.shift <= 0 {
            let e = self.family.eval_fast(t)?.value;
            return Ok(if self.shift == 0 { e } else { e.mul_complex(t) });
        }
        let s = self.shift as usize;
        if t.norm().powf(self.family.m()) <= CROSSOVER {
            return Ok(ScaledComplex::from_complex(
                self.family.series_shifted(t, s, SERIES_TOL)?.value,
            ));
        }
        let mut head = ScaledComplex::ZERO;
        for n in 0..s {
            head = head + ScaledComplex::from_complex(t.powi(n as i32) * self.family.coeff(n));
        }
        let e = self.family.eval_fast(t)?.value;
        Ok((e - head).mul_complex(t.powi(-(s as i32))))
    }
}

/// Largest relative disagreement between the expansion and the direct
/// evaluation on the band `|z|^m ∈ [20, 30]` inside the sector.
pub fn crossover_self_check(m: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    if m == 1.0 {
        return Ok(0.0);
    }
    for j in -1..=2 {
        let fam = MlFamily::new(m, MLOrder::new(j)?)?;
        for w in [20.0f64, 25.0, 30.0] {
            for i in -4..=4 {
                let theta = i as f64 * PI / (8.0 * m);
                let z = Complex64::from_polar(w.powf(1.0 / m), theta);
                let direct = fam.eval(z)?;
                let expansion = fam.eval_expansion(z, Branch::Asymptotic);
                worst = worst.max(expansion.value.relative_distance(&direct.value));
            }
        }
    }
    Ok(worst)
}

/// `G_l(t)` for the given `m`, `d`, `l`.
pub fn g_l_eval(m: f64, d: usize, l: usize, t: Complex64) -> Result<ScaledComplex> {
    GFunction::new(m, d, l)?.eval(t)
}
