//! Power-series evaluation of `E_{β,γ}` and of the family `E^{(j)}_{1/m,1/m}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, LabError, Result};
use crate::scaled::ScaledComplex;
use crate::special::{ln_gamma, CompensatedSum};

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 10_000;

/// `ln` of the largest term magnitude the double-precision series accepts.
pub const SERIES_LOG_LIMIT: f64 = 600.0;

/// `Γ(x)` is formed directly below this argument and through `ln Γ` above.
const MAX_GAMMA_ARG: f64 = 170.0;

/// Number of coefficient ratios tabulated when a family is built.
const RATIO_CACHE: usize = 512;

/// Derivative order `j ≥ -1` of `E_{1/m,1/m}`; `j = -1` is the antiderivative
/// vanishing at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MLOrder(i32);

impl MLOrder {
    pub fn new(j: i32) -> Result<Self> {
        if j < -1 {
            return domain(format!("derivative order must be at least -1, got {j}"));
        }
        Ok(Self(j))
    }

    /// Order `k - 1`, the index convention of the asymptotic leading terms.
    pub fn from_k(k: usize) -> Self {
        Self(k as i32 - 1)
    }

    pub fn j(self) -> i32 {
        self.0
    }

    /// `k = j + 1`.
    pub fn k(self) -> usize {
        (self.0 + 1) as usize
    }

    pub fn next(self) -> Self {
        Self(self.0 + 1)
    }
}

/// `Σ_{k≥0} z^k / Γ(βk + γ)` in double precision with compensated summation.
///
/// Valid while the largest term stays below `e^600`, roughly
/// `|z|^{1/β} ≤ 600`; larger arguments are rejected as a domain error.
pub fn ml_series(beta: f64, gamma: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if !(beta > 0.0) || !(gamma > 0.0) {
        return domain(format!(
            "Mittag-Leffler parameters must be positive (β = {beta}, γ = {gamma})"
        ));
    }
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    let r = z.norm();
    if r > 0.0 && r.powf(1.0 / beta) > SERIES_LOG_LIMIT {
        return domain(format!("|z| = {r} lies outside the series validity radius"));
    }
    let recip = |k: usize| {
        let x = beta * k as f64 + gamma;
        if x < MAX_GAMMA_ARG {
            1.0 / libm::tgamma(x)
        } else {
            (-ln_gamma(x)).exp()
        }
    };
    let mut acc = CompensatedSum::new();
    let mut power = Complex64::new(1.0, 0.0);
    // Ratios Γ(β(k-1)+γ)/Γ(βk+γ) decrease once βk + γ clears the minimum of Γ.
    let warmup = (2.0 / beta).ceil() as usize + 2;
    let mut a_k = recip(0);
    for k in 0..TERM_CAP {
        acc.add(power * a_k);
        let a_next = recip(k + 1);
        power *= z;
        let next = power * a_next;
        let q = if a_k > 0.0 { r * a_next / a_k } else { 0.0 };
        if k >= warmup && q < 1.0 && next.norm() / (1.0 - q) <= tol * acc.value().norm() {
            return Ok(acc.value());
        }
        if k >= warmup && next.norm() == 0.0 {
            return Ok(acc.value());
        }
        a_k = a_next;
    }
    Err(LabError::NonConvergence { terms: TERM_CAP })
}

/// Result of a double-precision series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    /// `Σ |terms|`, the scale of the accumulated rounding error.
    pub abs_sum: f64,
    pub terms: usize,
}

impl SeriesSum {
    /// Estimated relative rounding error `ε Σ|terms| / |sum|`.
    pub fn rounding_estimate(&self) -> f64 {
        f64::EPSILON * self.abs_sum / self.value.norm()
    }
}

/// Result of a log-space series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSeriesSum {
    pub value: ScaledComplex,
    /// Estimated relative rounding error, including cancellation.
    pub rounding: f64,
    pub terms: usize,
}

/// Coefficients `a_n` of `E^{(j)}_{1/m,1/m}(z) = Σ a_n z^n`:
/// `a_n = (n+j)! / (n! Γ((n+j+1)/m))` for `j ≥ 0`, and
/// `a_n = 1/(n Γ(n/m))`, `a_0 = 0` for `j = -1`.
#[derive(Debug, Clone)]
pub struct MlFamily {
    m: f64,
    order: MLOrder,
    ratios: Vec<f64>,
}

impl MlFamily {
    pub fn new(m: f64, order: MLOrder) -> Result<Self> {
        if !(m >= 1.0) || !m.is_finite() {
            return domain(format!("m must be a finite real ≥ 1, got {m}"));
        }
        let mut fam = Self {
            m,
            order,
            ratios: Vec::new(),
        };
        fam.ratios = (0..RATIO_CACHE).map(|n| fam.ratio_uncached(n)).collect();
        Ok(fam)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn order(&self) -> MLOrder {
        self.order
    }

    /// Index of the first nonzero coefficient.
    pub fn first_index(&self) -> usize {
        usize::from(self.order.j() == -1)
    }

    /// `ln a_n`, `-inf` where `a_n = 0`.
    pub fn ln_coeff(&self, n: usize) -> f64 {
        let j = self.order.j();
        let nf = n as f64;
        if j == -1 {
            if n == 0 {
                f64::NEG_INFINITY
            } else {
                -nf.ln() - ln_gamma(nf / self.m)
            }
        } else {
            let jf = j as f64;
            ln_gamma(nf + jf + 1.0) - ln_gamma(nf + 1.0) - ln_gamma((nf + jf + 1.0) / self.m)
        }
    }

    /// `a_n`, formed directly from `Γ` while it is representable so that the
    /// coefficient carries a single rounding error.
    pub fn coeff(&self, n: usize) -> f64 {
        let j = self.order.j();
        if j == -1 {
            if n == 0 {
                return 0.0;
            }
            let x = n as f64 / self.m;
            if x < MAX_GAMMA_ARG {
                return 1.0 / (n as f64 * libm::tgamma(x));
            }
            return self.ln_coeff(n).exp();
        }
        let x = (n as f64 + j as f64 + 1.0) / self.m;
        let rising: f64 = (1..=j as usize).map(|i| (n + i) as f64).product();
        if x < MAX_GAMMA_ARG && rising.is_finite() {
            rising / libm::tgamma(x)
        } else {
            self.ln_coeff(n).exp()
        }
    }

    /// `a_0, ..., a_{len-1}`.
    pub fn coeffs(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| self.coeff(n)).collect()
    }

    fn ratio_uncached(&self, n: usize) -> f64 {
        if n <= self.first_index() {
            return 0.0;
        }
        let (a, b) = (self.coeff(n), self.coeff(n - 1));
        if a.is_normal() && b.is_normal() {
            a / b
        } else {
            (self.ln_coeff(n) - self.ln_coeff(n - 1)).exp()
        }
    }

    /// `a_n / a_{n-1}` (zero before the first nonzero coefficient).
    fn ratio(&self, n: usize) -> f64 {
        match self.ratios.get(n) {
            Some(&r) => r,
            None => self.ratio_uncached(n),
        }
    }

    /// Index past which the coefficient ratios decrease monotonically.
    fn warmup(&self) -> usize {
        (2.0 * self.m).ceil() as usize + self.first_index() + 2
    }

    /// `Σ_{n ≥ offset} a_n z^{n - offset}`, i.e. `(E - T_{offset-1} E)(z) / z^offset`.
    pub fn series_shifted(&self, z: Complex64, offset: usize, tol: f64) -> Result<SeriesSum> {
        let r = z.norm();
        if r > 0.0 && r.powf(self.m) > SERIES_LOG_LIMIT {
            return domain(format!("|z| = {r} lies outside the series validity radius"));
        }
        let n0 = offset.max(self.first_index());
        let mut acc = CompensatedSum::new();
        let mut term = z.powi((n0 - offset) as i32) * self.coeff(n0);
        let warmup = self.warmup().max(n0);
        for n in n0..n0 + TERM_CAP {
            acc.add(term);
            let ratio = self.ratio(n + 1);
            let q = r * ratio;
            let next = term * z * ratio;
            if n >= warmup && q < 1.0 && next.norm() / (1.0 - q) <= tol * acc.value().norm() {
                return Ok(SeriesSum {
                    value: acc.value(),
                    abs_sum: acc.abs_sum(),
                    terms: n - n0 + 1,
                });
            }
            if n >= warmup && next.norm() == 0.0 {
                return Ok(SeriesSum {
                    value: acc.value(),
                    abs_sum: acc.abs_sum(),
                    terms: n - n0 + 1,
                });
            }
            term = next;
        }
        Err(LabError::NonConvergence { terms: TERM_CAP })
    }

    pub fn series(&self, z: Complex64, tol: f64) -> Result<SeriesSum> {
        self.series_shifted(z, 0, tol)
    }

    /// Series summed in log space; valid for any `|z|` whose term count stays
    /// under the cap. Used as the reference value far outside the double range.
    pub fn series_scaled(&self, z: Complex64, tol: f64) -> Result<ScaledSeriesSum> {
        let r = z.norm();
        let n0 = self.first_index();
        if r == 0.0 {
            return Ok(ScaledSeriesSum {
                value: ScaledComplex::from_real(self.coeff(0)),
                rounding: 0.0,
                terms: 1,
            });
        }
        let ln_r = r.ln();
        let theta = z.arg();
        let warmup = self.warmup();
        let mut ln_terms: Vec<f64> = Vec::new();
        let mut lmax = f64::NEG_INFINITY;
        let mut n = n0;
        // Log of the target tail size; tightened once the sum is known.
        let mut target = f64::INFINITY;
        for _pass in 0..4 {
            loop {
                if ln_terms.len() >= TERM_CAP {
                    return Err(LabError::NonConvergence { terms: TERM_CAP });
                }
                let l = self.ln_coeff(n) + n as f64 * ln_r;
                ln_terms.push(l);
                lmax = lmax.max(l);
                let q = r * self.ratio(n + 1);
                n += 1;
                if n > warmup && q < 1.0 {
                    let tail = self.ln_coeff(n) + n as f64 * ln_r - (1.0 - q).ln();
                    let goal = target.min(lmax + tol.ln() - 20.0);
                    if tail <= goal {
                        break;
                    }
                }
            }
            let mut acc = CompensatedSum::new();
            let mut ln_max_abs: f64 = 0.0;
            for (i, &l) in ln_terms.iter().enumerate() {
                let k = (n0 + i) as f64;
                acc.add(Complex64::from_polar((l - lmax).exp(), k * theta));
                ln_max_abs = ln_max_abs.max(l.abs());
            }
            let sum = acc.value();
            let tail_ln = self.ln_coeff(n) + n as f64 * ln_r - lmax;
            if sum.norm() == 0.0 || tail_ln <= tol.ln() + sum.norm().ln() {
                // Per-term relative error: ln a_n carries ε|l_n|, the phase ε n|θ|.
                let per_term = f64::EPSILON * (4.0 + ln_max_abs + n as f64 * theta.abs());
                return Ok(ScaledSeriesSum {
                    value: ScaledComplex::new(sum, lmax),
                    rounding: per_term * acc.abs_sum() / sum.norm(),
                    terms: ln_terms.len(),
                });
            }
            target = lmax + tol.ln() + sum.norm().ln();
        }
        Err(LabError::NonConvergence { terms: ln_terms.len() })
    }
}
