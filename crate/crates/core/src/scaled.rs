//! Overflow-safe complex numbers of the form `mantissa · e^{log_scale}`.
//!
//! Kernel values grow like `e^{z^m}`, which leaves double range long before
//! the quadrature radii of interest are exhausted. Values are normalized so
//! that `0.5 ≤ |mantissa| < 2`; zero is stored with `log_scale = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Largest log-scale for which [`ScaledComplex::to_complex`] hands out a raw value.
pub const RAW_LOG_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    mantissa: Complex64,
    log_scale: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(0.0, 0.0),
        log_scale: 0.0,
    };

    pub const ONE: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(1.0, 0.0),
        log_scale: 0.0,
    };

    /// Builds `mantissa · e^{log_scale}` and normalizes it.
    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        let r = mantissa.norm();
        if r == 0.0 || !r.is_finite() || !log_scale.is_finite() {
            if r == 0.0 || log_scale == f64::NEG_INFINITY {
                return Self::ZERO;
            }
            // Non-finite input is kept as-is so that it propagates visibly.
            return Self { mantissa, log_scale };
        }
        let shift = r.ln();
        Self {
            mantissa: mantissa / r,
            log_scale: log_scale + shift,
        }
        .renormalized()
    }

    fn renormalized(mut self) -> Self {
        // |mantissa| is 1 here up to rounding; nudge into [0.5, 2).
        let r = self.mantissa.norm();
        if !(0.5..2.0).contains(&r) {
            let s = r.ln();
            self.mantissa /= r;
            self.log_scale += s;
        }
        self
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0.0)
    }

    /// `e^{w}` for complex `w` without ever forming the exponential.
    pub fn exp(w: Complex64) -> Self {
        Self::new(Complex64::from_polar(1.0, w.im), w.re)
    }

    /// Value with modulus `e^{ln_abs}` and argument `arg`.
    pub fn from_log_polar(ln_abs: f64, arg: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self::new(Complex64::from_polar(1.0, arg), ln_abs)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm() == 0.0
    }

    /// `ln |value|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    pub fn arg(&self) -> f64 {
        self.mantissa.arg()
    }

    /// Raw complex value; only offered while the scale is below [`RAW_LOG_LIMIT`].
    pub fn to_complex(&self) -> Result<Complex64> {
        if self.log_scale >= RAW_LOG_LIMIT {
            return Err(LabError::Overflow {
                log_magnitude: self.ln_abs(),
            });
        }
        Ok(self.to_complex_lossy())
    }

    /// Raw complex value, saturating to infinity on overflow and zero on underflow.
    pub fn to_complex_lossy(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.mantissa * self.log_scale.exp()
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            log_scale: self.log_scale,
        }
    }

    pub fn scale(&self, x: f64) -> Self {
        Self::new(self.mantissa * x, self.log_scale)
    }

    pub fn mul_complex(&self, z: Complex64) -> Self {
        Self::new(self.mantissa * z, self.log_scale)
    }

    /// `|value|^p` in log form.
    pub fn ln_abs_pow(&self, p: f64) -> f64 {
        p * self.ln_abs()
    }

    /// Relative distance `|a - b| / |b|`.
    pub fn relative_distance(&self, reference: &ScaledComplex) -> f64 {
        if reference.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let diff = *self - *reference;
        if diff.is_zero() {
            return 0.0;
        }
        (diff.ln_abs() - reference.ln_abs()).exp()
    }
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;

    fn mul(self, rhs: ScaledComplex) -> ScaledComplex {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl Add for ScaledComplex {
    type Output = ScaledComplex;

    fn add(self, rhs: ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_scale >= rhs.log_scale {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = small.log_scale - big.log_scale;
        // Below e^-745 the smaller term cannot affect a normalized mantissa.
        if shift < -745.0 {
            return big;
        }
        Self::new(big.mantissa + small.mantissa * shift.exp(), big.log_scale)
    }
}

impl Neg for ScaledComplex {
    type Output = ScaledComplex;

    fn neg(self) -> ScaledComplex {
        Self {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }
}

impl Sub for ScaledComplex {
    type Output = ScaledComplex;

    fn sub(self, rhs: ScaledComplex) -> ScaledComplex {
        self + (-rhs)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)·e^{}", self.mantissa.re, self.mantissa.im, self.log_scale)
    }
}
