//! Dense real polynomials, the `p_k` family generated by the derivative
//! recursion of `m z^{m-1} e^{z^m}`, and Taylor truncation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `Σ coeffs[l] x^l`, with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^l` (zero past the degree).
    pub fn coeff(&self, l: usize) -> f64 {
        self.coeffs.get(l).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(l, &c)| l as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|l| self.coeff(l) + other.coeff(l)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `x ↦ p(s x)`.
    pub fn compose_scale(&self, s: f64) -> Self {
        let mut pow = 1.0;
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let v = c * pow;
                    pow *= s;
                    v
                })
                .collect(),
        )
    }

    /// Multiplies by `x`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Maximum absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.abs()))
    }
}

/// `p_k` from `p_0 = 1`, `p_{k+1}(x) = (m x - k) p_k(x) + m x p_k'(x)`.
///
/// These satisfy `d^{k-1}/dz^{k-1} (m z^{m-1} e^{z^m}) = p_k(z^m) z^{-k} e^{z^m}`.
pub fn p_poly(m: f64, k: usize) -> RealPolynomial {
    let mut p = RealPolynomial::constant(1.0);
    for j in 0..k {
        let mx_p = p.shift_up().scale(m);
        let next = mx_p.add(&p.scale(-(j as f64))).add(&p.derivative().shift_up().scale(m));
        p = next;
    }
    p
}

/// All of `p_0, ..., p_k`.
pub fn p_family(m: f64, k: usize) -> Vec<RealPolynomial> {
    let mut out = Vec::with_capacity(k + 1);
    let mut p = RealPolynomial::constant(1.0);
    for j in 0..=k {
        out.push(p.clone());
        if j < k {
            p = p
                .shift_up()
                .scale(m)
                .add(&p.scale(-(j as f64)))
                .add(&p.derivative().shift_up().scale(m));
        }
    }
    out
}

/// Taylor polynomial `T_k f` of degree `k` from power-series coefficients;
/// `T_{-1} f = T_{-2} f = 0`.
///
/// Panics if fewer than `k + 1` coefficients are supplied for `k ≥ 0`.
pub fn taylor_truncate(coeffs: &[f64], k: i64) -> RealPolynomial {
    assert!(k >= -2, "Taylor truncation order must be at least -2");
    if k < 0 {
        return RealPolynomial::zero();
    }
    let k = k as usize;
    assert!(coeffs.len() > k, "need {} coefficients, got {}", k + 1, coeffs.len());
    RealPolynomial::new(coeffs[..=k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_p_polynomials() {
        for &m in &[1.0, 1.5, 2.0, 3.0] {
            assert_eq!(p_poly(m, 0), RealPolynomial::constant(1.0));
            assert_eq!(p_poly(m, 1).coeffs(), &[0.0, m]);
            let p2 = p_poly(m, 2);
            assert_relative_eq!(p2.coeff(2), m * m, epsilon = 1e-15);
            assert_relative_eq!(p2.coeff(1), m * (m - 1.0), epsilon = 1e-15);
            assert_eq!(p2.coeff(0), 0.0);
        }
    }

    #[test]
    fn p_family_matches_single() {
        let fam = p_family(2.5, 6);
        for (k, p) in fam.iter().enumerate() {
            assert_eq!(p, &p_poly(2.5, k));
        }
    }

    #[test]
    fn p_invariants() {
        for &m in &[1.0, 1.5, 2.0, 3.0] {
            for k in 1..=8usize {
                let p = p_poly(m, k);
                assert_eq!(p.degree(), Some(k));
                assert_eq!(p.coeff(0), 0.0);
                assert_relative_eq!(p.leading(), m.powi(k as i32), max_relative = 1e-14);
                let bound = (k as f64).powi(k as i32) * (m + 1.0).powi(k as i32);
                assert!(p.max_abs_coeff() <= bound);
            }
        }
    }

    #[test]
    fn p_recursion_is_derivative_of_exponential_form() {
        // d/dz [p_k(z^m) z^{-k} e^{z^m}] = p_{k+1}(z^m) z^{-k-1} e^{z^m}, checked by
        // central differences at a real point.
        let m = 1.7;
        let f = |k: usize, z: f64| p_poly(m, k).eval(z.powf(m)) * z.powi(-(k as i32)) * z.powf(m).exp();
        for k in 1..5 {
            let z = 1.3;
            let h = 1e-5;
            let fd = (f(k, z + h) - f(k, z - h)) / (2.0 * h);
            assert_relative_eq!(fd, f(k + 1, z), max_relative = 1e-8);
        }
    }

    #[test]
    fn taylor_truncation() {
        let exp_coeffs: Vec<f64> = (0..10)
            .scan(1.0, |f, n| {
                let v = 1.0 / *f;
                *f *= (n + 1) as f64;
                Some(v)
            })
            .collect();
        assert!(taylor_truncate(&exp_coeffs, -1).is_zero());
        assert!(taylor_truncate(&exp_coeffs, -2).is_zero());
        assert_eq!(taylor_truncate(&exp_coeffs, 2).coeffs(), &[1.0, 1.0, 0.5]);
        assert_eq!(taylor_truncate(&exp_coeffs, 0).coeffs(), &[1.0]);
    }

    #[test]
    fn compose_and_mul() {
        let p = RealPolynomial::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.compose_scale(2.0).coeffs(), &[1.0, 4.0, 12.0]);
        let q = RealPolynomial::new(vec![0.0, 1.0]);
        assert_eq!(p.mul(&q), p.shift_up());
        assert_relative_eq!(p.eval(2.0), 17.0);
    }
}
