//! Space parameters, multi-indices and the normalizing constants of `dμ_{m,α}`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, LabError, Result};
use crate::special::{ln_factorial, ln_gamma};
use crate::C64;

/// `(d, m, α)` fixing `F^p_{m,α}(C^d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub d: usize,
    pub m: f64,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn new(d: usize, m: f64, alpha: f64) -> Result<Self> {
        let p = Self { d, m, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return domain("dimension d must be at least 1");
        }
        if !(self.m >= 1.0) || !self.m.is_finite() {
            return domain(format!("m must be a finite real ≥ 1, got {}", self.m));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return domain(format!("alpha must be a finite positive real, got {}", self.alpha));
        }
        Ok(())
    }

    /// Same `(d, m)` with weight parameter `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.d, self.m, alpha)
    }
}

/// Exponent vector `ν ∈ N^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(nu: Vec<u32>) -> Self {
        Self(nu)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// `ν = k e_j`.
    pub fn axis(d: usize, j: usize, k: u32) -> Self {
        let mut nu = vec![0; d];
        nu[j] = k;
        Self(nu)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `|ν|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ln ν!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| ln_factorial(k as u64)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "multi-index dimensions differ");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `ζ^ν`.
    pub fn monomial(&self, z: &[C64]) -> C64 {
        self.0
            .iter()
            .zip(z)
            .fold(C64::new(1.0, 0.0), |acc, (&k, &zj)| acc * zj.powu(k))
    }

    /// All indices with `|ν| ≤ n`, ordered by degree and then reverse-lexicographically
    /// (`(1,0)` before `(0,1)`).
    pub fn all_up_to(d: usize, n: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for deg in 0..=n {
            let mut cur = vec![0u32; d];
            compositions(deg, 0, &mut cur, &mut out);
        }
        out
    }

    /// All indices with `|ν| = n`, in the order of [`all_up_to`](Self::all_up_to).
    pub fn of_degree(d: usize, n: u32) -> Vec<Self> {
        let mut out = Vec::new();
        compositions(n, 0, &mut vec![0u32; d], &mut out);
        out
    }

    /// `#{ν ∈ N^d : |ν| ≤ n} = C(n + d, d)`.
    pub fn count_up_to(d: usize, n: u32) -> usize {
        let mut c: u128 = 1;
        for i in 1..=d as u128 {
            c = c * (n as u128 + i) / i;
        }
        c as usize
    }
}

fn compositions(rest: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    let d = cur.len();
    if pos + 1 == d {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=rest).rev() {
        cur[pos] = k;
        compositions(rest - k, pos + 1, cur, out);
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// `C_m = Γ(d/m)/Γ(d)`.
pub fn c_norm_const(d: usize, m: f64) -> f64 {
    (ln_gamma(d as f64 / m) - ln_gamma(d as f64)).exp()
}

/// `ln c_{m,α}` with `c_{m,α} = m α^{d/m} Γ(d) / (π^d Γ(d/m))`.
pub fn ln_density_const(d: usize, m: f64, alpha: f64) -> f64 {
    let df = d as f64;
    m.ln() + (df / m) * alpha.ln() + ln_gamma(df) - df * PI.ln() - ln_gamma(df / m)
}

/// `c_{m,α}`, the constant making `dμ_{m,α}` a probability measure.
pub fn density_const(d: usize, m: f64, alpha: f64) -> f64 {
    ln_density_const(d, m, alpha).exp()
}

/// `ln s_{α,ν}` with `s_{α,ν} = C_m^{-1} ν! Γ((d+|ν|)/m) / (Γ(d+|ν|) α^{|ν|/m})`.
pub fn ln_monomial_norm_sq(params: &SpaceParams, nu: &MultiIndex) -> f64 {
    let d = params.d as f64;
    let k = nu.degree() as f64;
    let m = params.m;
    nu.ln_factorial() + ln_gamma((d + k) / m)
        - ln_gamma(d + k)
        - (k / m) * params.alpha.ln()
        - (ln_gamma(d / m) - ln_gamma(d))
}

/// `s_{α,ν} = ‖ζ^ν‖²` in `F²_{m,α}`.
pub fn monomial_norm_sq(params: &SpaceParams, nu: &MultiIndex) -> Result<f64> {
    let l = ln_monomial_norm_sq(params, nu);
    if l >= crate::scaled::RAW_LOG_LIMIT {
        return Err(LabError::Overflow { log_magnitude: l });
    }
    Ok(l.exp())
}
