//! Matrix-valued entire symbols stored as finite Taylor series.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::fock::params::{MultiIndex, SpaceParams};
use crate::{CMatrix, C64};

/// `b(z) = Σ_ν b̂_ν z^ν` with `rows × cols` coefficients and `|ν| ≤ max_degree`.
///
/// Hankel symbols are square (`n × n`); columns (`n × 1`) represent vector-valued
/// functions such as the test inputs of a Hankel form.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSymbol {
    d: usize,
    rows: usize,
    cols: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, CMatrix>,
}

impl TaylorSymbol {
    /// Zero symbol with square `n × n` coefficients.
    pub fn zero(d: usize, n: usize, max_degree: u32) -> Self {
        Self::zero_shaped(d, n, n, max_degree)
    }

    pub fn zero_shaped(d: usize, rows: usize, cols: usize, max_degree: u32) -> Self {
        assert!(d >= 1 && rows >= 1 && cols >= 1, "dimensions must be positive");
        Self {
            d,
            rows,
            cols,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Sets `b̂_ν`; zero matrices are dropped from the support.
    pub fn insert(&mut self, nu: MultiIndex, matrix: CMatrix) -> Result<()> {
        if nu.dim() != self.d {
            return Err(LabError::Symbol(format!(
                "multi-index {nu} has dimension ≠ d = {}",
                self.d
            )));
        }
        if nu.degree() > self.max_degree {
            return Err(LabError::Symbol(format!(
                "multi-index {nu} exceeds max_degree {}",
                self.max_degree
            )));
        }
        if matrix.shape() != (self.rows, self.cols) {
            return Err(LabError::Symbol(format!(
                "coefficient at {nu} has shape {:?}, expected {:?}",
                matrix.shape(),
                (self.rows, self.cols)
            )));
        }
        if matrix.iter().all(|c| *c == C64::new(0.0, 0.0)) {
            self.coeffs.remove(&nu);
        } else {
            self.coeffs.insert(nu, matrix);
        }
        Ok(())
    }

    /// Scalar symbol from `(ν, coefficient)` pairs.
    pub fn scalar(d: usize, max_degree: u32, terms: &[(Vec<u32>, C64)]) -> Result<Self> {
        let mut s = Self::zero(d, 1, max_degree);
        for (nu, c) in terms {
            s.insert(MultiIndex::new(nu.clone()), CMatrix::from_element(1, 1, *c))?;
        }
        Ok(s)
    }

    /// `b ≡ I_n`.
    pub fn identity(d: usize, n: usize) -> Self {
        let mut s = Self::zero(d, n, 0);
        s.coeffs.insert(MultiIndex::zero(d), CMatrix::identity(n, n));
        s
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Target dimension `n` (number of rows).
    pub fn n(&self) -> usize {
        self.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Largest degree actually present (0 for the zero symbol).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, nu: &MultiIndex) -> Option<&CMatrix> {
        self.coeffs.get(nu)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &CMatrix)> {
        self.coeffs.iter()
    }

    /// `b(z)`.
    pub fn eval(&self, z: &[C64]) -> CMatrix {
        assert_eq!(z.len(), self.d, "point dimension must equal d");
        let mut out = CMatrix::zeros(self.rows, self.cols);
        if self.coeffs.is_empty() {
            return out;
        }
        let top = self.degree() as usize;
        let powers: Vec<Vec<C64>> = z
            .iter()
            .map(|&zj| {
                let mut p = Vec::with_capacity(top + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=top {
                    p.push(acc);
                    acc *= zj;
                }
                p
            })
            .collect();
        for (nu, b) in &self.coeffs {
            let mono = nu
                .as_slice()
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (j, &k)| acc * powers[j][k as usize]);
            out.zip_apply(b, |o, c| *o += c * mono);
        }
        out
    }

    /// Scalar value of a `1 × 1` symbol.
    pub fn eval_scalar(&self, z: &[C64]) -> C64 {
        assert_eq!(self.shape(), (1, 1), "eval_scalar needs a 1 × 1 symbol");
        self.eval(z)[(0, 0)]
    }

    /// Coefficientwise map `b̂_ν ↦ f(ν) b̂_ν`.
    pub fn map_multiplier(&self, f: impl Fn(&MultiIndex) -> f64) -> Self {
        let mut out = Self::zero_shaped(self.d, self.rows, self.cols, self.max_degree);
        for (nu, b) in &self.coeffs {
            let t = f(nu);
            if t != 0.0 {
                out.coeffs.insert(nu.clone(), b * C64::new(t, 0.0));
            }
        }
        out
    }

    /// `R^k b`: `b̂_ν ↦ |ν|^k b̂_ν`.
    pub fn radial_derivative(&self, k: u32) -> Self {
        self.map_multiplier(|nu| (nu.degree() as f64).powi(k as i32))
    }

    /// `b_r(z) = b(rz)`: `b̂_ν ↦ r^{|ν|} b̂_ν`.
    pub fn dilate(&self, r: f64) -> Self {
        assert!(r > 0.0 && r <= 1.0, "dilation factor must lie in (0, 1]");
        self.map_multiplier(|nu| r.powi(nu.degree() as i32))
    }

    /// Fejér means `b̂_ν ↦ Π_j max(0, 1 - ν_j/(N+1)) b̂_ν`.
    pub fn fejer_smooth(&self, n: u32) -> Self {
        let denom = n as f64 + 1.0;
        self.map_multiplier(|nu| {
            nu.as_slice()
                .iter()
                .map(|&k| (1.0 - k as f64 / denom).max(0.0))
                .product()
        })
    }

    /// `self + λ other`.
    pub fn add_scaled(&self, other: &Self, lambda: C64) -> Self {
        assert_eq!(
            (self.d, self.shape()),
            (other.d, other.shape()),
            "symbols must be compatible"
        );
        let mut out = self.clone();
        out.max_degree = self.max_degree.max(other.max_degree);
        for (nu, b) in &other.coeffs {
            let sum = match out.coeffs.get(nu) {
                Some(a) => a + b * lambda,
                None => b * lambda,
            };
            out.coeffs.remove(nu);
            out.insert(nu.clone(), sum).expect("degree and shape checked");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    /// `z ↦ U b(z)`.
    pub fn left_mul(&self, u: &CMatrix) -> Self {
        let mut out = Self::zero_shaped(self.d, u.nrows(), self.cols, self.max_degree);
        for (nu, b) in &self.coeffs {
            out.insert(nu.clone(), u * b).expect("shape follows from the product");
        }
        out
    }

    /// `diag(a, b)` acting on `C^{n_a} ⊕ C^{n_b}`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        assert_eq!(a.d, b.d, "symbols must share d");
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        let mut out = Self::zero_shaped(a.d, r, c, a.max_degree.max(b.max_degree));
        let keys: Vec<MultiIndex> = a.coeffs.keys().chain(b.coeffs.keys()).cloned().collect();
        for nu in keys {
            let mut m = CMatrix::zeros(r, c);
            if let Some(x) = a.coeffs.get(&nu) {
                m.view_mut((0, 0), (a.rows, a.cols)).copy_from(x);
            }
            if let Some(y) = b.coeffs.get(&nu) {
                m.view_mut((a.rows, a.cols), (b.rows, b.cols)).copy_from(y);
            }
            out.insert(nu, m).expect("shapes are consistent");
        }
        out
    }

    /// `e^{c Σ_j z_j²} I_n` truncated at total degree `max_degree`.
    pub fn exp_quadratic(d: usize, n: usize, c: f64, max_degree: u32) -> Self {
        let mut s = Self::zero(d, n, max_degree);
        for kappa in MultiIndex::all_up_to(d, max_degree / 2) {
            let k = kappa.degree() as i32;
            let coef = c.powi(k) * (-kappa.ln_factorial()).exp();
            let nu = MultiIndex::new(kappa.as_slice().iter().map(|&x| 2 * x).collect());
            s.insert(nu, CMatrix::identity(n, n) * C64::new(coef, 0.0))
                .expect("degree within bound");
        }
        s
    }

    /// `z^ν I_n`.
    pub fn monomial(n: usize, nu: &MultiIndex) -> Self {
        let mut s = Self::zero(nu.dim(), n, nu.degree());
        s.insert(nu.clone(), CMatrix::identity(n, n))
            .expect("degree within bound");
        s
    }

    /// Coefficients `decay^{|ν|} G_ν / √ν!` with independent standard complex
    /// Gaussian entries, seeded for reproducibility.
    pub fn random_decay(d: usize, n: usize, seed: u64, decay: f64, max_degree: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self::zero(d, n, max_degree);
        for nu in MultiIndex::all_up_to(d, max_degree) {
            let scale = decay.powi(nu.degree() as i32) * (-0.5 * nu.ln_factorial()).exp() / std::f64::consts::SQRT_2;
            let m = CMatrix::from_fn(n, n, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re * scale, im * scale)
            });
            s.insert(nu, m).expect("degree within bound");
        }
        s
    }
}

/// One coefficient entry of the symbol file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub nu: Vec<u32>,
    /// Row-major `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Explicit symbol file: `{ d, n, m, alpha, coeffs: [{ nu, matrix }] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub d: usize,
    pub n: usize,
    pub m: f64,
    pub alpha: f64,
    pub coeffs: Vec<CoeffEntry>,
}

/// Named symbol families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    ExpQuadratic {
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_degree: Option<u32>,
    },
    Monomial {
        nu: Vec<u32>,
    },
    RandomDecay {
        seed: u64,
        decay: f64,
        max_degree: u32,
    },
}

impl FamilySpec {
    /// Builds the family member with `n × n` coefficients; `default_degree`
    /// truncates `exp_quadratic` when no degree is given.
    pub fn build(&self, d: usize, n: usize, default_degree: u32) -> Result<TaylorSymbol> {
        match self {
            FamilySpec::ExpQuadratic { c, max_degree } => {
                if !c.is_finite() {
                    return Err(LabError::Symbol("exp_quadratic needs a finite c".into()));
                }
                Ok(TaylorSymbol::exp_quadratic(
                    d,
                    n,
                    *c,
                    max_degree.unwrap_or(default_degree),
                ))
            }
            FamilySpec::Monomial { nu } => {
                if nu.len() != d {
                    return Err(LabError::Symbol(format!(
                        "monomial nu has length {} ≠ d = {d}",
                        nu.len()
                    )));
                }
                Ok(TaylorSymbol::monomial(n, &MultiIndex::new(nu.clone())))
            }
            FamilySpec::RandomDecay {
                seed,
                decay,
                max_degree,
            } => {
                if !(*decay >= 0.0) {
                    return Err(LabError::Symbol("random_decay needs decay ≥ 0".into()));
                }
                Ok(TaylorSymbol::random_decay(d, n, *seed, *decay, *max_degree))
            }
        }
    }
}

/// Either an explicit symbol or a named family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Family(FamilySpec),
    Explicit(SymbolFile),
}

impl SymbolFile {
    pub fn params(&self) -> Result<SpaceParams> {
        SpaceParams::new(self.d, self.m, self.alpha)
    }

    pub fn to_symbol(&self) -> Result<TaylorSymbol> {
        if self.n == 0 {
            return Err(LabError::Symbol("n must be at least 1".into()));
        }
        let max_degree = self.coeffs.iter().map(|c| c.nu.iter().sum::<u32>()).max().unwrap_or(0);
        let mut s = TaylorSymbol::zero(self.d, self.n, max_degree);
        for entry in &self.coeffs {
            if entry.matrix.len() != self.n || entry.matrix.iter().any(|row| row.len() != self.n) {
                return Err(LabError::Symbol(format!(
                    "matrix at {:?} is not {1}×{1}",
                    entry.nu, self.n
                )));
            }
            let m = CMatrix::from_fn(self.n, self.n, |i, j| {
                let [re, im] = entry.matrix[i][j];
                C64::new(re, im)
            });
            let nu = MultiIndex::new(entry.nu.clone());
            if s.coeff(&nu).is_some() {
                return Err(LabError::Symbol(format!("duplicate coefficient at {nu}")));
            }
            s.insert(nu, m)?;
        }
        Ok(s)
    }

    pub fn from_symbol(b: &TaylorSymbol, params: &SpaceParams) -> Self {
        assert!(b.is_square(), "symbol files hold square coefficients");
        let coeffs = b
            .iter()
            .map(|(nu, m)| CoeffEntry {
                nu: nu.as_slice().to_vec(),
                matrix: (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect(),
            })
            .collect();
        Self {
            d: b.dim(),
            n: b.n(),
            m: params.m,
            alpha: params.alpha,
            coeffs,
        }
    }
}

impl SymbolSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let id = TaylorSymbol::identity(2, 3);
        assert_eq!(id.eval(&[c(1.0, 2.0), c(-3.0, 0.5)]), CMatrix::identity(3, 3));
        let z = TaylorSymbol::scalar(1, 1, &[(vec![1], c(1.0, 0.0))]).unwrap();
        assert_eq!(z.eval_scalar(&[c(2.0, 1.0)]), c(2.0, 1.0));
        let q = TaylorSymbol::scalar(1, 2, &[(vec![2], c(0.5, -1.0))]).unwrap();
        assert!((q.eval_scalar(&[c(2.0, 0.0)]) - c(2.0, -4.0)).norm() < 1e-15);
    }

    #[test]
    fn coefficient_operations() {
        let b = TaylorSymbol::scalar(1, 3, &[(vec![0], c(5.0, 0.0)), (vec![3], c(1.0, 0.0))]).unwrap();
        let r = b.radial_derivative(1);
        assert_eq!(r.coeff(&MultiIndex::new(vec![0])), None);
        assert_eq!(r.coeff(&MultiIndex::new(vec![3])).unwrap()[(0, 0)], c(3.0, 0.0));
        let m = CMatrix::from_element(1, 1, c(0.0, 2.0));
        let mut b2 = TaylorSymbol::zero(2, 1, 3);
        b2.insert(MultiIndex::new(vec![2, 1]), m.clone()).unwrap();
        assert_eq!(
            b2.radial_derivative(2).coeff(&MultiIndex::new(vec![2, 1])).unwrap()[(0, 0)],
            c(0.0, 18.0)
        );
        let d = TaylorSymbol::scalar(1, 2, &[(vec![2], c(1.0, 0.0))])
            .unwrap()
            .dilate(0.5);
        assert_eq!(d.coeff(&MultiIndex::new(vec![2])).unwrap()[(0, 0)], c(0.25, 0.0));
        assert_eq!(b.dilate(1.0), b);
    }

    #[test]
    fn fejer_multipliers() {
        let b = TaylorSymbol::scalar(
            1,
            3,
            &[
                (vec![0], c(1.0, 0.0)),
                (vec![1], c(1.0, 0.0)),
                (vec![2], c(1.0, 0.0)),
                (vec![3], c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let f = b.fejer_smooth(2);
        let get = |k: u32| f.coeff(&MultiIndex::new(vec![k])).map(|m| m[(0, 0)].re);
        assert_eq!(get(0), Some(1.0));
        assert!((get(1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((get(2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(get(3), None);
        assert_eq!(b.fejer_smooth(0).support_len(), 1);
    }

    #[test]
    fn exp_quadratic_matches_exponential() {
        let b = TaylorSymbol::exp_quadratic(1, 1, 0.2, 80);
        let z = c(1.3, -0.4);
        assert!((b.eval_scalar(&[z]) - (z * z * 0.2).exp()).norm() < 1e-13);
        let b2 = TaylorSymbol::exp_quadratic(2, 2, 0.1, 40);
        let p = [c(0.5, 0.2), c(-0.7, 0.1)];
        let v = b2.eval(&p);
        let e = ((p[0] * p[0] + p[1] * p[1]) * 0.1).exp();
        assert!((v[(0, 0)] - e).norm() < 1e-13 && v[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn random_decay_is_reproducible() {
        let a = TaylorSymbol::random_decay(2, 2, 7, 0.5, 4);
        let b = TaylorSymbol::random_decay(2, 2, 7, 0.5, 4);
        let c2 = TaylorSymbol::random_decay(2, 2, 8, 0.5, 4);
        assert_eq!(a, b);
        assert_ne!(a, c2);
        assert_eq!(a.support_len(), MultiIndex::count_up_to(2, 4));
    }

    #[test]
    fn json_round_trip_and_families() {
        let params = SpaceParams::new(1, 2.0, 1.0).unwrap();
        let mut b = TaylorSymbol::zero(1, 2, 3);
        b.insert(
            MultiIndex::new(vec![3]),
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)]),
        )
        .unwrap();
        let file = SymbolFile::from_symbol(&b, &params);
        let text = serde_json::to_string(&file).unwrap();
        match SymbolSpec::from_json(&text).unwrap() {
            SymbolSpec::Explicit(f) => {
                assert_eq!(f.to_symbol().unwrap(), b);
                assert_eq!(f.params().unwrap(), params);
            }
            other => panic!("parsed as {other:?}"),
        }
        let fam = SymbolSpec::from_json(r#"{"family": "exp_quadratic", "c": 0.1}"#).unwrap();
        assert!(matches!(fam, SymbolSpec::Family(FamilySpec::ExpQuadratic { .. })));
        let fam = SymbolSpec::from_json(r#"{"family": "monomial", "nu": [1]}"#).unwrap();
        if let SymbolSpec::Family(f) = fam {
            assert_eq!(f.build(1, 1, 10).unwrap().degree(), 1);
        }
        assert!(SymbolSpec::from_json(r#"{"family": "nope"}"#).is_err());
    }

    #[test]
    fn linear_operations() {
        let a = TaylorSymbol::scalar(1, 2, &[(vec![1], c(1.0, 0.0))]).unwrap();
        let b = TaylorSymbol::scalar(1, 2, &[(vec![1], c(1.0, 0.0)), (vec![2], c(3.0, 0.0))]).unwrap();
        let d = b.sub(&a);
        assert_eq!(d.support_len(), 1);
        let bd = TaylorSymbol::block_diag(&a, &b);
        assert_eq!(bd.shape(), (2, 2));
        assert_eq!(bd.eval(&[c(2.0, 0.0)])[(1, 1)], c(14.0, 0.0));
    }
}
