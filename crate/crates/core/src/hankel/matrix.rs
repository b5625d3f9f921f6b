//! Truncated small Hankel operators in the orthonormal monomial basis.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::fock::params::{ln_monomial_norm_sq, MultiIndex, SpaceParams};
use crate::fock::symbol::TaylorSymbol;
use crate::linalg::singular_values;
use crate::scaled::RAW_LOG_LIMIT;
use crate::{CMatrix, C64};

/// Default cap on the matrix dimension `n · B_N`.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Matrix of `h_b` restricted to `|μ|, |λ| ≤ N`.
///
/// Row `(λ, j)` and column `(μ, i)` hold
/// `(b̂_{μ+λ})_{j,i} s_{α,μ+λ} / √(s_{α,μ} s_{α,λ})`, the pairing
/// `⟨h_b(e_μ e_i), e_λ e_j⟩_α` of normalized monomials `e_μ = ζ^μ/√s_{α,μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    pub params: SpaceParams,
    /// Coordinates per multi-index (`n` for `h_b`, `n²` for the lift).
    pub n: usize,
    pub truncation: u32,
    pub entries: CMatrix,
    /// `basis_index[k] = (ν, coordinate)` labels row and column `k`.
    pub basis_index: Vec<(MultiIndex, usize)>,
}

/// `ln(s_{μ+λ} / √(s_μ s_λ))`.
fn ln_entry_scale(params: &SpaceParams, mu: &MultiIndex, lam: &MultiIndex) -> f64 {
    ln_monomial_norm_sq(params, &mu.add(lam))
        - 0.5 * (ln_monomial_norm_sq(params, mu) + ln_monomial_norm_sq(params, lam))
}

/// `c · e^{ln_scale}` without forming `e^{ln_scale}` alone.
fn scaled_entry(c: C64, ln_scale: f64) -> Result<C64> {
    if c == C64::new(0.0, 0.0) {
        return Ok(c);
    }
    if ln_scale.abs() < RAW_LOG_LIMIT {
        return Ok(c * ln_scale.exp());
    }
    let ln = c.norm().ln() + ln_scale;
    if ln >= RAW_LOG_LIMIT {
        return Err(LabError::Overflow { log_magnitude: ln });
    }
    Ok(C64::from_polar(ln.exp(), c.arg()))
}

/// Block `(b̂_{μ+λ}) s_{α,μ+λ}/√(s_{α,μ} s_{α,λ})`; zero outside the support.
pub fn hankel_entry(params: &SpaceParams, b: &TaylorSymbol, mu: &MultiIndex, lam: &MultiIndex) -> Result<CMatrix> {
    let (rows, cols) = b.shape();
    let kappa = mu.add(lam);
    let Some(coef) = b.coeff(&kappa) else {
        return Ok(CMatrix::zeros(rows, cols));
    };
    let ln_scale = ln_entry_scale(params, mu, lam);
    let mut out = CMatrix::zeros(rows, cols);
    for (o, &c) in out.iter_mut().zip(coef.iter()) {
        *o = scaled_entry(c, ln_scale)?;
    }
    Ok(out)
}

fn check_size(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(LabError::SizeLimit { size, cap });
    }
    Ok(())
}

/// `build_hankel` with the default size cap.
pub fn build_hankel(params: &SpaceParams, b: &TaylorSymbol, n_trunc: u32) -> Result<HankelMatrix> {
    build_hankel_capped(params, b, n_trunc, DEFAULT_SIZE_CAP)
}

pub fn build_hankel_capped(params: &SpaceParams, b: &TaylorSymbol, n_trunc: u32, cap: usize) -> Result<HankelMatrix> {
    params.validate()?;
    if b.dim() != params.d {
        return Err(LabError::Domain("symbol dimension differs from d".into()));
    }
    if !b.is_square() {
        return Err(LabError::Domain("Hankel symbols must be square".into()));
    }
    let n = b.n();
    let count = MultiIndex::count_up_to(params.d, n_trunc);
    check_size(n * count, cap)?;
    let basis = MultiIndex::all_up_to(params.d, n_trunc);
    let ln_s: Vec<f64> = basis.iter().map(|nu| ln_monomial_norm_sq(params, nu)).collect();
    // One block row per λ, assembled in parallel and placed in order.
    let rows: Vec<Result<Vec<(usize, CMatrix)>>> = basis
        .par_iter()
        .enumerate()
        .map(|(li, lam)| {
            let mut blocks = Vec::new();
            for (mi, mu) in basis.iter().enumerate() {
                let kappa = mu.add(lam);
                if let Some(coef) = b.coeff(&kappa) {
                    let ln_scale = ln_monomial_norm_sq(params, &kappa) - 0.5 * (ln_s[mi] + ln_s[li]);
                    let mut blk = CMatrix::zeros(n, n);
                    for (o, &c) in blk.iter_mut().zip(coef.iter()) {
                        *o = scaled_entry(c, ln_scale)?;
                    }
                    blocks.push((mi, blk));
                }
            }
            Ok(blocks)
        })
        .collect();
    let mut entries = CMatrix::zeros(n * count, n * count);
    for (li, row) in rows.into_iter().enumerate() {
        for (mi, blk) in row? {
            entries.view_mut((li * n, mi * n), (n, n)).copy_from(&blk);
        }
    }
    let basis_index = basis
        .into_iter()
        .flat_map(|nu| (0..n).map(move |i| (nu.clone(), i)))
        .collect();
    Ok(HankelMatrix {
        params: *params,
        n,
        truncation: n_trunc,
        entries,
        basis_index,
    })
}

/// Matrix of `h_{T(b)}` on `F²_{m,α}(S²(C^n))`, `T(b)(z)S = b(z)S`.
///
/// Coordinates are the matrix units `E_{a,c}` (coordinate `a·n + c`), which
/// are orthonormal for the Hilbert–Schmidt inner product. Since
/// `b E_{a,c} = Σ_r b_{r,a} E_{r,c}`, the column index `c` is preserved and the
/// result is `n` copies of [`build_hankel`] in a permuted basis.
pub fn lift_t(params: &SpaceParams, b: &TaylorSymbol, n_trunc: u32) -> Result<HankelMatrix> {
    lift_t_capped(params, b, n_trunc, DEFAULT_SIZE_CAP)
}

pub fn lift_t_capped(params: &SpaceParams, b: &TaylorSymbol, n_trunc: u32, cap: usize) -> Result<HankelMatrix> {
    let n = b.n();
    let count = MultiIndex::count_up_to(params.d, n_trunc);
    check_size(n * n * count, cap)?;
    let h = build_hankel_capped(params, b, n_trunc, usize::MAX)?;
    let nn = n * n;
    let mut entries = CMatrix::zeros(nn * count, nn * count);
    for li in 0..count {
        for mi in 0..count {
            let blk = h.entries.view((li * n, mi * n), (n, n));
            if blk.iter().all(|c| *c == C64::new(0.0, 0.0)) {
                continue;
            }
            for r in 0..n {
                for a in 0..n {
                    for c in 0..n {
                        entries[(li * nn + r * n + c, mi * nn + a * n + c)] = blk[(r, a)];
                    }
                }
            }
        }
    }
    let basis_index = MultiIndex::all_up_to(params.d, n_trunc)
        .into_iter()
        .flat_map(|nu| (0..nn).map(move |k| (nu.clone(), k)))
        .collect();
    Ok(HankelMatrix {
        params: *params,
        n: nn,
        truncation: n_trunc,
        entries,
        basis_index,
    })
}

impl HankelMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        singular_values(&self.entries).first().copied().unwrap_or(0.0)
    }

    /// The `top_k` largest singular values, decreasing.
    pub fn singular_spectrum(&self, top_k: usize) -> Vec<f64> {
        let mut s = singular_values(&self.entries);
        s.truncate(top_k);
        s
    }

    /// Writes the entries as row-major little-endian `(re, im)` float64 pairs
    /// to `path` and a JSON description to `path` with `.json` appended.
    pub fn export(&self, path: &Path) -> Result<()> {
        let size = self.size();
        let mut bytes = Vec::with_capacity(size * size * 16);
        for r in 0..size {
            for c in 0..size {
                let v = self.entries[(r, c)];
                bytes.extend_from_slice(&v.re.to_le_bytes());
                bytes.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        fs::File::create(path)?.write_all(&bytes)?;
        let sidecar = Sidecar {
            layout: "row-major complex128 little-endian (re, im)",
            rows: size,
            cols: size,
            d: self.params.d,
            m: self.params.m,
            alpha: self.params.alpha,
            n: self.n,
            truncation: self.truncation,
            basis_index: self
                .basis_index
                .iter()
                .map(|(nu, i)| BasisLabel {
                    nu: nu.as_slice().to_vec(),
                    coordinate: *i,
                })
                .collect(),
        };
        let mut side = path.as_os_str().to_owned();
        side.push(".json");
        fs::write(Path::new(&side), serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Sidecar {
    layout: &'static str,
    rows: usize,
    cols: usize,
    d: usize,
    m: f64,
    alpha: f64,
    n: usize,
    truncation: u32,
    basis_index: Vec<BasisLabel>,
}

#[derive(Serialize)]
struct BasisLabel {
    nu: Vec<u32>,
    coordinate: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn seg() -> SpaceParams {
        SpaceParams::new(1, 1.0, 1.0).unwrap()
    }

    fn scalar(terms: &[(Vec<u32>, C64)], deg: u32) -> TaylorSymbol {
        TaylorSymbol::scalar(1, deg, terms).unwrap()
    }

    #[test]
    fn entry_examples() {
        let p = seg();
        let id = TaylorSymbol::identity(1, 2);
        assert_eq!(
            hankel_entry(&p, &id, &mi(&[0]), &mi(&[0])).unwrap(),
            CMatrix::identity(2, 2)
        );
        let z = scalar(&[(vec![1], c(1.0, 0.0))], 1);
        assert!((hankel_entry(&p, &z, &mi(&[0]), &mi(&[1])).unwrap()[(0, 0)] - 1.0).norm() < 1e-15);
        let z2 = scalar(&[(vec![2], c(1.0, 0.0))], 2);
        assert!((hankel_entry(&p, &z2, &mi(&[1]), &mi(&[1])).unwrap()[(0, 0)] - 2.0).norm() < 1e-14);
    }

    #[test]
    fn small_matrices() {
        let p = seg();
        let one = TaylorSymbol::identity(1, 1);
        let h = build_hankel(&p, &one, 4).unwrap();
        assert_eq!(h.entries.iter().filter(|v| v.norm() > 0.0).count(), 1);
        assert!((h.operator_norm() - 1.0).abs() < 1e-14);
        let z = scalar(&[(vec![1], c(1.0, 0.0))], 1);
        let h = build_hankel(&p, &z, 1).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(h.entries, expected);
        for n_trunc in 1..6 {
            assert!((build_hankel(&p, &z, n_trunc).unwrap().operator_norm() - 1.0).abs() < 1e-14);
        }
        let zero = TaylorSymbol::zero(1, 1, 3);
        assert!(build_hankel(&p, &zero, 5)
            .unwrap()
            .entries
            .iter()
            .all(|v| v.norm() == 0.0));
    }

    #[test]
    fn scalar_matrix_is_symmetric() {
        let p = SpaceParams::new(2, 1.5, 0.7).unwrap();
        let b = TaylorSymbol::random_decay(2, 1, 4, 0.9, 8);
        let h = build_hankel(&p, &b, 4).unwrap();
        assert!((&h.entries - h.entries.transpose()).norm() < 1e-14 * h.entries.norm());
    }

    #[test]
    fn block_diagonal_symbol_norm_is_max() {
        let p = seg();
        let a = TaylorSymbol::exp_quadratic(1, 1, 0.1, 40);
        let b = scalar(&[(vec![1], c(0.5, 0.0)), (vec![3], c(0.0, 0.2))], 3);
        let both = TaylorSymbol::block_diag(&a, &b);
        let (na, nb) = (
            build_hankel(&p, &a, 12).unwrap().operator_norm(),
            build_hankel(&p, &b, 12).unwrap().operator_norm(),
        );
        let nab = build_hankel(&p, &both, 12).unwrap().operator_norm();
        assert!((nab - na.max(nb)).abs() < 1e-12);
    }

    #[test]
    fn lift_is_direct_sum() {
        let p = SpaceParams::new(1, 2.0, 1.0).unwrap();
        let b = TaylorSymbol::random_decay(1, 2, 11, 0.8, 10);
        let h = build_hankel(&p, &b, 6).unwrap();
        let l = lift_t(&p, &b, 6).unwrap();
        assert_eq!(l.size(), 2 * h.size());
        let (sh, sl) = (h.singular_spectrum(usize::MAX), l.singular_spectrum(usize::MAX));
        for (k, s) in sh.iter().enumerate() {
            assert!((sl[2 * k] - s).abs() < 1e-12 && (sl[2 * k + 1] - s).abs() < 1e-12);
        }
        let one = TaylorSymbol::identity(1, 1);
        let l1 = lift_t(&p, &one, 3).unwrap();
        assert_eq!(l1.entries, build_hankel(&p, &one, 3).unwrap().entries);
    }

    #[test]
    fn size_cap_is_enforced() {
        let p = SpaceParams::new(2, 1.0, 1.0).unwrap();
        let b = TaylorSymbol::identity(2, 4);
        assert_eq!(build_hankel_capped(&p, &b, 20, 1000).unwrap().size(), 924);
        assert_eq!(
            build_hankel_capped(&p, &b, 20, 900).unwrap_err(),
            LabError::SizeLimit { size: 924, cap: 900 }
        );
    }

    #[test]
    fn export_writes_matrix_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.bin");
        let h = build_hankel(&seg(), &scalar(&[(vec![1], c(1.0, 0.0))], 1), 2).unwrap();
        h.export(&path).unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), 9 * 16);
        let side: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("h.bin.json")).unwrap()).unwrap();
        assert_eq!(side["rows"], 3);
        assert_eq!(side["basis_index"][2]["nu"][0], 2);
    }
}
