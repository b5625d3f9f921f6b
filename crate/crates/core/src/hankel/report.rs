//! Norm comparison and compactness diagnostics for truncated Hankel matrices.

use serde::Serialize;

use crate::error::{domain, LabError, Result};
use crate::fock::growth::{littleoh_profile, sup_growth_norm, GrowthGrid};
use crate::fock::params::SpaceParams;
use crate::fock::symbol::TaylorSymbol;
use crate::hankel::matrix::build_hankel;

/// Truncation step of the convergence gate.
pub const GATE_STEP: u32 = 5;
/// Relative change allowed across [`GATE_STEP`] degrees.
pub const GATE_TOL: f64 = 0.01;

/// Singular values below this fraction of the largest are numerical noise.
pub const SIGMA_FLOOR: f64 = 1e-12;
/// Geometric decay ratio separating a decaying spectrum from a flat one.
pub const SPECTRAL_RATIO_LIMIT: f64 = 0.95;
/// Profile tails at or above this fraction of the profile peak count as a plateau.
pub const PLATEAU_LEVEL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremAReport {
    pub truncation: u32,
    pub norm_hb: f64,
    pub norm_hb_prev: f64,
    /// `‖b‖_{F^∞_{m,α/2}}` from the refined grid sup.
    pub sup_b_half: f64,
    /// `norm_hb / sup_b_half`.
    pub ratio: f64,
    /// `norm_hb ≤ 2^d sup_b_half`.
    pub upper_ok: bool,
    /// `norm_hb ≤ 2^{d/m} sup_b_half`.
    pub sharp_upper_ok: bool,
    /// `m^d norm_hb / sup_b_half`, the quantity bounded below by the lower estimate.
    pub scaled_lower_ratio: f64,
}

/// Default grid for [`theorem_a_report`].
pub fn default_grid(params: &SpaceParams, b: &TaylorSymbol) -> Result<GrowthGrid> {
    GrowthGrid::for_symbol(b, params, params.alpha / 2.0, 400, 64)
}

/// Compares `‖h_b‖` at truncation `n_trunc` with `‖b‖_{F^∞_{m,α/2}}`.
///
/// The truncated norm must have settled: the norm at `n_trunc − 5` has to agree
/// within 1%.
pub fn theorem_a_report(
    params: &SpaceParams,
    b: &TaylorSymbol,
    n_trunc: u32,
    grid: &GrowthGrid,
) -> Result<TheoremAReport> {
    params.validate()?;
    if grid.dim() != params.d {
        return domain("grid dimension does not match d");
    }
    let n_prev = n_trunc.saturating_sub(GATE_STEP);
    let norm_hb = build_hankel(params, b, n_trunc)?.operator_norm();
    let norm_hb_prev = build_hankel(params, b, n_prev)?.operator_norm();
    if (norm_hb - norm_hb_prev).abs() > GATE_TOL * norm_hb {
        return Err(LabError::NotConverged {
            n: n_trunc as usize,
            n_prev: n_prev as usize,
            current: norm_hb,
            previous: norm_hb_prev,
        });
    }
    let sup_b_half = sup_growth_norm(b, params, params.alpha / 2.0, grid).value;
    let (d, m) = (params.d as f64, params.m);
    let ratio = if sup_b_half > 0.0 { norm_hb / sup_b_half } else { 0.0 };
    Ok(TheoremAReport {
        truncation: n_trunc,
        norm_hb,
        norm_hb_prev,
        sup_b_half,
        ratio,
        upper_ok: norm_hb <= 2f64.powf(d) * sup_b_half,
        sharp_upper_ok: norm_hb <= 2f64.powf(d / m) * sup_b_half,
        scaled_lower_ratio: m.powf(d) * ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessRow {
    pub truncation: u32,
    /// Smallest singular value above `SIGMA_FLOOR · σ_max`.
    pub sigma_tail: f64,
    /// Number of singular values above the floor.
    pub numerical_rank: usize,
    /// `(σ_hi/σ_lo)^{1/(hi−lo)}` over retained indices in `5..=25`.
    pub spectral_ratio: Option<f64>,
    /// Little-oh profile of `b` truncated at degree `2N`, at the largest radius.
    pub littleoh_tail: f64,
    /// Largest value of that profile over the radii.
    pub littleoh_peak: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compact,
    NonCompact,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub rows: Vec<CompactnessRow>,
    /// Profile `(r, value)` at the last truncation.
    pub profile: Vec<(f64, f64)>,
    pub verdict: Verdict,
}

fn spectral_ratio(sv: &[f64], retained: usize) -> Option<f64> {
    let lo = 5;
    let hi = 25.min(retained.saturating_sub(1));
    if hi <= lo {
        return None;
    }
    Some((sv[hi] / sv[lo]).powf(1.0 / (hi - lo) as f64))
}

/// Truncation-level compactness diagnostic along `n_list` with the little-oh
/// profile (β = α/2, k = 0) sampled at `radii`.
///
/// Verdicts:
/// * non-compact when the profile tail stays at or above `PLATEAU_LEVEL` of its peak;
/// * compact when the tail is below that level, the profile does not increase
///   over its last quarter, and the spectrum has stable finite rank or decays
///   geometrically with ratio below `SPECTRAL_RATIO_LIMIT`;
/// * inconclusive otherwise.
pub fn compactness_report(
    params: &SpaceParams,
    b: &TaylorSymbol,
    n_list: &[u32],
    radii: &[f64],
) -> Result<CompactnessReport> {
    params.validate()?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return domain("truncation list must be non-empty and increasing");
    }
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return domain("radii must be non-empty and increasing");
    }
    let beta = params.alpha / 2.0;
    let mut rows = Vec::with_capacity(n_list.len());
    let mut profile = Vec::new();
    for &n in n_list {
        let sv = build_hankel(params, b, n)?.singular_spectrum(usize::MAX);
        let floor = SIGMA_FLOOR * sv.first().copied().unwrap_or(0.0);
        let retained = sv.iter().take_while(|&&s| s > floor && s > 0.0).count();
        let sigma_tail = if retained == 0 { 0.0 } else { sv[retained - 1] };
        let truncated = b.map_multiplier(|nu| if nu.degree() <= 2 * n { 1.0 } else { 0.0 });
        profile = littleoh_profile(&truncated, params, beta, 0, radii);
        let littleoh_peak = profile.iter().map(|p| p.1).fold(0.0, f64::max);
        rows.push(CompactnessRow {
            truncation: n,
            sigma_tail,
            numerical_rank: retained,
            spectral_ratio: spectral_ratio(&sv, retained),
            littleoh_tail: profile.last().map_or(0.0, |p| p.1),
            littleoh_peak,
        });
    }
    let verdict = classify(&rows, &profile);
    Ok(CompactnessReport { rows, profile, verdict })
}

fn classify(rows: &[CompactnessRow], profile: &[(f64, f64)]) -> Verdict {
    let last = rows.last().expect("at least one truncation");
    if last.littleoh_peak == 0.0 {
        return Verdict::Compact;
    }
    if last.littleoh_tail >= PLATEAU_LEVEL * last.littleoh_peak {
        return Verdict::NonCompact;
    }
    let quarter = &profile[profile.len() * 3 / 4..];
    let settling = quarter.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9));
    let finite_rank = rows.len() >= 2 && rows[rows.len() - 2].numerical_rank == last.numerical_rank;
    let decaying = last.spectral_ratio.is_some_and(|r| r < SPECTRAL_RATIO_LIMIT);
    if settling && (finite_rank || decaying) {
        Verdict::Compact
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::params::MultiIndex;
    use crate::C64;

    fn p111() -> SpaceParams {
        SpaceParams::new(1, 1.0, 1.0).unwrap()
    }

    fn radii() -> Vec<f64> {
        (1..=48).map(|k| 0.25 * k as f64).collect()
    }

    #[test]
    fn constant_symbol_ratio_one() {
        for (d, m) in [(1, 1.0), (2, 1.5)] {
            let p = SpaceParams::new(d, m, 0.7).unwrap();
            let b = TaylorSymbol::identity(d, 1);
            let r = theorem_a_report(&p, &b, 6, &default_grid(&p, &b).unwrap()).unwrap();
            assert!((r.ratio - 1.0).abs() < 1e-12);
            assert!(r.upper_ok && r.sharp_upper_ok);
        }
    }

    #[test]
    fn linear_symbol_ratio() {
        let p = p111();
        let b = TaylorSymbol::monomial(1, &MultiIndex::new(vec![1]));
        let r = theorem_a_report(&p, &b, 10, &default_grid(&p, &b).unwrap()).unwrap();
        let expected = 1.0 / (2f64.sqrt() * (-0.5f64).exp());
        assert!((r.ratio - expected).abs() < 1e-9, "{}", r.ratio);
        assert!(r.upper_ok);
    }

    #[test]
    fn gate_rejects_unsettled_norm() {
        let p = p111();
        let b = TaylorSymbol::exp_quadratic(1, 1, 0.24, 120);
        let grid = default_grid(&p, &b).unwrap();
        assert!(matches!(
            theorem_a_report(&p, &b, 8, &grid),
            Err(LabError::NotConverged { .. })
        ));
    }

    #[test]
    fn polynomial_symbol_is_compact() {
        let b = TaylorSymbol::scalar(1, 3, &[(vec![1], C64::new(1.0, 0.0)), (vec![3], C64::new(0.5, 0.0))]).unwrap();
        let r = compactness_report(&p111(), &b, &[10, 20], &radii()).unwrap();
        assert_eq!(r.verdict, Verdict::Compact);
        assert_eq!(r.rows[0].numerical_rank, r.rows[1].numerical_rank);
    }

    #[test]
    fn quadratic_exponential_regimes() {
        let p = p111();
        let compact = TaylorSymbol::exp_quadratic(1, 1, 0.2, 80);
        let r = compactness_report(&p, &compact, &[20, 30, 40], &radii()).unwrap();
        assert_eq!(r.verdict, Verdict::Compact, "{r:?}");
        let boundary = TaylorSymbol::exp_quadratic(1, 1, 0.25, 80);
        let r = compactness_report(&p, &boundary, &[20, 30, 40], &radii()).unwrap();
        assert_eq!(r.verdict, Verdict::NonCompact, "{r:?}");
    }

    #[test]
    fn rejects_bad_lists() {
        let b = TaylorSymbol::identity(1, 1);
        assert!(compactness_report(&p111(), &b, &[5, 5], &radii()).is_err());
        assert!(compactness_report(&p111(), &b, &[5], &[]).is_err());
    }
}
