//! Relative error of the leading asymptotic term of `E^{(k−1)}_{1/m,1/m}`
//! along rays inside the sector.

use std::f64::consts::PI;

use focklab::mlf::{asymptotic_check, crossover_self_check, Reference};
use focklab::C64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, Summary, Table};

pub const KEYS: &[&str] = &["ml.m", "ml.k", "ml.rays", "ml.radii"];

/// Rows at `m = 1`, `k ≥ 1` compare `e^z` with itself, so only rounding remains.
const M1_TOL: f64 = 1e-12;
/// Expansion and direct evaluation must agree on the crossover band.
const CROSSOVER_TOL: f64 = 1e-4;
/// Leading-term error on the positive axis at `m = 2`, by `|z|`.
const M2_AXIS: &[(f64, f64)] = &[(4.0, 5e-2), (8.0, 5e-3)];
/// Relative slack allowed when checking monotone decay along a ray.
const MONOTONE_SLACK: f64 = 1e-9;

struct Row {
    m: f64,
    k: usize,
    ray: f64,
    r: f64,
    error: f64,
    reference: Reference,
}

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS])?;
    let ms = cfg.get_list("ml.m", &[1.0, 1.5, 2.0, 3.0])?;
    let ks = cfg.get_list("ml.k", &[0usize, 1, 2])?;
    let rays = cfg.get_list("ml.rays", &[0.0, 0.5])?;
    let radii = cfg.get_list("ml.radii", &[4.0, 6.0, 8.0, 12.0])?;
    if let Some(m) = ms.iter().find(|&&m| !(m >= 1.0)) {
        return Err(CliError::Config(format!("key `ml.m`: m = {m} is below 1")));
    }
    if let Some(f) = rays.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(CliError::Config(format!(
            "key `ml.rays`: fraction {f} is outside [0, 1]"
        )));
    }
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(
            "key `ml.radii`: radii must be positive and increasing".into(),
        ));
    }

    let mut cases = Vec::new();
    for &m in &ms {
        for &k in &ks {
            for &ray in &rays {
                for &r in &radii {
                    cases.push((m, k, ray, r));
                }
            }
        }
    }
    let rows: Vec<Row> = cases
        .par_iter()
        .map(|&(m, k, ray, r)| {
            let z = C64::from_polar(r, ray * PI / (2.0 * m));
            let check = asymptotic_check(m, k, z)?;
            Ok(Row {
                m,
                k,
                ray,
                r,
                error: check.relative_error,
                reference: check.reference,
            })
        })
        .collect::<Result<_, focklab::LabError>>()?;

    let mut table = Table::new(&["m", "k", "ray_fraction", "theta", "r", "relative_error", "reference"]);
    for row in &rows {
        table.push(vec![
            num(row.m),
            json!(row.k),
            num(row.ray),
            num(row.ray * PI / (2.0 * row.m)),
            num(row.r),
            num(row.error),
            json!(match row.reference {
                Reference::Series => "series",
                Reference::Integral => "integral",
            }),
        ]);
    }

    let mut summary = Summary::new("ml-validate");
    let exact = |r: &Row| r.m == 1.0 && r.k >= 1;
    let m1_worst = rows.iter().filter(|r| exact(r)).map(|r| r.error).reduce(f64::max);
    if let Some(worst) = m1_worst {
        summary.check("m1_closed_form", worst <= M1_TOL, num(M1_TOL), num(worst));
    }
    // Along each ray the error must not grow with |z|.
    let mut increases = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let same_ray = a.m == b.m && a.k == b.k && a.ray == b.ray;
        if same_ray && !exact(a) && b.error > a.error * (1.0 + MONOTONE_SLACK) {
            increases.push(format!("m={} k={} ray={} r={}", b.m, b.k, b.ray, b.r));
        }
    }
    summary.check("monotone_along_rays", increases.is_empty(), json!(0), json!(increases));
    for &m in ms.iter().filter(|&&m| m != 1.0) {
        let gap = crossover_self_check(m)?;
        summary.check(
            format!("crossover_agreement m={m}"),
            gap <= CROSSOVER_TOL,
            num(CROSSOVER_TOL),
            num(gap),
        );
    }
    for &(r, tol) in M2_AXIS {
        for row in rows.iter().filter(|row| row.m == 2.0 && row.ray == 0.0 && row.r == r) {
            summary.check(
                format!("m2_axis k={} r={r}", row.k),
                row.error <= tol,
                num(tol),
                num(row.error),
            );
        }
    }
    Ok((table, summary))
}
