//! `P_α f = f` for random polynomials at deterministic points in a ball.

use std::f64::consts::PI;

use focklab::fock::{SpaceParams, TaylorSymbol};
use focklab::quad::verify_reproducing;
use focklab::C64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, Summary, Table};

pub const KEYS: &[&str] = &[
    "space.alpha",
    "project.cases",
    "project.degree",
    "project.count",
    "project.points",
    "project.z_max",
    "project.decay",
];

const REPRODUCING_TOL: f64 = 1e-8;

/// Golden-angle spiral: radii spread over `(0, z_max]`, phases never repeat.
pub fn ball_points(d: usize, count: usize, z_max: f64) -> Vec<Vec<C64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let rho = z_max * ((k + 1) as f64 / count as f64).sqrt();
            let mut z = Vec::with_capacity(d);
            let mut remaining = rho;
            for j in 0..d {
                let phase = golden * (k * (j + 1) + j) as f64;
                let part = if j + 1 == d {
                    remaining
                } else {
                    let split = (0.5 * PI * ((k + j) as f64 * 0.618_033_988_75).fract()).cos();
                    let v = remaining * split;
                    remaining *= (1.0 - split * split).sqrt();
                    v
                };
                z.push(C64::from_polar(part, phase));
            }
            z
        })
        .collect()
}

fn parse_cases(s: &str) -> Result<Vec<(usize, f64)>, CliError> {
    s.split(',')
        .map(|item| {
            let (d, m) = item.trim().split_once(':').ok_or_else(|| {
                CliError::Config(format!("key `project.cases`: expected `d:m`, got `{}`", item.trim()))
            })?;
            let d = d
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("key `project.cases`: bad d `{d}`")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("key `project.cases`: bad m `{m}`")))?;
            Ok((d, m))
        })
        .collect()
}

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS])?;
    let cases = parse_cases(cfg.raw("project.cases").unwrap_or("1:1, 1:2, 2:1"))?;
    let alpha: f64 = cfg.get("space.alpha", 1.0)?;
    let degree: u32 = cfg.get("project.degree", 6)?;
    let count: u64 = cfg.get("project.count", 3)?;
    let points: usize = cfg.get("project.points", 8)?;
    let z_max: f64 = cfg.get("project.z_max", 2.0)?;
    let decay: f64 = cfg.get("project.decay", 1.0)?;
    let seed = cfg.seed()?;
    if points == 0 || count == 0 || !(z_max > 0.0) {
        return Err(CliError::Config(
            "keys `project.*`: need points, count and z_max positive".into(),
        ));
    }

    let mut jobs = Vec::new();
    for &(d, m) in &cases {
        let params =
            SpaceParams::new(d, m, alpha).map_err(|e| CliError::Config(format!("key `project.cases`: {e}")))?;
        for i in 0..count {
            jobs.push((params, seed.wrapping_add(i)));
        }
    }
    let errors: Vec<f64> = jobs
        .par_iter()
        .map(|(params, s)| {
            let f = TaylorSymbol::random_decay(params.d, 1, *s, decay, degree);
            verify_reproducing(&f, params, &ball_points(params.d, points, z_max))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(&["d", "m", "alpha", "seed", "degree", "points", "z_max", "max_error"]);
    let mut worst = 0.0f64;
    for ((params, s), &err) in jobs.iter().zip(&errors) {
        worst = worst.max(err);
        table.push(vec![
            json!(params.d),
            num(params.m),
            num(params.alpha),
            json!(s),
            json!(degree),
            json!(points),
            num(z_max),
            num(err),
        ]);
    }
    let mut summary = Summary::new("project-check");
    summary.check(
        "reproducing",
        worst <= REPRODUCING_TOL,
        num(REPRODUCING_TOL),
        num(worst),
    );
    Ok((table, summary))
}
