//! `‖h_b‖ / ‖b‖_{F^∞_{m,α/2}}` over a sweep of `m` and symbols.

use focklab::fock::{FamilySpec, GrowthGrid};
use focklab::hankel::theorem_a_report;
use focklab::LabError;
use serde_json::{json, Value};

use crate::config::{Config, SPACE_KEYS, SYMBOL_KEYS};
use crate::error::CliError;
use crate::output::{num, Summary, Table};

pub const KEYS: &[&str] = &["truncation", "grid.radii", "grid.angles"];

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS, SPACE_KEYS, SYMBOL_KEYS])?;
    let spaces = cfg.spaces(1, &[1.0])?;
    let d = spaces[0].d;
    let n_trunc: u32 = cfg.get("truncation", if d == 1 { 40 } else { 12 })?;
    let n_radii: usize = cfg.get("grid.radii", 400)?;
    let angles: usize = cfg.get("grid.angles", 64)?;
    if n_trunc == 0 || n_radii < 2 || angles == 0 {
        return Err(CliError::Config(
            "`truncation`, `grid.radii` and `grid.angles` must be positive".into(),
        ));
    }
    let default = FamilySpec::ExpQuadratic {
        c: 0.1,
        max_degree: None,
    };

    let mut table = Table::new(&[
        "m",
        "c",
        "truncation",
        "norm_hb",
        "norm_hb_prev",
        "sup_b_half",
        "ratio",
        "scaled_lower_ratio",
        "upper_ok",
        "sharp_upper_ok",
        "status",
    ]);
    let mut summary = Summary::new("hankel-ratio");
    let mut upper_failures = Vec::new();
    for params in &spaces {
        // The N-truncated matrix sees coefficients up to degree 2N.
        for symbol in cfg.symbols(params, &default, 2 * n_trunc)? {
            let label = match symbol.label {
                Some(c) => format!("m={} c={c}", params.m),
                None => format!("m={}", params.m),
            };
            let c = symbol.label.map_or(Value::Null, num);
            let grid = GrowthGrid::for_symbol(&symbol.b, params, params.alpha / 2.0, n_radii, angles)?;
            match theorem_a_report(params, &symbol.b, n_trunc, &grid) {
                Ok(rep) => {
                    if !rep.upper_ok {
                        upper_failures.push(label);
                    }
                    table.push(vec![
                        num(params.m),
                        c,
                        json!(rep.truncation),
                        num(rep.norm_hb),
                        num(rep.norm_hb_prev),
                        num(rep.sup_b_half),
                        num(rep.ratio),
                        num(rep.scaled_lower_ratio),
                        json!(rep.upper_ok),
                        json!(rep.sharp_upper_ok),
                        json!("ok"),
                    ]);
                }
                Err(LabError::NotConverged {
                    n, current, previous, ..
                }) => {
                    summary.not_converged.push(label);
                    table.push(vec![
                        num(params.m),
                        c,
                        json!(n),
                        num(current),
                        num(previous),
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        json!("not_converged"),
                    ]);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    summary.check(
        "upper_bound_2^d",
        upper_failures.is_empty(),
        json!(2f64.powi(d as i32)),
        json!(upper_failures),
    );
    Ok((table, summary))
}
