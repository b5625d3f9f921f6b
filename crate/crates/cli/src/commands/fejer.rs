//! Approximation of a little-oh symbol by Fejér means and dilations in
//! `F^∞_{m,α/2}`.

use focklab::fock::{sup_growth_norm, FamilySpec, GrowthGrid};
use serde_json::json;

use crate::config::{Config, SPACE_KEYS, SYMBOL_KEYS};
use crate::error::CliError;
use crate::output::{num, Summary, Table};

pub const KEYS: &[&str] = &["fejer.n", "fejer.r", "grid.radii", "grid.angles"];

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS, SPACE_KEYS, SYMBOL_KEYS])?;
    let spaces = cfg.spaces(1, &[1.0])?;
    let ns: Vec<u32> = cfg.get_list("fejer.n", &[4, 8, 16, 32])?;
    let rs: Vec<f64> = cfg.get_list("fejer.r", &[0.9, 0.99, 0.999])?;
    let n_radii: usize = cfg.get("grid.radii", 200)?;
    let angles: usize = cfg.get("grid.angles", 32)?;
    if rs.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(CliError::Config("key `fejer.r`: dilations must lie in (0, 1)".into()));
    }
    if n_radii < 2 || angles == 0 {
        return Err(CliError::Config(
            "keys `grid.radii`/`grid.angles`: grid is too small".into(),
        ));
    }
    let default = FamilySpec::ExpQuadratic {
        c: 0.2,
        max_degree: Some(64),
    };

    let mut table = Table::new(&["m", "c", "method", "parameter", "gap", "sup_b"]);
    let mut summary = Summary::new("fejer");
    for params in &spaces {
        let beta = params.alpha / 2.0;
        for symbol in cfg.symbols(params, &default, 64)? {
            let b = &symbol.b;
            let c = symbol.label.map_or(serde_json::Value::Null, num);
            let grid = GrowthGrid::for_symbol(b, params, beta, n_radii, angles)?;
            let sup_b = sup_growth_norm(b, params, beta, &grid).value;
            let gap = |other: &focklab::fock::TaylorSymbol| sup_growth_norm(&b.sub(other), params, beta, &grid).value;

            let fejer: Vec<f64> = ns.iter().map(|&n| gap(&b.fejer_smooth(n))).collect();
            let dilate: Vec<f64> = rs.iter().map(|&r| gap(&b.dilate(r))).collect();
            for (&n, &g) in ns.iter().zip(&fejer) {
                table.push(vec![
                    num(params.m),
                    c.clone(),
                    json!("fejer"),
                    json!(n),
                    num(g),
                    num(sup_b),
                ]);
            }
            for (&r, &g) in rs.iter().zip(&dilate) {
                table.push(vec![
                    num(params.m),
                    c.clone(),
                    json!("dilate"),
                    num(r),
                    num(g),
                    num(sup_b),
                ]);
            }
            let label = format!("m={} c={}", params.m, c);
            summary.check(
                format!("fejer_decreasing {label}"),
                fejer.windows(2).all(|w| w[1] < w[0]),
                json!("strict"),
                json!(fejer),
            );
            summary.check(
                format!("dilation_decreasing {label}"),
                dilate.windows(2).all(|w| w[1] < w[0]),
                json!("strict"),
                json!(dilate),
            );
        }
    }
    Ok((table, summary))
}
