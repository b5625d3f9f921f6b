//! Truncation-level compactness diagnostics with a little-oh profile.

use focklab::fock::FamilySpec;
use focklab::hankel::{compactness_report, Verdict};
use serde_json::{json, Value};

use crate::config::{Config, SPACE_KEYS, SYMBOL_KEYS};
use crate::error::CliError;
use crate::output::{num, opt, Summary, Table};

pub const KEYS: &[&str] = &[
    "compactness.truncations",
    "compactness.r_max",
    "compactness.n_radii",
    "compactness.expect",
];

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Compact => "compact",
        Verdict::NonCompact => "non_compact",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn parse_verdict(s: &str) -> Result<Verdict, CliError> {
    match s.trim() {
        "compact" => Ok(Verdict::Compact),
        "non_compact" => Ok(Verdict::NonCompact),
        "inconclusive" => Ok(Verdict::Inconclusive),
        other => Err(CliError::Config(format!(
            "key `compactness.expect`: unknown verdict `{other}` (expected compact, non_compact or inconclusive)"
        ))),
    }
}

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS, SPACE_KEYS, SYMBOL_KEYS])?;
    let spaces = cfg.spaces(1, &[1.0])?;
    let truncations: Vec<u32> = cfg.get_list("compactness.truncations", &[20, 30, 40])?;
    let r_max: f64 = cfg.get("compactness.r_max", 12.0)?;
    let n_radii: usize = cfg.get("compactness.n_radii", 48)?;
    if !(r_max > 0.0) || n_radii < 4 {
        return Err(CliError::Config(
            "keys `compactness.r_max` and `compactness.n_radii`: need r_max > 0 and at least 4 radii".into(),
        ));
    }
    // One expected verdict per symbol, or one for all.
    let expect: Option<Vec<Verdict>> = cfg
        .raw("compactness.expect")
        .map(|s| s.split(',').map(parse_verdict).collect())
        .transpose()?;
    let radii: Vec<f64> = (1..=n_radii).map(|i| r_max * i as f64 / n_radii as f64).collect();
    let n_max = *truncations.iter().max().expect("non-empty list");
    let default = FamilySpec::ExpQuadratic {
        c: 0.2,
        max_degree: None,
    };

    let mut table = Table::new(&[
        "m",
        "c",
        "truncation",
        "sigma_tail",
        "numerical_rank",
        "spectral_ratio",
        "littleoh_tail",
        "littleoh_peak",
        "verdict",
    ]);
    let mut summary = Summary::new("compactness");
    let mut profiles = Vec::new();
    let mut index = 0;
    for params in &spaces {
        for symbol in cfg.symbols(params, &default, 2 * n_max)? {
            let report = compactness_report(params, &symbol.b, &truncations, &radii)?;
            let c = symbol.label.map_or(Value::Null, num);
            for row in &report.rows {
                table.push(vec![
                    num(params.m),
                    c.clone(),
                    json!(row.truncation),
                    num(row.sigma_tail),
                    json!(row.numerical_rank),
                    opt(row.spectral_ratio),
                    num(row.littleoh_tail),
                    num(row.littleoh_peak),
                    json!(verdict_name(report.verdict)),
                ]);
            }
            if let Some(expect) = &expect {
                let want = if expect.len() == 1 {
                    expect[0]
                } else {
                    *expect.get(index).ok_or_else(|| {
                        CliError::Config("key `compactness.expect`: fewer verdicts than symbols".into())
                    })?
                };
                summary.check(
                    format!("verdict m={} c={}", params.m, c),
                    report.verdict == want,
                    json!(verdict_name(want)),
                    json!(verdict_name(report.verdict)),
                );
            }
            profiles.push(json!({ "m": params.m, "c": c, "profile": report.profile }));
            index += 1;
        }
    }
    summary.details = json!({ "profiles": profiles });
    Ok((table, summary))
}
