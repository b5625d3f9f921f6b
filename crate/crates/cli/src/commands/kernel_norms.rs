//! Growth of `‖K_z‖_{F^p}` along `z = r e_1`, fitted on a radius window.

use focklab::asymptotics::{verify_kernel_norms, ExponentCheck, GrowthFit};
use focklab::fock::SpaceParams;
use serde_json::{json, Value};

use crate::config::{Config, SPACE_KEYS};
use crate::error::CliError;
use crate::output::{num, opt, Summary, Table};

pub const KEYS: &[&str] = &["kernel.p", "kernel.r_min", "kernel.r_max", "kernel.n_radii"];

/// `‖K_z‖²_{F²}` must equal `K(z, z)` to this relative accuracy.
const REPRODUCING_TOL: f64 = 1e-8;

/// Default window: the exponential factor spans a few decades without
/// overflowing the quadrature.
pub fn default_window(m: f64) -> (f64, f64) {
    if m == 1.0 {
        (3.0, 8.0)
    } else if m == 2.0 {
        (1.5, 3.0)
    } else {
        (3f64.powf(1.0 / m), 8f64.powf(1.0 / m))
    }
}

/// The columns shared by every growth-fit table.
pub const FIT_COLUMNS: &[&str] = &[
    "target_exponent",
    "fitted_exponent",
    "target_rate",
    "fitted_rate",
    "residual",
    "check",
    "tolerance",
    "verdict",
];

pub fn fit_cells(fit: &GrowthFit) -> Vec<Value> {
    let (kind, tol) = match fit.check {
        ExponentCheck::Equal(t) => ("equal", t),
        ExponentCheck::AtMost(t) => ("at_most", t),
    };
    let verdict = if fit.passed {
        "pass"
    } else if fit.flagged {
        "flagged"
    } else {
        "fail"
    };
    vec![
        num(fit.target_exponent),
        num(fit.fitted_exponent),
        num(fit.target_rate),
        num(fit.fitted_rate),
        num(fit.residual),
        json!(kind),
        num(tol),
        json!(verdict),
    ]
}

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS, SPACE_KEYS])?;
    let ds: Vec<usize> = cfg.get_list("space.d", &[1])?;
    let ms: Vec<f64> = cfg.get_list("space.m", &[1.0, 2.0])?;
    let alpha: f64 = cfg.get("space.alpha", 1.0)?;
    let ps: Vec<f64> = cfg.get_list("kernel.p", &[1.0, 2.0, 4.0])?;
    let n_radii: usize = cfg.get("kernel.n_radii", 6)?;
    if n_radii < 4 {
        return Err(CliError::Config(
            "key `kernel.n_radii`: a fit needs at least 4 radii".into(),
        ));
    }
    if let Some(p) = ps.iter().find(|&&p| !(p >= 1.0)) {
        return Err(CliError::Config(format!("key `kernel.p`: p = {p} is below 1")));
    }

    let mut columns = vec!["d", "m", "alpha", "p", "r_min", "r_max"];
    columns.extend_from_slice(FIT_COLUMNS);
    columns.push("reproducing_error");
    let mut table = Table::new(&columns);
    let mut summary = Summary::new("kernel-norms");
    for &d in &ds {
        for &m in &ms {
            let params = SpaceParams::new(d, m, alpha).map_err(|e| CliError::Config(format!("space: {e}")))?;
            let (lo, hi) = default_window(m);
            let r_min: f64 = cfg.get("kernel.r_min", lo)?;
            let r_max: f64 = cfg.get("kernel.r_max", hi)?;
            if !(0.0 < r_min && r_min < r_max) {
                return Err(CliError::Config(
                    "keys `kernel.r_min`/`kernel.r_max`: need 0 < r_min < r_max".into(),
                ));
            }
            let radii: Vec<f64> = (0..n_radii)
                .map(|i| r_min + (r_max - r_min) * i as f64 / (n_radii - 1) as f64)
                .collect();
            for &p in &ps {
                let report = verify_kernel_norms(&params, p, &radii)?;
                let mut row = vec![json!(d), num(m), num(alpha), num(p), num(r_min), num(r_max)];
                row.extend(fit_cells(&report.fit));
                row.push(opt(report.reproducing_error));
                table.push(row);
                let label = format!("d={d} m={m} p={p}");
                summary.check(
                    format!("exponent {label}"),
                    report.fit.passed,
                    num(report.fit.target_exponent),
                    num(report.fit.fitted_exponent),
                );
                if let Some(err) = report.reproducing_error {
                    summary.check(
                        format!("reproducing {label}"),
                        err <= REPRODUCING_TOL,
                        num(REPRODUCING_TOL),
                        num(err),
                    );
                }
            }
        }
    }
    Ok((table, summary))
}
