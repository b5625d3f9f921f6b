//! Laplace's method against closed forms and quadrature.

use focklab::asymptotics::{laplace_boundary, laplace_interior, laplace_quadrature, LaplaceProblem};
use focklab::special::ln_gamma;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, Summary, Table};

pub const KEYS: &[&str] = &["laplace.lambdas", "laplace.boundary_lambdas", "laplace.terms"];

/// Interior estimate at the largest λ must be within this relative distance.
const INTERIOR_TOL: f64 = 0.01;
/// Boundary expansions with analytic coefficients are exact for these `f`.
const EXACT_TOL: f64 = 1e-12;

/// `∫_0^∞ e^{λ(ln x − x)} dx = Γ(λ+1)/λ^{λ+1}`, maximum at `x = 1`.
fn stirling() -> Result<LaplaceProblem, CliError> {
    Ok(LaplaceProblem::new(
        |_| 1.0,
        |x| x.ln() - x,
        |x| 1.0 / x - 1.0,
        |x| -1.0 / (x * x),
        (0.0, f64::INFINITY),
    )?
    .with_interior_max(1.0))
}

fn stirling_exact(lambda: f64) -> f64 {
    (ln_gamma(lambda + 1.0) - (lambda + 1.0) * lambda.ln()).exp()
}

/// `∫_0^1 cos(x) e^{−λ(x−½)²} dx`; the reference is quadrature.
fn gaussian() -> Result<LaplaceProblem, CliError> {
    Ok(LaplaceProblem::new(
        f64::cos,
        |x| -(x - 0.5) * (x - 0.5),
        |x| -2.0 * (x - 0.5),
        |_| -2.0,
        (0.0, 1.0),
    )?
    .with_interior_max(0.5))
}

/// `∫_0^∞ f(x) e^{−λx} dx`.
fn exponential(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<LaplaceProblem, CliError> {
    Ok(LaplaceProblem::new(f, |x| -x, |_| -1.0, |_| 0.0, (0.0, f64::INFINITY))?)
}

pub fn run(cfg: &Config) -> Result<(Table, Summary), CliError> {
    cfg.check_known(&[KEYS])?;
    let lambdas: Vec<f64> = cfg.get_list("laplace.lambdas", &[25.0, 100.0, 400.0])?;
    let boundary_lambdas: Vec<f64> = cfg.get_list("laplace.boundary_lambdas", &[5.0, 20.0, 80.0])?;
    let terms: usize = cfg.get("laplace.terms", 3)?;
    for (key, list) in [
        ("laplace.lambdas", &lambdas),
        ("laplace.boundary_lambdas", &boundary_lambdas),
    ] {
        if list.iter().any(|&l| !(l > 0.0)) || list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!(
                "key `{key}`: values must be positive and increasing"
            )));
        }
    }
    if terms == 0 {
        return Err(CliError::Config("key `laplace.terms`: need at least one term".into()));
    }

    let mut table = Table::new(&[
        "problem",
        "lambda",
        "terms",
        "approximation",
        "reference",
        "quadrature",
        "relative_error",
        "coefficients",
    ]);
    let mut summary = Summary::new("laplace-check");

    let interior: [(&str, LaplaceProblem, Option<fn(f64) -> f64>); 2] = [
        ("interior_gaussian", gaussian()?, None),
        ("interior_stirling", stirling()?, Some(stirling_exact)),
    ];
    for (name, prob, exact) in &interior {
        let mut errors = Vec::new();
        for &lam in &lambdas {
            let approx = laplace_interior(prob, lam)?;
            let quadrature = laplace_quadrature(prob, lam);
            let reference = exact.map_or(quadrature, |f| f(lam));
            let err = (approx / reference - 1.0).abs();
            errors.push(err);
            table.push(vec![
                json!(name),
                num(lam),
                json!(1),
                num(approx),
                num(reference),
                num(quadrature),
                num(err),
                json!("analytic"),
            ]);
        }
        let last = *errors.last().expect("non-empty list");
        summary.check(
            format!("{name} at largest lambda"),
            last <= INTERIOR_TOL,
            num(INTERIOR_TOL),
            num(last),
        );
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        summary.check(
            format!("{name} error decreases"),
            decreasing,
            json!("strict"),
            json!(errors),
        );
    }

    // f = 1 and f = 1 + x: the two-term expansion is the exact integral.
    let mut worst_exact = 0.0f64;
    let exact_cases: [(&str, Vec<f64>, fn(f64) -> f64, fn(f64) -> f64); 2] = [
        ("boundary_one", vec![1.0], |_| 1.0, |l| 1.0 / l),
        (
            "boundary_affine",
            vec![1.0, 1.0],
            |x| 1.0 + x,
            |l| 1.0 / l + 1.0 / (l * l),
        ),
    ];
    for (name, coeffs, f, exact) in exact_cases {
        let n = coeffs.len();
        let prob = exponential(f)?.with_boundary_coeffs(coeffs);
        for &lam in &boundary_lambdas {
            let est = laplace_boundary(&prob, lam, n)?;
            let reference = exact(lam);
            let err = (est.value / reference - 1.0).abs();
            worst_exact = worst_exact.max(err);
            table.push(vec![
                json!(name),
                num(lam),
                json!(n),
                num(est.value),
                num(reference),
                num(laplace_quadrature(&prob, lam)),
                num(err),
                json!("analytic"),
            ]);
        }
    }
    summary.check(
        "boundary_exact",
        worst_exact <= EXACT_TOL,
        num(EXACT_TOL),
        num(worst_exact),
    );

    // f = 1/(1+x): coefficients (−1)^k k! from finite differences, so the
    // relative error is O(λ^{−terms}).
    let prob = exponential(|x| 1.0 / (1.0 + x))?;
    let mut fd_errors = Vec::new();
    for &lam in &boundary_lambdas {
        let est = laplace_boundary(&prob, lam, terms)?;
        let reference = laplace_quadrature(&prob, lam);
        let err = (est.value / reference - 1.0).abs();
        fd_errors.push(err);
        table.push(vec![
            json!("boundary_reciprocal"),
            num(lam),
            json!(terms),
            num(est.value),
            num(reference),
            num(reference),
            num(err),
            json!(if est.finite_difference {
                "finite_difference"
            } else {
                "analytic"
            }),
        ]);
    }
    let decreasing = fd_errors.windows(2).all(|w| w[1] < w[0]);
    summary.check(
        "boundary_error_decreases",
        decreasing,
        json!("strict"),
        json!(fd_errors),
    );
    Ok((table, summary))
}
