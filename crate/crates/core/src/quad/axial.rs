//! Integrals of functions of a single coordinate against `e^{-a|ζ|^{2m}} dv(ζ)`.
//!
//! After a unitary change of variables any function of `⟨ζ, v⟩` depends on
//! `w = ζ_1` only, and
//! `∫_{C^d} h(ζ_1) e^{-a|ζ|^{2m}} dv(ζ) = ∫_C h(w) W_a(|w|²) dA(w)` with the
//! marginal weight `W_a(ρ²) = ∫_{C^{d-1}} e^{-a(ρ² + |ζ'|²)^m} dv(ζ')`.
//! The remaining planar integral is taken in polar coordinates: trapezoid
//! (or Gauss–Legendre on arcs) in the angle, adaptive Gauss–Legendre in the
//! radius, everything in log space so that integrands of size `e^{700}` and
//! beyond are handled.

use std::f64::consts::PI;

use crate::quad::gauss::legendre_cached;
use crate::special::ln_gamma;
use crate::C64;

/// Region of the `w`-plane being integrated over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxialRegion {
    Full,
    /// `|arg w| ≤ half_angle` and `|w| ≥ min_radius`.
    Sector {
        half_angle: f64,
        min_radius: f64,
    },
    /// Complement of the matching `Sector`.
    Complement {
        half_angle: f64,
        min_radius: f64,
    },
}

/// Running `ln Σ w_i e^{l_i}` without overflow.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    fn add(&mut self, l: f64, w: f64) {
        if l == f64::NEG_INFINITY || w == 0.0 {
            return;
        }
        if l > self.max {
            self.sum = self.sum * (self.max - l).exp() + w;
            self.max = l;
        } else {
            self.sum += w * (l - self.max).exp();
        }
    }

    fn ln(&self) -> f64 {
        if self.sum > 0.0 {
            self.max + self.sum.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Default relative tolerance of [`ln_axial_integral`].
pub const AXIAL_TOL: f64 = 1e-12;
const NEGLIGIBLE: f64 = 50.0;
/// Scan steps per adaptive radial panel.
const PANEL_STEPS: usize = 8;

/// `ln ∫_{C^d} h(ζ_1) e^{-a|ζ|^{2m}} dv(ζ)` over `region`, given `ln h`.
pub fn ln_axial_integral(d: usize, m: f64, a: f64, region: AxialRegion, ln_h: &(dyn Fn(C64) -> f64 + Sync)) -> f64 {
    ln_axial_integral_tol(d, m, a, region, ln_h, AXIAL_TOL)
}

/// [`ln_axial_integral`] with relative tolerance `tol`. Integrands carrying
/// evaluation noise above the tolerance never settle and exhaust the
/// refinement caps, so `tol` should exceed that noise.
pub fn ln_axial_integral_tol(
    d: usize,
    m: f64,
    a: f64,
    region: AxialRegion,
    ln_h: &(dyn Fn(C64) -> f64 + Sync),
    tol: f64,
) -> f64 {
    let marginal = MarginalWeight::new(d, m, a);
    let f = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let angular = ln_angular(rho, region, ln_h, 0.1 * tol);
        rho.ln() + marginal.ln_eval(rho * rho) + angular
    };

    // Coarse scan for the bulk of the radial integrand.
    let step = 0.05 * a.powf(-0.5 / m).min(1.0);
    let mut scan: Vec<(f64, f64)> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_rho = 0.0;
    let mut rho = 0.0;
    let mut below = 0;
    while rho < 1e3 {
        rho += step * (1.0 + rho / 8.0);
        let v = f(rho);
        scan.push((rho, v));
        if v > best {
            best = v;
            best_rho = rho;
        }
        if rho > best_rho && v < best - NEGLIGIBLE - 10.0 {
            below += 1;
            if below >= 3 {
                break;
            }
        } else {
            below = 0;
        }
    }
    if best == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }

    // Panels of PANEL_STEPS scan steps, skipping those far below the peak.
    let mut total = 0.0;
    let g = |r: f64| (f(r) - best).exp();
    let estimate: f64 = scan
        .windows(2)
        .map(|w| 0.5 * ((w[0].1 - best).exp() + (w[1].1 - best).exp()) * (w[1].0 - w[0].0))
        .sum::<f64>()
        .max(1e-300);
    let mut left = 0.0;
    let mut left_value = best;
    for chunk in scan.chunks(PANEL_STEPS) {
        let right = chunk[chunk.len() - 1].0;
        let peak = chunk.iter().map(|s| s.1).fold(left_value, f64::max);
        if peak >= best - NEGLIGIBLE {
            total += adaptive(&g, left, right, tol * estimate, 14);
        }
        left = right;
        left_value = chunk[chunk.len() - 1].1;
    }
    best + total.ln()
}

/// `ln ‖f‖_{F^p_{m,α}}` for `f(ζ) = g(⟨ζ, v⟩)` with `|v| = scale`, given `ln |g|`.
///
/// A unitary change of variables puts `⟨ζ, v⟩ = scale · ζ_1`, so
/// `‖f‖_p^p = c_{m,α} ∫ |g(scale · w)|^p e^{-(pα/2)|ζ|^{2m}} dv`.
pub fn ln_fp_norm_axial(
    params: &crate::fock::params::SpaceParams,
    p: f64,
    scale: f64,
    ln_abs_g: &(dyn Fn(C64) -> f64 + Sync),
) -> f64 {
    let (d, m, a) = (params.d, params.m, params.alpha);
    let ln_c = crate::fock::params::ln_density_const(d, m, a);
    let integral = ln_axial_integral(d, m, 0.5 * p * a, AxialRegion::Full, &|w: C64| p * ln_abs_g(w * scale));
    (ln_c + integral) / p
}

/// Gauss–Legendre with recursive bisection until halves agree.
pub(crate) fn adaptive(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let rule = legendre_cached(16);
    let whole: f64 = rule.mapped(a, b).map(|(x, w)| w * g(x)).sum();
    let mid = 0.5 * (a + b);
    let halves: f64 = rule
        .mapped(a, mid)
        .chain(rule.mapped(mid, b))
        .map(|(x, w)| w * g(x))
        .sum();
    if (whole - halves).abs() <= tol || depth == 0 {
        return halves;
    }
    adaptive(g, a, mid, 0.5 * tol, depth - 1) + adaptive(g, mid, b, 0.5 * tol, depth - 1)
}

/// `ln ∫ h(ρ e^{iθ}) dθ` over the arc of `region` at radius `ρ`.
fn ln_angular(rho: f64, region: AxialRegion, ln_h: &(dyn Fn(C64) -> f64 + Sync), tol: f64) -> f64 {
    match region {
        AxialRegion::Full => ln_circle(rho, ln_h, tol),
        AxialRegion::Sector { half_angle, min_radius } => {
            if rho < min_radius {
                f64::NEG_INFINITY
            } else {
                ln_arc(rho, -half_angle, half_angle, ln_h, tol)
            }
        }
        AxialRegion::Complement { half_angle, min_radius } => {
            if rho < min_radius {
                ln_circle(rho, ln_h, tol)
            } else if half_angle >= PI {
                f64::NEG_INFINITY
            } else {
                ln_arc(rho, half_angle, 2.0 * PI - half_angle, ln_h, tol)
            }
        }
    }
}

/// Trapezoid rule on the full circle, doubled until converged.
fn ln_circle(rho: f64, ln_h: &(dyn Fn(C64) -> f64 + Sync), tol: f64) -> f64 {
    let mut n = 32usize;
    let mut acc = LogSum::new();
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        acc.add(ln_h(C64::from_polar(rho, t)), 1.0);
    }
    let mut prev = acc.ln() + (2.0 * PI / n as f64).ln();
    while n < 1 << 14 {
        for k in 0..n {
            let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            acc.add(ln_h(C64::from_polar(rho, t)), 1.0);
        }
        n *= 2;
        let cur = acc.ln() + (2.0 * PI / n as f64).ln();
        if (cur - prev).abs() <= tol || (cur == f64::NEG_INFINITY && prev == cur) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Composite Gauss–Legendre on `[t0, t1]`, panels doubled until converged.
fn ln_arc(rho: f64, t0: f64, t1: f64, ln_h: &(dyn Fn(C64) -> f64 + Sync), tol: f64) -> f64 {
    let rule = legendre_cached(16);
    let eval = |panels: usize| {
        let mut acc = LogSum::new();
        let h = (t1 - t0) / panels as f64;
        for p in 0..panels {
            let a = t0 + p as f64 * h;
            for (t, w) in rule.mapped(a, a + h) {
                acc.add(ln_h(C64::from_polar(rho, t)), w);
            }
        }
        acc.ln()
    };
    let mut panels = 2;
    let mut prev = eval(panels);
    while panels < 1024 {
        panels *= 2;
        let cur = eval(panels);
        if (cur - prev).abs() <= tol || (cur == f64::NEG_INFINITY && prev == cur) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `W_a(ρ²)` in log form.
#[derive(Debug, Clone)]
struct MarginalWeight {
    d: usize,
    m: f64,
    a: f64,
    ln_const: f64,
}

impl MarginalWeight {
    fn new(d: usize, m: f64, a: f64) -> Self {
        // π^{d-1}/Γ(d-1) from polar coordinates in C^{d-1}.
        let ln_const = if d >= 2 {
            (d as f64 - 1.0) * PI.ln() - ln_gamma(d as f64 - 1.0)
        } else {
            0.0
        };
        Self { d, m, a, ln_const }
    }

    fn ln_eval(&self, rho_sq: f64) -> f64 {
        let (d, m, a) = (self.d, self.m, self.a);
        let base = -a * rho_sq.powf(m);
        if d == 1 {
            return base;
        }
        if m == 1.0 {
            // Gaussian: π^{d-1} a^{1-d} e^{-aρ²}.
            return (d as f64 - 1.0) * (PI.ln() - a.ln()) + base;
        }
        // v = a((ρ² + t)^m - ρ^{2m}) = s^m; the integrand is bounded in s.
        let r2m = rho_sq.powf(m);
        let g = |s: f64| -> f64 {
            let v = s.powf(m);
            let x = (r2m + v / a).powf(1.0 / m);
            let t = (x - rho_sq).max(0.0);
            let dt_dv = x / (a * m * (r2m + v / a));
            t.powi(d as i32 - 2) * dt_dv * (-v).exp() * m * s.powf(m - 1.0)
        };
        let rule = legendre_cached(16);
        let mut total = 0.0;
        let mut hi = 60f64.powf(1.0 / m);
        for _ in 0..40 {
            let lo = hi * 0.5;
            total += rule.mapped(lo, hi).map(|(s, w)| w * g(s)).sum::<f64>();
            hi = lo;
        }
        total += rule.mapped(0.0, hi).map(|(s, w)| w * g(s)).sum::<f64>();
        self.ln_const + base + total.ln()
    }
}
