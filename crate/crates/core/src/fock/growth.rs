//! Growth-space norms `sup ‖f(z)‖ e^{-(β/2)|z|^{2m}}` sampled on grids, the
//! Littlewood–Paley variant, little-oh profiles, the pointwise bound and
//! integral means.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, LabError, Result};
use crate::fock::kernel::norm;
use crate::fock::params::SpaceParams;
use crate::fock::symbol::TaylorSymbol;
use crate::linalg::op_norm;
use crate::quad::sphere::{sphere_monomial_integral, SphereCubature};
use crate::special::log_sum_exp;
use crate::C64;

/// Sampling lattice: points `r e^{iθ} u` for every radius `r`, unit
/// direction `u` and `angles` equally spaced phases `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthGrid {
    radii: Vec<f64>,
    directions: Vec<Vec<C64>>,
    angles: usize,
}

/// Profile drop (relative to its running maximum) that ends the radial range.
const TAIL_DROP: f64 = 1e-14;

impl GrowthGrid {
    pub fn new(radii: Vec<f64>, directions: Vec<Vec<C64>>, angles: usize) -> Result<Self> {
        if radii.is_empty() || directions.is_empty() || angles == 0 {
            return domain("growth grid needs radii, directions and angles");
        }
        if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return domain("grid radii must be positive and strictly increasing");
        }
        let d = directions[0].len();
        for u in &directions {
            if u.len() != d || (norm(u) - 1.0).abs() > 1e-12 {
                return domain("grid directions must be unit vectors of equal dimension");
            }
        }
        Ok(Self {
            radii,
            directions,
            angles,
        })
    }

    /// `n_radii` log-spaced radii in `[r_max/1000, r_max]` with the standard
    /// directions of [`standard_directions`].
    pub fn log_spaced(d: usize, r_max: f64, n_radii: usize, angles: usize) -> Result<Self> {
        if !(r_max > 0.0) || n_radii < 2 {
            return domain("log-spaced grid needs r_max > 0 and at least two radii");
        }
        let lo = (r_max * 1e-3).ln();
        let hi = r_max.ln();
        let radii = (0..n_radii)
            .map(|i| (lo + (hi - lo) * i as f64 / (n_radii - 1) as f64).exp())
            .collect();
        Self::new(radii, standard_directions(d), angles)
    }

    /// Grid whose range ends where the coefficient bound
    /// `Σ ‖b̂_ν‖ r^{|ν|} e^{-(β/2) r^{2m}}` has fallen below `1e-14` of its maximum.
    pub fn for_symbol(
        b: &TaylorSymbol,
        params: &SpaceParams,
        beta: f64,
        n_radii: usize,
        angles: usize,
    ) -> Result<Self> {
        let r_max = symbol_radius_bound(b, params.m, beta);
        Self::log_spaced(params.d, r_max, n_radii, angles)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn directions(&self) -> &[Vec<C64>] {
        &self.directions
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    /// Largest ratio between consecutive radii.
    pub fn radial_resolution(&self) -> f64 {
        self.radii.windows(2).map(|w| w[1] / w[0]).fold(1.0, f64::max)
    }

    fn point(&self, r: f64, dir: usize, angle: usize) -> Vec<C64> {
        let phase = C64::from_polar(r, 2.0 * PI * angle as f64 / self.angles as f64);
        self.directions[dir].iter().map(|u| u * phase).collect()
    }
}

/// Coordinate axes, normalized pair sums, the diagonal and `(e_1 + i e_2)/√2`.
pub fn standard_directions(d: usize) -> Vec<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let mut out = Vec::new();
    for j in 0..d {
        let mut u = vec![zero; d];
        u[j] = C64::new(1.0, 0.0);
        out.push(u);
    }
    if d >= 2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..d {
            for j in i + 1..d {
                let mut u = vec![zero; d];
                u[i] = C64::new(h, 0.0);
                u[j] = C64::new(h, 0.0);
                out.push(u);
            }
        }
        let mut u = vec![zero; d];
        u[0] = C64::new(h, 0.0);
        u[1] = C64::new(0.0, h);
        out.push(u);
        if d > 2 {
            out.push(vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d]);
        }
    }
    out
}

/// Radius beyond which the weighted coefficient bound of `b` is negligible.
fn symbol_radius_bound(b: &TaylorSymbol, m: f64, beta: f64) -> f64 {
    let terms: Vec<(f64, f64)> = b
        .iter()
        .map(|(nu, c)| (nu.degree() as f64, op_norm(c).max(f64::MIN_POSITIVE).ln()))
        .collect();
    if terms.is_empty() {
        return 1.0;
    }
    let ln_bound = |r: f64| log_sum_exp(terms.iter().map(|&(k, l)| l + k * r.ln())) - 0.5 * beta * r.powf(2.0 * m);
    let mut best = f64::NEG_INFINITY;
    let mut r = 0.05;
    loop {
        let v = ln_bound(r);
        best = best.max(v);
        if v < best + TAIL_DROP.ln() && r > 1.0 {
            return r;
        }
        r *= 1.02;
        if r > 1e4 {
            return r;
        }
    }
}

/// Grid supremum with its location and sampling resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    /// A lower estimate of the true supremum.
    pub value: f64,
    pub argmax: Vec<C64>,
    /// Largest ratio of consecutive radii before refinement.
    pub radial_resolution: f64,
    /// Phase spacing `2π/angles`.
    pub angular_resolution: f64,
}

/// `sup_z w_k(|z|) g(z) e^{-(β/2)|z|^{2m}}` over the grid and the origin, with
/// `w_k(r) = (1 + r^{2m})^{-k}`, refined by golden-section search in the
/// radius along the best ray.
fn weighted_sup<G>(g: G, m: f64, beta: f64, k: u32, grid: &GrowthGrid) -> SupEstimate
where
    G: Fn(&[C64]) -> f64 + Sync,
{
    let d = grid.dim();
    let weight = |r: f64| {
        let r2m = r.powf(2.0 * m);
        let mut w = (-0.5 * beta * r2m).exp();
        if k > 0 {
            w *= (1.0 + r2m).powi(-(k as i32));
        }
        w
    };
    let origin = vec![C64::new(0.0, 0.0); d];
    // (value, radius index, direction, angle); ties keep the first in order.
    let per_radius: Vec<(f64, usize, usize, usize)> = grid
        .radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let w = weight(r);
            let mut best = (f64::NEG_INFINITY, i, 0, 0);
            for dir in 0..grid.directions.len() {
                for a in 0..grid.angles {
                    let v = g(&grid.point(r, dir, a)) * w;
                    if v > best.0 {
                        best = (v, i, dir, a);
                    }
                }
            }
            best
        })
        .collect();
    let at_origin = g(&origin);
    let best = per_radius
        .into_iter()
        .fold((f64::NEG_INFINITY, 0, 0, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
    let resolution = grid.radial_resolution();
    let angular = 2.0 * PI / grid.angles as f64;
    if at_origin >= best.0 {
        return SupEstimate {
            value: at_origin,
            argmax: origin,
            radial_resolution: resolution,
            angular_resolution: angular,
        };
    }
    let (v0, i, dir, a) = best;
    let lo = if i == 0 { 0.0 } else { grid.radii[i - 1] };
    let hi = grid.radii.get(i + 1).copied().unwrap_or(grid.radii[i] * resolution);
    let f = |r: f64| g(&grid.point(r, dir, a)) * weight(r);
    let (r_star, v_star) = golden_max(&f, lo, hi, 60);
    let (value, r_best) = if v_star > v0 {
        (v_star, r_star)
    } else {
        (v0, grid.radii[i])
    };
    SupEstimate {
        value,
        argmax: grid.point(r_best, dir, a),
        radial_resolution: resolution,
        angular_resolution: angular,
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `‖b‖_{F^∞_{m,β}}` estimated on the grid (operator norm pointwise).
pub fn sup_growth_norm(b: &TaylorSymbol, params: &SpaceParams, beta: f64, grid: &GrowthGrid) -> SupEstimate {
    weighted_sup(|z| op_norm(&b.eval(z)), params.m, beta, 0, grid)
}

/// `sup (1 + |ζ|^{2m})^{-k} ‖R^k b(ζ)‖ e^{-(β/2)|ζ|^{2m}} + Σ_{l<k} ‖R^l b(0)‖`.
///
/// `R^l b(0)` vanishes for `l ≥ 1`, so the correction is `‖b(0)‖` when `k ≥ 1`.
pub fn littlewood_paley_norm(b: &TaylorSymbol, params: &SpaceParams, beta: f64, k: u32, grid: &GrowthGrid) -> f64 {
    if k == 0 {
        return sup_growth_norm(b, params, beta, grid).value;
    }
    let rb = b.radial_derivative(k);
    let sup = weighted_sup(|z| op_norm(&rb.eval(z)), params.m, beta, k, grid).value;
    let origin = vec![C64::new(0.0, 0.0); b.dim()];
    sup + op_norm(&b.eval(&origin))
}

/// `(r, max_{u,θ} (1 + r^{2m})^{-k} ‖R^k b(r e^{iθ} u)‖ e^{-(β/2) r^{2m}})`
/// over the standard directions with 64 phases.
pub fn littleoh_profile(b: &TaylorSymbol, params: &SpaceParams, beta: f64, k: u32, radii: &[f64]) -> Vec<(f64, f64)> {
    littleoh_profile_along(b, params, beta, k, radii, &standard_directions(params.d), 64)
}

/// [`littleoh_profile`] over explicit directions and phase count.
pub fn littleoh_profile_along(
    b: &TaylorSymbol,
    params: &SpaceParams,
    beta: f64,
    k: u32,
    radii: &[f64],
    directions: &[Vec<C64>],
    angles: usize,
) -> Vec<(f64, f64)> {
    let rb = if k == 0 { b.clone() } else { b.radial_derivative(k) };
    let m = params.m;
    radii
        .par_iter()
        .map(|&r| {
            let r2m = r.powf(2.0 * m);
            let w = (-0.5 * beta * r2m).exp() * (1.0 + r2m).powi(-(k as i32));
            let mut best = 0.0f64;
            for u in directions {
                for a in 0..angles {
                    let phase = C64::from_polar(r, 2.0 * PI * a as f64 / angles as f64);
                    let z: Vec<C64> = u.iter().map(|x| x * phase).collect();
                    best = best.max(op_norm(&rb.eval(&z)) * w);
                }
            }
            (r, best)
        })
        .collect()
}

/// `‖f(z)‖ / [‖f‖_p (1 + |z|)^{τ_p} e^{(β/2)|z|^{2m}}]` with `τ_p = (2/p) d (m − 1)`
/// and `β = params.alpha`.
pub fn pointwise_bound_ratio(f: &TaylorSymbol, params: &SpaceParams, p: f64, z: &[C64], fp_norm: f64) -> Result<f64> {
    if fp_norm == 0.0 {
        return Err(LabError::DivisionByZero("F^p norm is zero"));
    }
    let (d, m, beta) = (params.d as f64, params.m, params.alpha);
    let r = norm(z);
    let tau = 2.0 / p * d * (m - 1.0);
    let value = op_norm(&f.eval(z));
    if value == 0.0 {
        return Ok(0.0);
    }
    let ln = value.ln() - fp_norm.ln() - tau * (1.0 + r).ln() - 0.5 * beta * r.powf(2.0 * m);
    Ok(ln.exp())
}

/// Integral mean `M_p(f, r) = (∫_{S} ‖f(rζ)‖_F^p dσ)^{1/p}` with Frobenius norms.
///
/// `p = 2` uses monomial orthogonality and is exact; other `p` sample the
/// sphere.
pub fn integral_means(f: &TaylorSymbol, p: f64, r: f64) -> f64 {
    let d = f.dim();
    if p == 2.0 {
        let s: f64 = f
            .iter()
            .map(|(nu, c)| c.norm_squared() * r.powi(2 * nu.degree() as i32) * sphere_monomial_integral(d, nu, nu))
            .sum();
        return s.sqrt();
    }
    let order = (2 * f.degree() as usize + 8).min(match d {
        1 => 512,
        2 => 64,
        _ => 16,
    });
    let cub = SphereCubature::new(d, order);
    let s: f64 = cub
        .iter()
        .map(|(eta, w)| {
            let z: Vec<C64> = eta.iter().map(|x| x * r).collect();
            w * f.eval(&z).norm().powf(p)
        })
        .sum();
    s.powf(1.0 / p)
}
