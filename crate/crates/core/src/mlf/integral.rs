//! Integral representation of `E_{1/m,β}` for `β ∈ {1/m, 1}`:
//!
//! `E_{α,β}(z) = ∫_0^∞ K(χ, z) dχ + [exponential term]`, with
//! `K = (1/(απ)) χ^{(1-β)/α} e^{-χ^{1/α}} (χ sin π(1-β) - z sin π(1-β+α)) / (χ² - 2χz cos απ + z²)`
//! and exponential term `(1/α) z^{(1-β)/α} e^{z^{1/α}}`.
//!
//! The integration ray `χ = s e^{iψ}` is tilted away from the poles
//! `z e^{±iαπ}`; the exponential term is present exactly when the pole
//! `z e^{∓iαπ}` lies on the far side of the ray. The integrand has no
//! cancellation, so this branch stays accurate where the power series loses
//! digits to `e^{|z|^m}`-sized terms of alternating phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::mlf::asymptotic::exponential_part;
use crate::mlf::series::MLOrder;
use crate::quad::gauss::legendre_cached;
use crate::scaled::ScaledComplex;

/// Upper bound of `Re(χ^m)` along the ray.
const TAIL_EXPONENT: f64 = 46.0;

/// Nodes per panel.
const PANEL_ORDER: usize = 20;

/// Geometric panels towards the origin, where `χ^{m-1}` is not smooth.
const ORIGIN_LEVELS: usize = 14;

/// Integral representation split into its two pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct IntegralParts {
    /// Everything except the exponential term.
    pub algebraic: Complex64,
    /// Whether the exponential term belongs to the value at this `z`.
    pub include_exponential: bool,
    /// Absolute rounding estimate of `algebraic`.
    pub error: f64,
}

/// `E^{(j)}_{1/m,1/m}(z)` with an absolute error estimate; `m > 1`.
pub(crate) fn integral_value(m: f64, order: MLOrder, z: Complex64) -> (ScaledComplex, f64) {
    let parts = integral_parts(m, order, z);
    let mut value = ScaledComplex::from_complex(parts.algebraic);
    if parts.include_exponential {
        value = value + exponential_part(m, order.k(), z);
    }
    (value, parts.error)
}

pub(crate) fn integral_parts(m: f64, order: MLOrder, z: Complex64) -> IntegralParts {
    let j = order.j();
    let alpha = 1.0 / m;
    let beta = if j == -1 { 1.0 } else { alpha };
    let derivative = j.max(0) as usize;
    let theta = z.arg();

    let psi = choose_ray(m, theta);
    let include_exponential = if theta >= 0.0 {
        theta - PI * alpha < psi
    } else {
        theta + PI * alpha > psi
    };

    let s1 = (PI * (1.0 - beta)).sin();
    let s2 = (PI * (1.0 - beta + alpha)).sin();
    let c = (PI * alpha).cos();
    let power = (1.0 - beta) / alpha;
    let ray = Complex64::from_polar(1.0, psi);
    let prefactor = 1.0 / (alpha * PI);
    let mut factorial = 1.0;
    for i in 2..=derivative {
        factorial *= i as f64;
    }

    let integrand = |s: f64| -> Complex64 {
        let chi = ray * s;
        let weight = if power == 0.0 {
            (-chi.powf(m)).exp()
        } else {
            chi.powf(power) * (-chi.powf(m)).exp()
        };
        let rational = rational_jet(chi, z, s1, s2, c, derivative);
        weight * rational * ray * (prefactor * factorial)
    };

    let breaks = breakpoints(m, psi, z);
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let rule = legendre_cached(PANEL_ORDER);
    for w in breaks.windows(2) {
        for (s, wt) in rule.mapped(w[0], w[1]) {
            let v = integrand(s) * wt;
            total += v;
            abs_total += v.norm();
        }
    }
    let error = 32.0 * f64::EPSILON * abs_total;
    if j == -1 {
        // E^{(-1)} = (E_{1/m,1} - 1)/m, whose exponential term is e^{z^m}.
        return IntegralParts {
            algebraic: (total - 1.0) * alpha,
            include_exponential,
            error: (error + f64::EPSILON) * alpha,
        };
    }
    IntegralParts {
        algebraic: total,
        include_exponential,
        error,
    }
}

/// Ray angle in `[-π/(4m), π/(4m)]` farthest from both poles `θ ± π/m`.
fn choose_ray(m: f64, theta: f64) -> f64 {
    let poles = [wrap(theta - PI / m), wrap(theta + PI / m)];
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in -4..=4 {
        let psi = i as f64 * PI / (16.0 * m);
        let gap = poles.iter().map(|p| wrap(p - psi).abs()).fold(f64::INFINITY, f64::min);
        if gap > best.0 + 1e-12 {
            best = (gap, psi);
        }
    }
    best.1
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// `d^k/dz^k` of `(χ s1 - z s2)/(χ² - 2χ z c + z²)` divided by `k!`.
fn rational_jet(chi: Complex64, z: Complex64, s1: f64, s2: f64, c: f64, k: usize) -> Complex64 {
    let n0 = chi * s1 - z * s2;
    let n1 = Complex64::new(-s2, 0.0);
    let d0 = chi * chi - chi * z * (2.0 * c) + z * z;
    let d1 = z * 2.0 - chi * (2.0 * c);
    let inv = d0.inv();
    // Taylor division q = N / D with D = d0 + d1 ε + ε².
    let (mut q_prev2, mut q_prev) = (Complex64::new(0.0, 0.0), n0 * inv);
    if k == 0 {
        return q_prev;
    }
    for i in 1..=k {
        let ni = if i == 1 { n1 } else { Complex64::new(0.0, 0.0) };
        let qi = (ni - d1 * q_prev - q_prev2) * inv;
        q_prev2 = q_prev;
        q_prev = qi;
    }
    q_prev
}

/// Panel breakpoints along the ray: uniform in `t = s^m`, graded towards the
/// origin and towards the point of the ray closest to each pole.
fn breakpoints(m: f64, psi: f64, z: Complex64) -> Vec<f64> {
    let decay = (m * psi).cos();
    let s_end = (TAIL_EXPONENT / decay).powf(1.0 / m);
    let mut pts: Vec<f64> = Vec::new();
    let t_end = s_end.powf(m);
    let panels = (t_end / 3.0).ceil() as usize;
    for i in 0..=panels {
        pts.push((t_end * i as f64 / panels as f64).powf(1.0 / m));
    }
    let first = pts[1];
    for l in 1..=ORIGIN_LEVELS {
        pts.push(first * 0.25f64.powi(l as i32));
    }
    let r = z.norm();
    let theta = z.arg();
    for pole in [theta - PI / m, theta + PI / m] {
        let delta = wrap(pole - psi);
        if delta.abs() >= 0.5 * PI {
            continue;
        }
        let centre = r * delta.cos();
        let dist = r * delta.sin().abs();
        let mut h = dist.max(1e-3 * r);
        while h < 4.0 * centre.max(dist) && h < s_end {
            for p in [centre - h, centre + h] {
                if p > 0.0 && p < s_end {
                    pts.push(p);
                }
            }
            h *= 2.0;
        }
        if centre > 0.0 && centre < s_end {
            pts.push(centre);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1e-300));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlf::series::MlFamily;

    #[test]
    fn matches_series_where_series_is_clean() {
        for &m in &[1.5, 2.0, 3.0] {
            for j in -1..4 {
                let fam = MlFamily::new(m, MLOrder::new(j).unwrap()).unwrap();
                for &(r, th) in &[(0.5, 0.3), (1.2, 2.0), (1.5, -1.0), (2.0, 0.0), (1.0, 3.1)] {
                    let z = Complex64::from_polar(r, th);
                    let s = fam.series(z, 1e-16).unwrap();
                    let (v, err) = integral_value(m, fam.order(), z);
                    let diff = (v.to_complex().unwrap() - s.value).norm();
                    assert!(
                        diff <= 1e-13 * s.value.norm().max(1.0) + 4.0 * (err + f64::EPSILON * s.abs_sum),
                        "m={m} j={j} z={z}: {diff:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn ray_avoids_poles() {
        for &m in &[1.5, 2.0, 3.0] {
            for i in 0..50 {
                let theta = -PI + (i as f64 + 0.5) * 2.0 * PI / 50.0;
                let psi = choose_ray(m, theta);
                assert!(psi.abs() <= PI / (4.0 * m) + 1e-15);
                for p in [theta - PI / m, theta + PI / m] {
                    assert!(wrap(p - psi).abs() > PI / (32.0 * m) - 1e-12);
                }
            }
        }
    }
}
