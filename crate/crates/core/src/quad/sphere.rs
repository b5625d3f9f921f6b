//! Integration over the unit sphere `S^{2d-1}` with normalized measure `dσ`.

use std::f64::consts::PI;

use crate::fock::params::MultiIndex;
use crate::quad::gauss::legendre_cached;
use crate::special::ln_factorial;
use crate::C64;

/// `∫ ζ^ν ζ̄^μ dσ`: zero unless `ν = μ`, else `(d-1)! ν! / (d-1+|ν|)!`.
pub fn sphere_monomial_integral(d: usize, nu: &MultiIndex, mu: &MultiIndex) -> f64 {
    assert_eq!(nu.dim(), d, "multi-index dimension must equal d");
    assert_eq!(mu.dim(), d, "multi-index dimension must equal d");
    if nu != mu {
        return 0.0;
    }
    let k = nu.degree() as u64;
    let dm1 = d as u64 - 1;
    (ln_factorial(dm1) + nu.ln_factorial() - ln_factorial(dm1 + k)).exp()
}

/// Cubature for `dσ` on `S^{2d-1}`.
///
/// Coordinates are `ζ_j = √x_j e^{iθ_j}` with `x` uniform on the simplex. Phases
/// use the `order`-point trapezoid rule, exact for trigonometric polynomials of
/// degree `< order` in each `θ_j`; the simplex uses stick-breaking with
/// Gauss–Legendre factors, exact for polynomials in `x` of degree `< latitude`.
#[derive(Debug, Clone)]
pub struct SphereCubature {
    d: usize,
    points: Vec<C64>,
    weights: Vec<f64>,
}

impl SphereCubature {
    pub fn new(d: usize, order: usize) -> Self {
        assert!(d >= 1, "sphere dimension must be at least 1");
        let order = order.max(1);
        let latitude = order / 2 + 2;
        let simplex = simplex_rule(d, latitude);
        let phases: Vec<C64> = (0..order)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
            .collect();
        let phase_weight = (order as f64).powi(-(d as i32));
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut idx = vec![0usize; d];
        for (x, wx) in &simplex {
            let moduli: Vec<f64> = x.iter().map(|v| v.max(0.0).sqrt()).collect();
            idx.iter_mut().for_each(|i| *i = 0);
            loop {
                for j in 0..d {
                    points.push(phases[idx[j]] * moduli[j]);
                }
                weights.push(wx * phase_weight);
                let mut j = 0;
                while j < d {
                    idx[j] += 1;
                    if idx[j] < order {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == d {
                    break;
                }
            }
        }
        Self { d, points, weights }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `(ζ, w)` pairs; `ζ` has `d` coordinates and weights sum to one.
    pub fn iter(&self) -> impl Iterator<Item = (&[C64], f64)> + '_ {
        self.points.chunks_exact(self.d).zip(self.weights.iter().copied())
    }
}

/// Points of the simplex `{x ≥ 0, Σ x = 1}` in `R^d` with weights of the
/// uniform probability measure.
fn simplex_rule(d: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
    if d == 1 {
        return vec![(vec![1.0], 1.0)];
    }
    let gl = legendre_cached(n);
    let unit: Vec<(f64, f64)> = gl.mapped(0.0, 1.0).collect();
    let norm: f64 = (1..d).map(|k| k as f64).product();
    let mut out = Vec::new();
    let mut idx = vec![0usize; d - 1];
    loop {
        // Stick-breaking x_k = v_k Π_{i<k}(1 - v_i), Jacobian Π (1 - v_k)^{d-1-k}.
        let mut rest = 1.0;
        let mut w = norm;
        let mut x = Vec::with_capacity(d);
        for (k, &i) in idx.iter().enumerate() {
            let (v, wv) = unit[i];
            x.push(rest * v);
            w *= wv * (1.0 - v).powi((d - 2 - k) as i32);
            rest *= 1.0 - v;
        }
        x.push(rest);
        out.push((x, w));
        let mut j = 0;
        while j < d - 1 {
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == d - 1 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(sphere_monomial_integral(1, &mi(&[2]), &mi(&[1])), 0.0);
        assert_relative_eq!(sphere_monomial_integral(1, &mi(&[5]), &mi(&[5])), 1.0, epsilon = 1e-14);
        assert_relative_eq!(
            sphere_monomial_integral(2, &mi(&[1, 0]), &mi(&[1, 0])),
            0.5,
            epsilon = 1e-14
        );
        // d = 3, ν = (1,1,0): 2! · 1 / 4! = 1/12.
        assert_relative_eq!(
            sphere_monomial_integral(3, &mi(&[1, 1, 0]), &mi(&[1, 1, 0])),
            1.0 / 12.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn cubature_matches_closed_form() {
        for d in 1..=3usize {
            let cub = SphereCubature::new(d, 10);
            let total: f64 = cub.iter().map(|(_, w)| w).sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-13);
            for nu in MultiIndex::all_up_to(d, 3) {
                for mu in MultiIndex::all_up_to(d, 3) {
                    let s: C64 = cub
                        .iter()
                        .map(|(z, w)| nu.monomial(z) * mu.monomial(z).conj() * w)
                        .sum();
                    let exact = sphere_monomial_integral(d, &nu, &mu);
                    assert!((s - exact).norm() < 1e-12, "d={d} ν={nu} μ={mu}: {s} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn points_are_unit_vectors() {
        let cub = SphereCubature::new(3, 6);
        for (z, _) in cub.iter() {
            let n: f64 = z.iter().map(|c| c.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }
}
