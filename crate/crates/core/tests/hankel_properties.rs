use focklab::fock::{SpaceParams, TaylorSymbol};
use focklab::hankel::{build_hankel, lift_t, solve_a_coeffs};
use focklab::{CMatrix, C64};
use proptest::prelude::*;

fn space(d: usize, m: f64) -> SpaceParams {
    SpaceParams::new(d, m, 1.0).unwrap()
}

/// Haar-like unitary from the QR factor of a seeded Gaussian matrix.
fn unitary(n: usize, entries: &[(f64, f64)]) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |i, j| {
        let (re, im) = entries[i * n + j];
        C64::new(re, im)
    });
    g.qr().q()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hankel_is_linear_in_the_symbol(
        seed in 0u64..1000,
        d in 1usize..=2,
        m in 1.0f64..3.0,
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        let params = space(d, m);
        let n_trunc = if d == 1 { 10 } else { 5 };
        let b1 = TaylorSymbol::random_decay(d, 2, seed, 0.7, 2 * n_trunc);
        let b2 = TaylorSymbol::random_decay(d, 2, seed + 1, 0.7, 2 * n_trunc);
        let lambda = C64::new(re, im);
        let h1 = build_hankel(&params, &b1, n_trunc).unwrap().entries;
        let h2 = build_hankel(&params, &b2, n_trunc).unwrap().entries;
        let h = build_hankel(&params, &b1.add_scaled(&b2, lambda), n_trunc).unwrap().entries;
        let expected = &h1 + &h2 * lambda;
        let err = max_abs(&(&h - &expected)) / max_abs(&expected).max(1e-300);
        prop_assert!(err < 1e-12, "relative error {err}");
    }

    #[test]
    fn truncated_norm_grows_with_truncation(seed in 0u64..1000, m in 1.0f64..3.0, decay in 0.2f64..1.0) {
        let params = space(1, m);
        let b = TaylorSymbol::random_decay(1, 1, seed, decay, 24);
        let norms: Vec<f64> = (2..=12)
            .step_by(2)
            .map(|n| build_hankel(&params, &b, n).unwrap().operator_norm())
            .collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-12), "{norms:?}");
        }
    }

    #[test]
    fn lift_dominates_the_hankel_matrix(seed in 0u64..1000, m in 1.0f64..2.5) {
        let params = space(1, m);
        let n_trunc = 6;
        let b = TaylorSymbol::random_decay(1, 2, seed, 0.6, 2 * n_trunc);
        let h = build_hankel(&params, &b, n_trunc).unwrap().operator_norm();
        let t = lift_t(&params, &b, n_trunc).unwrap().operator_norm();
        prop_assert!(h <= t + 1e-10, "‖H‖ = {h}, ‖T‖ = {t}");
    }

    #[test]
    fn unitary_rotation_keeps_the_spectrum(
        seed in 0u64..1000,
        entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
    ) {
        prop_assume!(entries.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 0.1);
        let params = space(1, 1.5);
        let n_trunc = 8;
        let b = TaylorSymbol::random_decay(1, 2, seed, 0.6, 2 * n_trunc);
        let u = unitary(2, &entries);
        let s = build_hankel(&params, &b, n_trunc).unwrap().singular_spectrum(6);
        let su = build_hankel(&params, &b.left_mul(&u), n_trunc).unwrap().singular_spectrum(6);
        for (x, y) in s.iter().zip(&su) {
            prop_assert!((x - y).abs() <= 1e-11 * s[0].max(1.0), "{s:?} vs {su:?}");
        }
    }

    #[test]
    fn a_coefficients_obey_the_growth_bound(m in 1.0f64..8.0, d in 1usize..=3) {
        // Sharp in this range: the worst ratio is exactly 2^{d+1}.
        let a = solve_a_coeffs(m, d).unwrap();
        let c = (1u32 << (d + 1)) as f64;
        for (l, x) in a.iter().enumerate() {
            let bound = c * (m + 1.0).powi((d - l) as i32);
            prop_assert!(x.abs() <= bound * (1.0 + 1e-12), "l = {l}: |a_l| = {} > {bound}", x.abs());
        }
    }
}

#[test]
fn a_coefficient_constant_saturates_in_m() {
    let constant = |m: f64, d: usize| {
        let a = solve_a_coeffs(m, d).unwrap();
        a.iter()
            .enumerate()
            .map(|(l, x)| x.abs() / (m + 1.0).powi((d - l) as i32))
            .fold(0.0, f64::max)
    };
    for d in 4..=6 {
        let tail: Vec<f64> = [20.0, 50.0, 100.0, 200.0].iter().map(|&m| constant(m, d)).collect();
        assert!(tail.windows(2).all(|w| w[1] >= w[0]), "d = {d}: {tail:?}");
        // Growth between m = 100 and m = 200 is already below 5%.
        assert!(tail[3] / tail[2] < 1.05, "d = {d}: {tail:?}");
    }
}
