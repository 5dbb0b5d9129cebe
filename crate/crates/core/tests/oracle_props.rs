mod common;

use common::random_matrix;
use expoly::oracle::{bezier_to_power, de_casteljau, direct_eval, horner_power, taylor_ode_step_matrix};
use expoly::smallmat::max_abs_diff;
use expoly::transform::{translation_matrix, trig_translation_matrix};
use expoly::{BasisDescriptor, DenseMatrix};
use proptest::prelude::*;

/// `P_i = sum_{k<=i} C(i,k) / C(n,k) c_k`.
fn power_to_bezier(c: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = c.len() - 1;
    let binom = expoly::transform::binomials(n);
    (0..=n)
        .map(|i| {
            (0..=i).fold(vec![0.0; c[0].len()], |acc, k| {
                let w = binom[i][k] / binom[n][k];
                acc.iter().zip(&c[k]).map(|(a, x)| a + w * x).collect()
            })
        })
        .collect()
}

fn taylor_error(a: &DenseMatrix, exact: impl Fn(f64) -> DenseMatrix, h: f64, s: usize) -> f64 {
    taylor_ode_step_matrix(a, h, s).unwrap().max_abs_diff(&exact(h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn taylor_local_error_is_order_s_plus_one(h in 0.05f64..0.2, s in 2usize..8) {
        // Keep the halved error well above rounding so the ratio is meaningful.
        let a = BasisDescriptor::trig(1.0).unwrap().derivative_matrix();
        let e1 = taylor_error(&a, trig_translation_matrix, h, s);
        let e2 = taylor_error(&a, trig_translation_matrix, h / 2.0, s);
        prop_assume!(e2 > 1e-13);
        let ratio = e1 / e2;
        let expected = 2f64.powi(s as i32 + 1);
        prop_assert!(ratio >= expected / 2.0 && ratio <= expected * 2.0, "s={} ratio={}", s, ratio);
    }

    #[test]
    fn polynomial_oracles_agree(n in 0usize..=10, seed in any::<u64>(), t in 0.0f64..1.0) {
        let m = random_matrix(n + 1, 2, seed);
        let power: Vec<Vec<f64>> = (0..=n).map(|i| m.row(i).to_vec()).collect();
        let points = power_to_bezier(&power);
        let by_horner = horner_power(&power, t);
        let by_casteljau = de_casteljau(&points, t);
        let by_basis = direct_eval(&m.transpose(), &BasisDescriptor::poly(n), t).unwrap();
        prop_assert!(max_abs_diff(&by_casteljau, &by_horner) <= 1e-12);
        prop_assert!(max_abs_diff(&by_basis, &by_horner) <= 1e-12);
        prop_assert!(max_abs_diff(&by_casteljau, &by_basis) <= 1e-12);
    }

    #[test]
    fn bezier_oracles_agree(n in 0usize..=10, seed in any::<u64>(), t in 0.0f64..1.0) {
        let m = random_matrix(n + 1, 2, seed);
        let points: Vec<Vec<f64>> = (0..=n).map(|i| m.row(i).to_vec()).collect();
        let power = bezier_to_power(&points);
        let by_casteljau = de_casteljau(&points, t);
        let coeffs = DenseMatrix::from_columns(&points).unwrap();
        let by_basis = direct_eval(&coeffs, &BasisDescriptor::bernstein(n), t).unwrap();
        prop_assert!(max_abs_diff(&by_casteljau, &by_basis) <= 1e-12);
        // Power coefficients of a Bezier curve grow like 3^n, and Horner's error with them.
        let mass: f64 = power.iter().flatten().map(|x| x.abs()).sum();
        prop_assert!(max_abs_diff(&by_casteljau, &horner_power(&power, t)) <= 1e-15 * mass.max(1.0));
    }
}

#[test]
fn taylor_sixth_order_ratio_is_128() {
    let a = BasisDescriptor::trig(1.0).unwrap().derivative_matrix();
    for h in [0.1, 0.2, 0.4] {
        let ratio = taylor_error(&a, trig_translation_matrix, h, 6) / taylor_error(&a, trig_translation_matrix, h / 2.0, 6);
        assert!((64.0..=256.0).contains(&ratio), "h={h} ratio={ratio}");
    }
}

#[test]
fn taylor_matches_closed_form_for_products() {
    let b = BasisDescriptor::product(BasisDescriptor::poly(2), BasisDescriptor::hyper(0.5).unwrap());
    let t = taylor_ode_step_matrix(&b.derivative_matrix(), 0.01, 20).unwrap();
    assert!(t.max_abs_diff(&translation_matrix(&b, 0.01)) < 1e-14);
}
