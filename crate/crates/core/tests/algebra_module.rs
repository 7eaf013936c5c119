use gruss_core::gen::{GenConfig, Sampler};
use gruss_core::module::{gruss_e, gruss_p, inner_product, module_norm, right_action};
use gruss_core::{loewner_slack, AlgebraElement, Tolerance};
use num_complex::Complex64;
use proptest::prelude::*;

fn sampler(seed: u64) -> Sampler {
    GenConfig::with_seed(seed).sampler()
}

fn close(a: &AlgebraElement, b: &AlgebraElement, rel: f64) -> bool {
    let scale = a.operator_norm().max(b.operator_norm()) + 1.0;
    (a - b).operator_norm() <= rel * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inner_product_axioms(seed in any::<u64>(), k in 1usize..=4, m in 1usize..=4) {
        let mut s = sampler(seed);
        let (x, y, z) = (s.module(m, k), s.module(m, k), s.module(m, k));
        let a = s.algebra(k);
        let lam = s.complex();

        let xy = inner_product(&x, &y).unwrap();
        prop_assert!(close(&inner_product(&y, &x).unwrap(), &xy.adjoint(), 1e-14));
        let right = inner_product(&x, &right_action(&y, &a).unwrap()).unwrap();
        prop_assert!(close(&right, &(&xy * &a), 1e-13));
        let sum = inner_product(&x, &(&y + &z.scale(lam))).unwrap();
        let expected = &xy + &inner_product(&x, &z).unwrap().scale(lam);
        prop_assert!(close(&sum, &expected, 1e-13));

        let g = x.gram();
        prop_assert!(g.min_eigenvalue().unwrap() >= -1e-14 * (g.operator_norm() + 1.0));
        let n = module_norm(&x);
        prop_assert!((n * n - g.operator_norm()).abs() <= 1e-13 * (n * n + 1.0));
    }

    #[test]
    fn absolute_value_and_square_root(seed in any::<u64>(), k in 1usize..=4) {
        let mut s = sampler(seed);
        let a = s.algebra(k);
        let gram = &a.adjoint() * &a;
        let abs = a.abs().unwrap();
        prop_assert!(close(&(&abs * &abs), &gram, 1e-12));
        prop_assert!(abs.min_eigenvalue().unwrap() >= -1e-14);
        let root = gram.sqrt_psd(Tolerance::default()).unwrap();
        prop_assert!(close(&(&root * &root), &gram, 1e-12));
    }

    #[test]
    fn norms_and_spectra(seed in any::<u64>(), k in 1usize..=4) {
        let mut s = sampler(seed);
        let (a, b) = (s.algebra(k), s.algebra(k));
        prop_assert!((&a * &b).operator_norm() <= a.operator_norm() * b.operator_norm() * (1.0 + 1e-13) + 1e-15);
        prop_assert!(a.spectral_radius().unwrap() <= a.operator_norm() * (1.0 + 1e-12) + 1e-15);
        // C* identity |a* a| = |a|^2
        let n = a.operator_norm();
        prop_assert!(((&a.adjoint() * &a).operator_norm() - n * n).abs() <= 1e-13 * (n * n + 1.0));
    }

    #[test]
    fn loewner_order_is_consistent(seed in any::<u64>(), k in 1usize..=4) {
        let mut s = sampler(seed);
        let a = s.algebra(k).hermitian_part();
        let c = s.algebra(k);
        let above = &a + &(&c.adjoint() * &c);
        let tol = Tolerance::default();
        prop_assert!(gruss_core::loewner_leq(&a, &above, tol).unwrap());
        // slack(a, b) = -slack_max(b, a): lambda_min(b - a) = -lambda_max(a - b)
        let fwd = loewner_slack(&a, &above).unwrap();
        let back = (&a - &above).max_eigenvalue().unwrap();
        prop_assert!((fwd + back).abs() <= 1e-12 * (above.operator_norm() + 1.0));
    }

    #[test]
    fn gruss_functionals_are_positive(seed in any::<u64>(), k in 1usize..=4, m in 1usize..=4, n in 1usize..=6) {
        let mut s = sampler(seed);
        let xs = s.tuple(n, m, k);
        let p = s.probability(n);
        let g = gruss_p(&xs, &xs, &p).unwrap();
        prop_assert!(g.min_eigenvalue().unwrap() >= -1e-13 * (g.operator_norm() + 1.0));

        let rank = (seed as usize) % (m.min(k) + 1);
        let e = s.partial_isometry(m, k, rank).unwrap();
        let x = s.module(m, k);
        let ge = gruss_e(&x, &x, &e, Tolerance::default()).unwrap();
        prop_assert!(ge.min_eigenvalue().unwrap() >= -1e-13 * (x.gram().operator_norm() + 1.0));
    }
}

#[test]
fn scalar_gram_of_unit_vector_is_one() {
    let x = gruss_core::ModuleElement::column(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
    let g = x.gram();
    assert!((g.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
}
