use std::f64::consts::PI;

use gruss_core::gen::{GenConfig, Sampler};
use gruss_core::transforms::{
    alpha_bound_check, fourier_algebra, fourier_bound_check, fourier_kernel_direct, fourier_kernel_sum,
    fourier_transform, mellin_algebra, mellin_bound_check, mellin_closed_form, mellin_coefficient,
    mellin_transform, power_sum, power_sum_big, TransformParams, DEFAULT_KERNEL_GUARD,
};
use gruss_core::{AlgebraElement, Error, ModuleElement, ModuleTuple, ProbabilityVector, ScalarCoefficients, Tolerance};
use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

/// `2 pi` as an unevaluated sum of two doubles.
const TWO_PI_HI: f64 = 2.0 * PI;
const TWO_PI_LO: f64 = 2.4492935982947064e-16;

/// `sum_k exp(2 i omega m k)` with each angle formed exactly as a two-term
/// product and reduced modulo `2 pi` in double-double arithmetic.
fn kernel_oracle(omega: f64, m: usize, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let c = (2 * m * k) as f64;
        let hi = omega * c;
        let lo = omega.mul_add(c, -hi);
        let j = (hi / TWO_PI_HI).round();
        let r = ((-j).mul_add(TWO_PI_HI, hi) + lo) - j * TWO_PI_LO;
        acc += Complex64::new(r.cos(), r.sin());
    }
    acc
}

#[test]
fn kernel_closed_form_on_grid() {
    let mut checked = 0;
    let mut skipped = 0;
    for i in 1..=15 {
        let omega = i as f64 / 10.0;
        for n in 1..=64 {
            for m in 1..=n {
                let p = TransformParams::new(omega, m, n).unwrap();
                let oracle = kernel_oracle(omega, m, n);
                let direct = fourier_kernel_direct(&p);
                assert!((direct - oracle).norm() <= 1e-12 * n as f64, "direct omega={omega} m={m} n={n}");
                match fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD) {
                    Ok(closed) => {
                        let err = (closed - oracle).norm();
                        assert!(err <= 1e-12 * n as f64, "omega={omega} m={m} n={n} err={err:e}");
                        checked += 1;
                    }
                    Err(Error::SingularKernel { .. }) => skipped += 1,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert_eq!(checked + skipped, 15 * 64 * 65 / 2);
    assert!(checked > 0);
}

#[test]
fn singular_points_are_refused() {
    for (omega, m) in [(PI / 2.0, 2), (PI, 1), (PI / 3.0, 3), (0.0, 1)] {
        let p = TransformParams::new(omega, m, 5).unwrap();
        assert!(p.is_singular(DEFAULT_KERNEL_GUARD));
        assert!(matches!(
            fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD),
            Err(Error::SingularKernel { .. })
        ));
        // the direct sum is still available: every weight is 1
        assert!((fourier_kernel_direct(&p) - Complex64::new(5.0, 0.0)).norm() < 1e-13);
    }
}

#[test]
fn mellin_coefficients_are_nonnegative() {
    // running sums S_p(n) for p <= 398, n <= 200, updated by n^p each step
    let mut sums = vec![BigUint::from(0u32); 399];
    for n in 1..=200u64 {
        let mut pow = BigUint::from(1u32);
        for s_p in sums.iter_mut() {
            *s_p += &pow;
            pow *= n;
        }
        for m in 1..=n as usize {
            let s_hi = &sums[2 * m - 2];
            let s_lo = &sums[m - 1];
            // n S_{2m-2} >= S_{m-1}^2 without subtraction
            assert!(s_hi * BigUint::from(n) >= s_lo * s_lo, "m={m} n={n}");
        }
        if n % 50 == 0 {
            assert_eq!(power_sum_big(17, n), sums[17]);
        }
    }
    for n in 1..=40u64 {
        for m in 1..=n as u32 {
            let c = mellin_coefficient(m, n).unwrap();
            let s_hi = power_sum_big(2 * m - 2, n);
            let s_lo = power_sum_big(m - 1, n);
            assert_eq!(c + &s_lo * &s_lo, s_hi * BigUint::from(n));
        }
    }
}

#[test]
fn mellin_closed_forms_up_to_1000() {
    for n in 1..=1000u64 {
        let nb = BigUint::from(n);
        // oracle: the two displayed polynomials, evaluated independently
        let m2 = &nb * &nb * (n - 1) * (n + 1) / 12u32;
        let m3 = &nb * &nb * (n - 1) * (n + 1) * (2 * n + 1) * (8 * n + 11) / 180u32;
        assert_eq!(mellin_coefficient(2, n).unwrap(), m2, "m=2 n={n}");
        assert_eq!(mellin_coefficient(3, n).unwrap(), m3, "m=3 n={n}");
        assert_eq!(mellin_closed_form(2, n), Some(m2));
        assert_eq!(mellin_closed_form(3, n), Some(m3));
    }
    assert_eq!(mellin_coefficient(2, 2).unwrap(), BigUint::from(1u32));
    assert_eq!(mellin_coefficient(3, 2).unwrap(), BigUint::from(9u32));
    assert_eq!(power_sum(1, 4).unwrap(), 10);
    assert_eq!(power_sum(2, 3).unwrap(), 14);
}

fn sampler(seed: u64) -> Sampler {
    GenConfig::with_seed(seed).sampler()
}

fn constant(x: &ModuleElement, n: usize) -> ModuleTuple {
    ModuleTuple::new(vec![x.clone(); n]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn transforms_are_linear(seed in any::<u64>(), k in 1usize..=3, m in 1usize..=3, n in 1usize..=8, omega in -3.0f64..3.0) {
        let mut s = sampler(seed);
        let xs = s.tuple(n, m, k);
        let ys = s.tuple(n, m, k);
        let a = s.algebra(k);
        let sum = ModuleTuple::new(xs.iter().zip(ys.iter()).map(|(x, y)| x + y).collect()).unwrap();
        let acted = xs.map(|x| x.act(&a)).unwrap();
        let mm = 1 + (seed as usize) % n;
        let p = TransformParams::new(omega, mm, n).unwrap();

        let f = |t: &ModuleTuple| fourier_transform(t, &p).unwrap();
        let lhs = f(&sum);
        let rhs = &f(&xs) + &f(&ys);
        prop_assert!((&lhs - &rhs).norm() <= 1e-12 * (lhs.norm() + 1.0));
        let lhs = f(&acted);
        let rhs = f(&xs).act(&a);
        prop_assert!((&lhs - &rhs).norm() <= 1e-12 * (lhs.norm() + 1.0));

        let g = |t: &ModuleTuple| mellin_transform(t, mm).unwrap();
        let lhs = g(&sum);
        let rhs = &g(&xs) + &g(&ys);
        prop_assert!((&lhs - &rhs).norm() <= 1e-12 * (lhs.norm() + 1.0));
        let lhs = g(&acted);
        let rhs = g(&xs).act(&a);
        prop_assert!((&lhs - &rhs).norm() <= 1e-12 * (lhs.norm() + 1.0));
    }

    #[test]
    fn constant_tuples_give_exact_zero(seed in any::<u64>(), k in 1usize..=3, m in 1usize..=3, n in 1usize..=12, omega in 0.05f64..1.5) {
        let mut s = sampler(seed);
        let x = s.module(m, k);
        let a_s = constant(&x, n);
        let b_s = s.tuple(n, m, k);
        let (a, b) = (s.module(m, k), s.module(m, k));
        let mm = 1 + (seed as usize) % n;
        let tol = Tolerance::default();
        let p = TransformParams::new(omega, mm, n).unwrap();
        if !p.is_singular(DEFAULT_KERNEL_GUARD) {
            let r = fourier_bound_check(&a_s, &b_s, &a, &b, &p, tol).unwrap();
            prop_assert_eq!(r.surrogate.true_error_sq.clone(), AlgebraElement::zeros(k));
            prop_assert!(r.surrogate.loewner_holds);
        }
        let r = mellin_bound_check(&a_s, &b_s, &a, &b, mm, tol).unwrap();
        prop_assert_eq!(r.surrogate.true_error_sq.clone(), AlgebraElement::zeros(k));
        prop_assert!(r.surrogate.loewner_holds && r.chain.loewner_holds);
    }

    #[test]
    fn bound_reports_hold_with_tightness_at_most_one(seed in any::<u64>(), n in 1usize..=16, omega in 0.05f64..1.5) {
        let mut s = sampler(seed);
        let (k, m) = (2, 1 + (seed as usize % 3));
        let a_s = s.tuple(n, m, k);
        let b_s = s.tuple(n, m, k);
        let (a, b) = (s.module(m, k), s.module(m, k));
        let mm = 1 + (seed as usize / 3) % n;
        let tol = Tolerance::default();
        let mut reports = Vec::new();
        let p = TransformParams::new(omega, mm, n).unwrap();
        if !p.is_singular(DEFAULT_KERNEL_GUARD) {
            let r = fourier_bound_check(&a_s, &b_s, &a, &b, &p, tol).unwrap();
            reports.push(r.chain);
            reports.push(r.surrogate);
        }
        let r = mellin_bound_check(&a_s, &b_s, &a, &b, mm, tol).unwrap();
        reports.push(r.chain);
        reports.push(r.surrogate);
        for rep in reports {
            prop_assert!(rep.loewner_holds, "{}", rep.inequality_id);
            let t = rep.tightness.unwrap();
            prop_assert!(t <= 1.0 + tol.rtol, "{} tightness {t}", rep.inequality_id);
        }
    }
}

#[test]
fn omega_zero_and_single_term() {
    let mut s = sampler(1);
    let xs = s.tuple(4, 2, 2);
    let p0 = TransformParams::new(0.0, 1, 4).unwrap();
    let plain = xs.iter().fold(ModuleElement::zeros(2, 2), |acc, x| &acc + x);
    assert!((&fourier_transform(&xs, &p0).unwrap() - &plain).norm() < 1e-14);
    assert!((&mellin_transform(&xs, 1).unwrap() - &plain).norm() < 1e-14);

    let gram_sum = xs.iter().fold(AlgebraElement::zeros(2), |acc, x| &acc + &x.gram());
    let fa = fourier_algebra(&xs, &xs, &p0).unwrap();
    assert!((&fa - &gram_sum).operator_norm() < 1e-13);
    assert!(fa.is_psd(Tolerance::default()).unwrap());

    let one = s.tuple(1, 2, 2);
    let p1 = TransformParams::new(0.3, 1, 1).unwrap();
    let w = Complex64::from_polar(1.0, 0.6);
    assert!((&fourier_transform(&one, &p1).unwrap() - &one.items()[0].scale(w)).norm() < 1e-15);
    assert_eq!(mellin_transform(&one, 5).unwrap(), one.items()[0]);

    // m = 2 on (1, 1, 1) gives S_1(3) = 6
    let ones = ModuleTuple::new(vec![ModuleElement::scalar(Complex64::new(1.0, 0.0)); 3]).unwrap();
    assert_eq!(mellin_transform(&ones, 2).unwrap().matrix()[(0, 0)], Complex64::new(6.0, 0.0));
    assert_eq!(mellin_algebra(&ones, &ones, 2).unwrap().matrix()[(0, 0)], Complex64::new(6.0, 0.0));
}

#[test]
fn fourier_algebra_matches_scalar_sum_at_k_one() {
    let mut s = sampler(17);
    let xs = s.tuple(5, 3, 1);
    let ys = s.tuple(5, 3, 1);
    let p = TransformParams::new(0.7, 2, 5).unwrap();
    let got = fourier_algebra(&xs, &ys, &p).unwrap().matrix()[(0, 0)];
    let mut want = Complex64::new(0.0, 0.0);
    for (k, (x, y)) in xs.iter().zip(ys.iter()).enumerate() {
        let dot: Complex64 = x.matrix().iter().zip(y.matrix().iter()).map(|(a, b)| a.conj() * b).sum();
        want += Complex64::from_polar(1.0, 2.0 * 0.7 * 2.0 * (k + 1) as f64) * dot;
    }
    assert!((got - want).norm() < 1e-12);
}

#[test]
fn fourier_random_instance_holds() {
    let mut s = sampler(70);
    let (a_s, b_s) = (s.tuple(4, 2, 2), s.tuple(4, 2, 2));
    let (a, b) = (s.module(2, 2), s.module(2, 2));
    let p = TransformParams::new(0.7, 2, 4).unwrap();
    let r = fourier_bound_check(&a_s, &b_s, &a, &b, &p, Tolerance::default()).unwrap();
    assert!(r.chain.loewner_holds && r.surrogate.loewner_holds);
    // the surrogate deviation through the coefficient identity:
    // F(A) - K mean(A) = sum_k (w_k - K/n) A_k
    let w = p.weights();
    let n = 4.0;
    let mut dev = ModuleElement::zeros(2, 2);
    for (ak, wk) in a_s.iter().zip(&w) {
        dev = &dev + &ak.scale(wk - r.kernel / n);
    }
    assert!((&dev.gram() - &r.surrogate.true_error_sq).operator_norm() < 1e-12);
}

#[test]
fn mellin_single_moment_has_zero_coefficient() {
    let mut s = sampler(3);
    let (a_s, b_s) = (s.tuple(6, 2, 2), s.tuple(6, 2, 2));
    let (a, b) = (s.module(2, 2), s.module(2, 2));
    let r = mellin_bound_check(&a_s, &b_s, &a, &b, 1, Tolerance::default()).unwrap();
    assert_eq!(r.coefficient, "0");
    assert!(r.surrogate.true_error_sq.operator_norm() < 1e-12);
    assert!(r.surrogate.loewner_holds);
}

#[test]
fn alpha_bound_against_direct_variances() {
    let mut s = sampler(33);
    let n = 3;
    let alphas = s.scalars(n);
    let a_s = s.tuple(n, 2, 2);
    let p = s.probability(n);
    let zero = ModuleElement::zeros(2, 2);
    let r = alpha_bound_check(&alphas, &a_s, &zero, &zero, &p, Tolerance::default()).unwrap();
    assert!(r.translated.loewner_holds && r.centered.loewner_holds);

    // oracle: scalar variance of alpha times operator variance of A
    let w = p.weights();
    let mean_a: Complex64 = alphas.values().iter().zip(w).map(|(x, wi)| x * wi).sum();
    let var_a: f64 = alphas.values().iter().zip(w).map(|(x, wi)| wi * x.norm_sqr()).sum::<f64>() - mean_a.norm_sqr();
    let mean_op = a_s.weighted_mean(&p);
    let mut second = AlgebraElement::zeros(2);
    for (x, wi) in a_s.iter().zip(w) {
        second = &second + &x.gram().scale_real(*wi);
    }
    let var_op = &second - &mean_op.gram();
    let rhs = var_op.scale_real(var_a);
    let mut delta = ModuleElement::zeros(2, 2);
    for ((x, al), wi) in a_s.iter().zip(alphas.values()).zip(w) {
        delta = &delta + &x.scale(al * wi);
    }
    let delta = &delta - &mean_op.scale(mean_a);
    assert!((&delta.gram() - &r.centered.true_error_sq).operator_norm() < 1e-12);
    assert!((&rhs - &r.centered.bound_mid).operator_norm() < 1e-12);
}

#[test]
fn alpha_bound_trivial_cases() {
    let mut s = sampler(8);
    let n = 4;
    let x = s.module(2, 2);
    let p = ProbabilityVector::uniform(n).unwrap();
    let (a, b) = (s.module(2, 2), s.module(2, 2));
    let flat = ScalarCoefficients(vec![Complex64::new(0.3, -1.0); n]);
    let r = alpha_bound_check(&flat, &s.tuple(n, 2, 2), &a, &b, &p, Tolerance::default()).unwrap();
    assert!(r.translated.true_error_sq.operator_norm() < 1e-14);
    let r = alpha_bound_check(&s.scalars(n), &constant(&x, n), &a, &b, &p, Tolerance::default()).unwrap();
    assert_eq!(r.translated.true_error_sq, AlgebraElement::zeros(2));

    let rect = s.tuple(n, 3, 2);
    let err = alpha_bound_check(&s.scalars(n), &rect, &a, &b, &p, Tolerance::default());
    assert!(matches!(err, Err(Error::Domain(_))));
}
