use std::f64::consts::{PI, TAU};

use arithext::quad::exp_sinh;
use arithext::tori::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn lattice() -> impl Strategy<Value = PeriodLattice> {
    (-0.5f64..0.5, 0.6f64..2.0).prop_map(|(x, y)| PeriodLattice::elliptic(c(x, y)).unwrap())
}

fn class() -> impl Strategy<Value = UveClass> {
    prop::collection::vec((-2.0f64..2.0, -4.0f64..4.0), 2).prop_map(|v| UveClass::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
}

/// Continued-fraction convergents `p/q` of `x` with `q ≤ qmax`.
fn convergents(x: f64, qmax: u64) -> Vec<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut t = x;
    let mut out = Vec::new();
    for _ in 0..40 {
        let a = t.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        if q2 as u64 > qmax {
            break;
        }
        out.push((p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let f = t - a;
        if f < 1e-15 {
            break;
        }
        t = 1.0 / f;
    }
    out
}

/// `Q(a, b) = ∫_0^∞ dt / √((t² + a)(t² + b))` by direct quadrature.
fn elliptic_quadrature(a: f64, b: f64) -> f64 {
    exp_sinh(|t| 1.0 / ((t * t + a) * (t * t + b)).sqrt(), 1e-15)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn monodromy_ignores_period_shifts(cl in class(), m in prop::collection::vec(-50i64..50, 2)) {
        prop_assert_eq!(monodromy(&cl), monodromy(&cl.shift_by_periods(&m)));
    }

    #[test]
    fn float_level_shifts_agree_closely(cl in class(), m in prop::collection::vec(-5i64..5, 2)) {
        let shifted = UveClass::new(cl.values.iter().zip(&m).map(|(v, k)| v + c(0.0, TAU * *k as f64)).collect());
        let (a, b) = (monodromy(&cl), monodromy(&shifted));
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).norm() <= 1e-13 * x.norm().max(1.0));
        }
    }

    #[test]
    fn hodge_split_reconstructs(l in lattice(), cl in class()) {
        let s = hodge_split(&l, &cl).unwrap();
        prop_assert!(s.residual <= 1e-10);
    }

    #[test]
    fn unitary_lift_is_compact_and_differs_by_a_linear_map(l in lattice(), cl in class()) {
        let lift = unitary_lift(&l, &cl).unwrap();
        prop_assert!(in_max_compact(&lift.class, 0.0));
        for (k, g) in l.generators().iter().enumerate() {
            let d = cl.values[k] - lift.class.values[k] - lift.linear[0] * g[0];
            prop_assert!(d.norm() <= 1e-10, "{d}");
        }
    }

    #[test]
    fn unitary_lift_is_additive(l in lattice(), a in class(), b in class()) {
        let sum = unitary_lift(&l, &a.add(&b)).unwrap();
        let (la, lb) = (unitary_lift(&l, &a).unwrap(), unitary_lift(&l, &b).unwrap());
        for k in 0..2 {
            let d = sum.class.values[k] - la.class.values[k] - lb.class.values[k];
            prop_assert!(d.norm() <= 1e-12 * (1.0 + a.values[k].norm() + b.values[k].norm()) * 10.0);
        }
    }

    #[test]
    fn torsion_order_matches_gcd_oracle(n in 1u64..=12, p in prop::collection::vec(-30i64..30, 2)) {
        let exact = nabla_tor_char(n, &p).unwrap();
        let g = p.iter().fold(n as i64, |acc, &x| num_integer::gcd(acc, x));
        let expected = n / g as u64;
        prop_assert_eq!(is_torsion(&exact, 10_000, 1e-9), Some(expected));
        let float_only = UveClass::new(exact.values.clone());
        prop_assert_eq!(is_torsion(&float_only, 10_000, 1e-9), Some(expected));
        prop_assert!(monodromy(&exact).pow(expected as i64).is_trivial());
    }

    #[test]
    fn doubling_identity(l in lattice(), cl in class()) {
        let d = conjugate_double(&l, &cl).unwrap();
        prop_assert!(d.modulus_residual <= 1e-12 * d.diagonal.iter().map(|x| x.norm()).fold(1.0, f64::max));
        prop_assert!(d.diagonal_spans);
    }

    #[test]
    fn invariant_unitary_classes_are_real_on_real_periods(k in -5i64..5, y in -6.0f64..6.0, x in -1.0f64..1.0) {
        let l = PeriodLattice::square();
        let unitary = UveClass::new(vec![c(0.0, PI * k as f64), c(0.0, y)]);
        let rep = real_monodromy_test(&l, &unitary, 1e-9).unwrap();
        prop_assert!(rep.conjugation_invariant && rep.unitary && rep.real_values_pm1);
        let general = UveClass::new(vec![c(x, PI * k as f64), c(0.0, y)]);
        prop_assert!(real_monodromy_test(&l, &general, 1e-9).unwrap().implication_holds);
    }

    #[test]
    fn periods_scale_inversely(lambda in 0.3f64..3.0, e1 in 0.2f64..2.0, t in 0.05f64..0.95) {
        // e1 > e2 > e3 with e1 + e2 + e3 = 0
        let e2 = -e1 * t / 2.0;
        let e3 = -e1 - e2;
        let g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
        let g3 = 4.0 * e1 * e2 * e3;
        let (_, p) = weierstrass_periods(g2, g3).unwrap();
        let (_, q) = weierstrass_periods(lambda.powi(4) * g2, lambda.powi(6) * g3).unwrap();
        prop_assert!((q.omega_real * lambda - p.omega_real).abs() <= 1e-12 * p.omega_real);
        prop_assert!((q.omega_imag * lambda - p.omega_imag).abs() <= 1e-12 * p.omega_imag);
    }
}

#[test]
fn margin_matches_continued_fraction_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let theta: f64 = rng.random_range(0.05..0.95);
        let nmax = 500;
        let cl = UveClass::new(vec![c(0.0, TAU * theta)]);
        let oracle = convergents(theta, nmax)
            .iter()
            .map(|&(p, q)| TAU * (q as f64 * theta - p as f64).abs())
            .fold(f64::INFINITY, f64::min);
        let brute = irrationality_margin(&cl, nmax);
        assert!((brute - oracle).abs() <= 1e-9, "theta={theta}: {brute} vs {oracle}");
    }
}

#[test]
fn agm_matches_quadrature_on_random_rectangular_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    for _ in 0..10 {
        let e1: f64 = rng.random_range(0.5..3.0);
        let e2 = e1 * rng.random_range(-0.45..0.95) / 2.0 - e1 / 4.0;
        let e3 = -e1 - e2;
        assert!(e1 > e2 && e2 > e3);
        let g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
        let g3 = 4.0 * e1 * e2 * e3;
        let (_, p) = weierstrass_periods(g2, g3).unwrap();
        let real = 2.0 * elliptic_quadrature(e1 - e2, e1 - e3);
        let imag = 2.0 * elliptic_quadrature(e1 - e3, e2 - e3);
        assert!((p.omega_real - real).abs() <= 1e-12 * real, "{} vs {real}", p.omega_real);
        assert!((p.omega_imag - imag).abs() <= 1e-12 * imag, "{} vs {imag}", p.omega_imag);
    }
}

#[test]
fn square_two_torsion() {
    let l = PeriodLattice::square();
    let cl = nabla_tor_char(2, &[1, 0]).unwrap();
    assert_eq!(is_torsion(&cl, 10_000, 1e-9), Some(2));
    assert!(in_max_compact(&cl, 0.0));
    let v = schneider_lang_flag(&l, &cl, &[0, 1], 1e-9, 10_000).unwrap();
    assert!(v.criterion_applies && v.consistent && v.torsion_order == Some(2));
    assert!(matches!(schneider_lang_flag(&l, &cl, &[], 1e-9, 100), Err(arithext::Error::NotABasis(_))));
}
