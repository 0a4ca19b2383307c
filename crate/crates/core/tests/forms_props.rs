use arithext::forms::{parse, Bidegree, Cover, Expr, Form};
use num_complex::Complex64;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::z()),
        Just(Expr::zbar()),
        (-6i32..=6, -6i32..=6).prop_map(|(a, b)| Expr::constant(Complex64::new(a as f64 / 2.0, b as f64 / 2.0))),
    ]
}

/// Rational functions of `z, z̄` with nonvanishing denominators, plus bounded exponentials.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            inner.clone().prop_map(|a| a.div(&Expr::one().add(&Expr::z().mul(&Expr::zbar())))),
            inner.prop_map(|a| a.div(&Expr::real(2.0).add(&Expr::z().mul(&Expr::zbar()))).exp()),
        ]
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.2f64..1.8, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn sample_points() -> Vec<Complex64> {
    (0..24).map(|k| Complex64::from_polar(0.3 + 0.06 * k as f64, 0.7 * k as f64)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(f in expr()) {
        let f = Form::function(f);
        prop_assert!(f.d().d().is_zero() || f.d().d().exact_zero().unwrap());
        prop_assert!(f.del().del().is_zero());
        prop_assert!(f.delbar().delbar().is_zero());
    }

    #[test]
    fn del_delbar_anticommute(f in expr()) {
        let f = Form::function(f);
        let s = f.del().delbar().add(&f.delbar().del());
        prop_assert!(s.max_norm(&sample_points()).unwrap() <= 1e-9 * (1.0 + f.del().delbar().max_norm(&sample_points()).unwrap()));
    }

    #[test]
    fn wirtinger_matches_central_differences(f in expr(), p in point()) {
        let h = 1e-5;
        let (fz, fzb) = f.wirtinger();
        let ev = |q: Complex64| f.eval(q).unwrap();
        let fx = (ev(p + h) - ev(p - h)) / (2.0 * h);
        let fy = (ev(p + Complex64::new(0.0, h)) - ev(p - Complex64::new(0.0, h))) / (2.0 * h);
        let i = Complex64::new(0.0, 1.0);
        let dz = (fx - i * fy) / 2.0;
        let dzb = (fx + i * fy) / 2.0;
        let ez = fz.eval(p).unwrap();
        let ezb = fzb.eval(p).unwrap();
        let scale = ev(p).norm().max(1.0);
        prop_assert!((dz - ez).norm() <= 1e-6 * ez.norm().max(scale), "{dz} vs {ez}");
        prop_assert!((dzb - ezb).norm() <= 1e-6 * ezb.norm().max(scale), "{dzb} vs {ezb}");
    }

    #[test]
    fn sexpr_roundtrip(f in expr()) {
        let text = f.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        for p in sample_points() {
            prop_assert_eq!(f.eval(p).unwrap(), back.eval(p).unwrap());
        }
    }

    #[test]
    fn pullback_is_functorial_on_three_charts(f in expr(), g in expr()) {
        let cover = Cover::p1_three(7);
        let form = Form::dz(f).add(&Form::dzbar(g));
        let two_step = cover.pull(&cover.pull(&form, 2, 1).unwrap(), 1, 0).unwrap();
        let direct = cover.pull(&form, 2, 0).unwrap();
        let pts = cover.grid(&[0, 1, 2]).unwrap();
        let dev = two_step.max_deviation(&direct, pts).unwrap();
        let size = direct.max_norm(pts).unwrap().max(1.0);
        prop_assert!(dev <= 1e-9 * size, "deviation {dev}");
    }
}

#[test]
fn wedge_sign_convention() {
    let top = Form::dzbar(Expr::one()).wedge(&Form::dz(Expr::one())).coeff(Bidegree::TOP);
    assert_eq!(top.as_const(), Some(Complex64::new(-1.0, 0.0)));
}
