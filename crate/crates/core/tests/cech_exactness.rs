use std::sync::Arc;

use arithext::atiyah::{c1_hodge, direct_sum, line_bundle_fs, line_bundle_fs_three};
use arithext::cech::{coboundary, delta, map_b, map_iota, map_nu, map_psi, residue_degree, Cochain, Coefficients, ConeCocycle};
use arithext::forms::cover::DEFAULT_SEED;
use arithext::forms::{Bidegree, Cover, Expr, ExprMatrix, Form, FormMatrix};
use arithext::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn p1() -> Arc<Cover> {
    Arc::new(Cover::p1(DEFAULT_SEED))
}

fn p1_three() -> Arc<Cover> {
    Arc::new(Cover::p1_three(DEFAULT_SEED))
}

/// Polynomial in `z` with small integer coefficients.
fn holo_poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec(-3i32..=3, 1..4).prop_map(|cs| {
        Expr::sum(cs.iter().enumerate().map(|(k, &c)| Expr::real(c as f64).mul(&Expr::z().powi(k as i32))))
    })
}

/// Smooth function of `z, z̄` without poles.
fn smooth_fn() -> impl Strategy<Value = Expr> {
    (holo_poly(), holo_poly()).prop_map(|(a, b)| a.add(&b.conj()).div(&Expr::one().add(&Expr::z().mul(&Expr::zbar()))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_squared_vanishes(fs in prop::collection::vec(smooth_fn(), 3)) {
        let cover = p1_three();
        let c0 = Cochain::scalar0(fs.into_iter().map(Form::dz).collect());
        let d2 = delta(&cover, &Coefficients::Scalar, &delta(&cover, &Coefficients::Scalar, &c0).unwrap()).unwrap();
        prop_assert!(d2.max_norm(&cover).unwrap() <= 1e-9);
    }

    #[test]
    fn cocycle_group_laws(a in -3i32..=3, b in -3i32..=3, g0 in holo_poly(), g1 in holo_poly()) {
        let x = c1_hodge(&line_bundle_fs(p1(), a).unwrap()).unwrap();
        let gamma = Cochain::scalar0(vec![Form::dz(g0), Form::dz(g1)]);
        let y = c1_hodge(&line_bundle_fs(p1(), b).unwrap()).unwrap()
            .add(&coboundary(p1(), Coefficients::Scalar, Bidegree::DZ, &gamma).unwrap()).unwrap();
        prop_assert!(x.add(&y).unwrap().exact_eq(&y.add(&x).unwrap()).unwrap());
        prop_assert!(x.add(&x.neg()).unwrap().exact_eq(&ConeCocycle::zero(p1(), Coefficients::Scalar, Bidegree::DZ)).unwrap());
        prop_assert!(x.zscale(2).exact_eq(&x.add(&x).unwrap()).unwrap());
        prop_assert!(y.check(1e-10).unwrap().passes);
    }

    #[test]
    fn nu_after_b_vanishes(fs in prop::collection::vec(smooth_fn(), 2)) {
        let t = Cochain::scalar0(fs.into_iter().map(Form::dz).collect());
        prop_assert!(map_nu(&map_b(p1(), Coefficients::Scalar, Bidegree::DZ, &t).unwrap()).is_zero());
    }

    #[test]
    fn psi_ignores_holomorphic_coboundaries(n in -3i32..=3, g0 in holo_poly(), g1 in holo_poly()) {
        let c = c1_hodge(&line_bundle_fs(p1(), n).unwrap()).unwrap();
        let gamma = Cochain::scalar0(vec![Form::dz(g0), Form::dz(g1)]);
        let cob = coboundary(p1(), Coefficients::Scalar, Bidegree::DZ, &gamma).unwrap();
        let before = map_psi(&c, 1e-10).unwrap().forms;
        let after = map_psi(&c.add(&cob).unwrap(), 1e-10).unwrap().forms;
        let cover = p1();
        prop_assert!(after.sub(&before).unwrap().max_norm(&cover).unwrap() <= 1e-10);
        prop_assert!(residue_degree(&cob).unwrap().norm() <= 1e-12);
    }
}

#[test]
fn b_after_iota_is_a_coboundary_for_constants() {
    for cover in [p1(), p1_three()] {
        let k = cover.charts();
        let phi = Cochain::scalar0(vec![Form::function(Expr::constant(Complex64::new(2.0, -1.0))); k]);
        let s = map_iota(&phi).unwrap();
        let lhs = map_b(cover.clone(), Coefficients::Scalar, Bidegree::FUNCTION, &s).unwrap();
        let rhs = coboundary(cover.clone(), Coefficients::Scalar, Bidegree::FUNCTION, &phi).unwrap();
        assert!(lhs.exact_eq(&rhs).unwrap());
        assert!(rhs.exact_check().unwrap());
    }
}

#[test]
fn b_after_iota_is_a_coboundary_for_adjoint_sections() {
    // End(𝒪 ⊕ 𝒪(2)): the lower-left entry is a section of 𝒪(2)
    let data = direct_sum(&line_bundle_fs(p1(), 0).unwrap(), &line_bundle_fs(p1(), 2).unwrap()).unwrap();
    let cover = data.cover().clone();
    let coeffs = data.coefficients().unwrap();
    let z = Expr::z();
    let m0 = ExprMatrix::from_rows(vec![
        vec![Expr::real(3.0), Expr::zero()],
        vec![Expr::one().add(&z.mul(&z)).sub(&z), Expr::real(-1.0)],
    ])
    .unwrap();
    let s0 = FormMatrix::homogeneous(Bidegree::FUNCTION, &m0);
    let s1 = coeffs.transport(&cover, &s0, 0, 1).unwrap();
    assert!(s1.coeffs(Bidegree::FUNCTION).is_holomorphic());
    let phi = Cochain::from_values(0, 2, [(vec![0], s0), (vec![1], s1)]).unwrap();
    assert!(delta(&cover, &coeffs, &phi).unwrap().exact_zero().unwrap());
    let lhs = map_b(cover.clone(), coeffs.clone(), Bidegree::FUNCTION, &map_iota(&phi).unwrap()).unwrap();
    let rhs = coboundary(cover, coeffs, Bidegree::FUNCTION, &phi).unwrap();
    assert!(lhs.exact_eq(&rhs).unwrap());
}

#[test]
fn iota_rejects_smooth_sections() {
    let phi = Cochain::scalar0(vec![Form::function(Expr::zbar()), Form::function(Expr::zbar())]);
    assert!(matches!(map_iota(&phi), Err(Error::NotHolomorphic(_))));
}

#[test]
fn three_chart_cocycles_have_nontrivial_triple_overlap() {
    for n in [-3, -1, 2] {
        let c = c1_hodge(&line_bundle_fs_three(p1_three(), n).unwrap()).unwrap();
        let cover = p1_three();
        let d = delta(&cover, &Coefficients::Scalar, &c.alpha).unwrap();
        assert!(d.exact_zero().unwrap());
        assert!(c.alpha.keys().count() == 3);
    }
}

#[test]
fn nonzero_degree_is_detected_by_nu() {
    for n in [-3, -2, -1, 1, 2, 3] {
        let c = c1_hodge(&line_bundle_fs(p1(), n).unwrap()).unwrap();
        assert!(!map_nu(&c).is_zero());
        assert!((residue_degree(&c).unwrap().re - n as f64).abs() < 1e-9);
    }
}
