use std::sync::Arc;

use arithext::atiyah::*;
use arithext::cech::{map_b, Cochain, Coefficients};
use arithext::forms::cover::DEFAULT_SEED;
use arithext::forms::{Bidegree, Cover, Expr, ExprMatrix, Form};

fn p1() -> Arc<Cover> {
    Arc::new(Cover::p1(DEFAULT_SEED))
}

fn fs(n: i32) -> HermitianBundleData {
    line_bundle_fs(p1(), n).unwrap()
}

fn triangular(a: i32, b: i32, p: Expr) -> HermitianBundleData {
    let d = direct_sum(&fs(a), &fs(b)).unwrap();
    let g0 = ExprMatrix::from_rows(vec![vec![Expr::one(), p], vec![Expr::zero(), Expr::one()]]).unwrap();
    gauge_chart0(&d, &g0).unwrap()
}

#[test]
fn tensor_and_dual_laws_are_exact() {
    for a in -3..=3 {
        assert!(verify_dual_law(&fs(a)).unwrap());
        for b in -3..=3 {
            assert!(verify_tensor_law(&fs(a), &fs(b)).unwrap(), "{a} {b}");
        }
    }
}

#[test]
fn opposite_degrees_cancel() {
    let t = tensor(&fs(1), &fs(-1)).unwrap();
    let c = c1_hodge(&t).unwrap();
    assert!(c.alpha.exact_zero().unwrap() && c.beta.exact_zero().unwrap());
    assert!(chern_number(&t).unwrap().quadrature.abs() < 1e-6);
}

#[test]
fn pullback_by_powers_multiplies_degree() {
    for d in 1..=3 {
        let maps = vec![Expr::z().powi(d), Expr::z().powi(d)];
        for n in [-2, 1, 3] {
            assert!(verify_pullback_law(&fs(n), &maps, 1e-10).unwrap());
            let pulled = pullback_bundle(&fs(n), &maps, 1e-10).unwrap();
            let cn = chern_number(&pulled).unwrap();
            assert!((cn.quadrature - (d * n) as f64).abs() <= 1e-6, "d={d} n={n}: {cn:?}");
            assert!((cn.residue - (d * n) as f64).abs() <= 1e-6);
        }
    }
}

#[test]
fn pullback_rejects_maps_that_move_charts() {
    let maps = vec![Expr::z().add(&Expr::one()), Expr::z()];
    assert!(pullback_bundle(&fs(1), &maps, 1e-10).is_err());
}

#[test]
fn trivial_bundle_with_potential() {
    let z = Expr::z();
    let zz = z.mul(&Expr::zbar());
    let one = Expr::one();
    // one global function written in both charts
    let phi = vec![one.add(&zz).recip(), zz.div(&one.add(&zz))];
    let data = trivial_with_potential(p1(), &phi).unwrap();
    assert!(data.validate(1e-10).unwrap().passes);
    let cn = chern_number(&data).unwrap();
    assert!(cn.quadrature.abs() < 1e-6 && cn.residue.abs() < 1e-9);
    let t = Cochain::scalar0(phi.iter().map(|p| Form::function(p.clone()).del().neg()).collect());
    let expected = map_b(p1(), Coefficients::Scalar, Bidegree::DZ, &t).unwrap();
    assert!(c1_hodge(&data).unwrap().exact_eq(&expected).unwrap());
}

#[test]
fn trace_of_triangular_atiyah_class_is_c1_of_det() {
    for (a, b, p) in [(1, 2, Expr::z()), (-1, 3, Expr::z().mul(&Expr::z()).add(&Expr::real(2.0))), (0, 0, Expr::real(5.0))] {
        let data = triangular(a, b, p);
        assert!(data.validate(1e-10).unwrap().passes);
        let tr = trace_reduce(&atiyah_cocycle(&data).unwrap()).unwrap();
        assert!(tr.exact_eq(&c1_hodge(&det_bundle(&data).unwrap()).unwrap()).unwrap());
        let cn = chern_number(&data).unwrap();
        assert!((cn.quadrature - (a + b) as f64).abs() < 1e-6);
    }
}

#[test]
fn curvature_identity_for_rank_two() {
    let bundles = [direct_sum(&fs(0), &fs(2)).unwrap(), direct_sum(&fs(-1), &fs(1)).unwrap(), triangular(1, 2, Expr::z())];
    for data in &bundles {
        let rep = verify_curvature_identity(data, 1e-10).unwrap();
        assert!(rep.residual <= 1e-10, "{rep:?}");
        assert!(atiyah_cocycle(data).unwrap().check(1e-10).unwrap().passes);
    }
}

#[test]
fn three_chart_curvature_identity() {
    let cover = Arc::new(Cover::p1_three(DEFAULT_SEED));
    for n in -3..=3 {
        let data = line_bundle_fs_three(cover.clone(), n).unwrap();
        assert!(verify_curvature_identity(&data, 1e-10).unwrap().residual <= 1e-10);
    }
}

#[test]
fn bad_metric_is_rejected() {
    let cover = p1();
    let f = std::collections::BTreeMap::from([((0, 1), ExprMatrix::scalar(Expr::z().powi(-1)))]);
    let h = ExprMatrix::scalar(fs_potential().powi(-2));
    let data = HermitianBundleData::new(cover, 1, f, vec![h.clone(), h]).unwrap();
    assert!(!data.validate(1e-10).unwrap().passes);
}
