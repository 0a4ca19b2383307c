use arithext::fibered::*;
use arithext::rational::Rat;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=15).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

/// Determinant of an integer matrix by fraction-free elimination.
fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[test]
fn cycle_minors_count_spanning_trees() {
    // −q is the Laplacian of the dual graph; a maximal principal minor counts spanning trees
    for k in 2..=12usize {
        let cfg = kodaira(&format!("I{k}")).unwrap();
        let minor: Vec<Vec<i128>> = (0..k - 1).map(|i| (0..k - 1).map(|j| -(cfg.q[i][j] as i128)).collect()).collect();
        let trees = if k == 2 { 2 } else { k as i128 };
        assert_eq!(bareiss(minor), trees);
        let proof = kernel_rank_check(&cfg, DEFAULT_SEED).unwrap();
        assert_eq!(proof.rank, k - 1);
        assert_eq!(proof.kernel, vec![Rat::from(1); k]);
    }
}

#[test]
fn catalog_kernels() {
    for cfg in kodaira_catalog() {
        let proof = kernel_rank_check(&cfg, DEFAULT_SEED).unwrap();
        assert!(proof.identity_holds && proof.kernel_is_multiple_of_n);
        assert_eq!(proof.kernel, cfg.n.iter().map(|&x| Rat::from(x)).collect::<Vec<_>>());
    }
}

#[test]
fn kernel_of_zero_matrix_is_everything() {
    let (rank, basis) = rational_kernel(&[vec![BigRational::zero(); 2], vec![BigRational::zero(); 2]]);
    assert_eq!((rank, basis.len()), (0, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zariski_round_trip(idx in 0usize..16, m0 in rat()) {
        let cfg = &kodaira_catalog()[idx];
        let m: Vec<Rat> = cfg.n.iter().map(|&x| Rat(&m0 * BigRational::from_integer(x.into()))).collect();
        let d = zariski_decompose(cfg, &m).unwrap();
        prop_assert_eq!(d.m0, Some(Rat(m0)));
        prop_assert!(d.residual.iter().all(|x| x.0.is_zero()));
    }

    #[test]
    fn negativity_identity_and_sign(idx in 0usize..16, m in prop::collection::vec(rat(), 12)) {
        let cfg = &kodaira_catalog()[idx];
        let m = &m[..cfg.r()];
        let (lhs, rhs) = negativity_sides(cfg, m);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(!lhs.is_positive());
        let in_kernel = zariski_decompose(cfg, &m.iter().cloned().map(Rat).collect::<Vec<_>>()).unwrap().m0.is_some();
        prop_assert_eq!(lhs.is_zero(), in_kernel);
    }

    #[test]
    fn fibre_multiples_satisfy_all_three(k in -5i64..=5, fh in 1i64..=6, nfp in any::<bool>()) {
        let flags = LkFlags { alg_equiv_zero: true, trace_point: true };
        let fibers: Vec<FiberDegrees> = kodaira_catalog()
            .into_iter()
            .map(|c| FiberDegrees { degs: vec![Rat::from(0); c.r()], config: c, vertical: None })
            .collect();
        let v = va_verdict(&HodgeClassData::fiber_multiple(k, fh), &fibers, flags, nfp).unwrap();
        prop_assert!(v.va1 && v.va2 && v.va3);
        prop_assert_eq!(v.va2_prime.is_some(), nfp);
    }
}

#[test]
fn ample_class_fails_all_three() {
    let data = HodgeClassData { b_hh: Rat::from(5), b_f: Rat::from(3), b_h: Rat::from(7), f_h: Rat::from(3) };
    let v = va_verdict(&data, &[], LkFlags::default(), false).unwrap();
    assert!(!v.va1 && !v.va2 && !v.va3);
    assert_eq!(v.proportionality.witnesses.len(), 2);
}

#[test]
fn fractional_proportionality_gives_witness_power() {
    let data = HodgeClassData { b_hh: Rat::from(0), b_f: Rat::from(0), b_h: Rat::from(2), f_h: Rat::from(6) };
    let p = hodge_proportionality(&data).unwrap();
    assert_eq!(p.proportional, Some(Rat::new(1, 3)));
    let v = va_report(&data, &[], LkFlags { alg_equiv_zero: true, trace_point: true }, false).unwrap();
    let w = v.va2_witness.unwrap();
    assert_eq!((w.n, w.deg_m), (Rat::from(3), Rat::from(-1)));
}

#[test]
fn invariant_violations() {
    let bad_degree = HodgeClassData { b_hh: Rat::from(0), b_f: Rat::from(0), b_h: Rat::new(1, 2), f_h: Rat::from(1) };
    assert!(hodge_proportionality(&bad_degree).is_err());
    let bad_fiber = HodgeClassData { b_hh: Rat::from(0), b_f: Rat::from(0), b_h: Rat::from(1), f_h: Rat::from(0) };
    assert!(hodge_proportionality(&bad_fiber).is_err());
    let not_orthogonal = FiberConfig::new(vec![1, 2], vec![vec![-2, 1], vec![1, -2]]);
    assert!(not_orthogonal.validate().is_err());
}
