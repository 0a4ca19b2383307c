//! The acceptance matrix run by `verify-suite`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use std::time::{Duration, Instant};

use arithext::atiyah::{self, HermitianBundleData};
use arithext::cech::{self, Cochain, Coefficients};
use arithext::fibered::{self, FiberConfig, FiberDegrees, HodgeClassData, LkFlags};
use arithext::forms::{Bidegree, Cover, Expr, ExprMatrix, Form, FormMatrix};
use arithext::quad::exp_sinh;
use arithext::rational::Rat;
use arithext::tori::{self, PeriodLattice, RealImage, UveClass};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{conventions, root_of_unity_order};
use crate::{catalog, Scenario, Settings};

/// Criterion ids and titles, in report order.
pub const MANIFEST: [(&str, &str); 11] = [
    ("C1", "cocycle fidelity of O(n) with the Fubini-Study metric"),
    ("C2", "curvature identity on catalog bundles"),
    ("C3", "degree by quadrature and by residue"),
    ("C4", "tensor, dual and pullback laws"),
    ("C5", "exact-sequence instances"),
    ("C6", "torsion biconditional on 50 classes"),
    ("C7", "reality lemmas and the doubling identity"),
    ("C8", "AGM periods"),
    ("C9", "kernel of Kodaira intersection matrices"),
    ("C10", "VA verdicts on synthetic surfaces"),
    ("C11", "determinism of the suite report"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub manifest: Vec<String>,
    pub criteria: Vec<CriterionResult>,
    pub conventions: std::collections::BTreeMap<String, String>,
    pub settings: Settings,
}

type Outcome = arithext::Result<(bool, Value)>;

fn p1(st: &Settings) -> arithext::Result<Arc<Cover>> {
    Ok(Arc::new(Cover::from_spec(&Cover::p1_spec(), st.seed, st.points)?))
}

fn p1_three(st: &Settings) -> arithext::Result<Arc<Cover>> {
    Ok(Arc::new(Cover::from_spec(&Cover::p1_three_spec(), st.seed, st.points)?))
}

fn fs(st: &Settings, n: i32) -> arithext::Result<HermitianBundleData> {
    atiyah::line_bundle_fs(p1(st)?, n)
}

fn c1(st: &Settings) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in -3..=3 {
        let start = Instant::now();
        let c = atiyah::c1_hodge(&fs(st, n)?)?;
        let exact = crate::report::fubini_study_closed_form(&c, n)?;
        let r = cech::is_cone_cocycle(&c, st.tol_structural)?;
        let in_budget = start.elapsed() < Duration::from_secs(1);
        ok &= exact && r.passes && in_budget;
        rows.push(json!({ "n": n, "closed_form": exact, "cocycle": r.passes, "within_budget": in_budget }));
    }
    Ok((ok, json!({ "points": st.points, "tol": st.tol_structural, "bundles": rows })))
}

fn catalog_bundles(st: &Settings) -> arithext::Result<Vec<(String, HermitianBundleData)>> {
    let mut out = Vec::new();
    for s in catalog::catalog() {
        if let Scenario::P1Bundle(b) = s {
            out.push((b.name, b.bundle.build(st.seed, st.points)?));
        }
    }
    Ok(out)
}

fn c2(st: &Settings) -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, data) in catalog_bundles(st)? {
        let r = atiyah::verify_curvature_identity(&data, st.tol_structural);
        ok &= r.is_ok();
        rows.push(match r {
            Ok(r) => json!({ "bundle": name, "rank": data.rank(), "residual": r.residual }),
            Err(e) => json!({ "bundle": name, "rank": data.rank(), "error": e.to_string() }),
        });
    }
    let in_budget = start.elapsed() < Duration::from_secs(5);
    Ok((ok && in_budget, json!({ "tol": st.tol_structural, "bundles": rows, "within_budget": in_budget })))
}

fn c3(st: &Settings) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in -3..=3 {
        let cn = atiyah::chern_number(&fs(st, n)?)?;
        let agree = (cn.quadrature - cn.residue).abs() <= st.tol_quadrature;
        let rounds = cn.quadrature.round() == n as f64 && cn.residue.round() == n as f64;
        ok &= agree && rounds;
        rows.push(json!({ "n": n, "quadrature": cn.quadrature, "residue": cn.residue, "agree": agree, "rounds_to_n": rounds }));
    }
    Ok((ok, json!({ "tol": st.tol_quadrature, "bundles": rows })))
}

fn c4(st: &Settings) -> Outcome {
    let mut ok = true;
    let mut tensor = Vec::new();
    for a in -3..=3 {
        for b in [-2, 1, 3] {
            let law = atiyah::verify_tensor_law(&fs(st, a)?, &fs(st, b)?)?;
            ok &= law;
            tensor.push(json!([a, b, law]));
        }
    }
    let mut dual = Vec::new();
    for n in -3..=3 {
        let law = atiyah::verify_dual_law(&fs(st, n)?)?;
        ok &= law;
        dual.push(json!([n, law]));
    }
    let mut pullback = Vec::new();
    for n in [-2, 1, 3] {
        let data = fs(st, n)?;
        for d in 1..=3 {
            let maps = vec![Expr::z().powi(d); 2];
            let law = atiyah::verify_pullback_law(&data, &maps, st.tol_structural)?;
            let cn = atiyah::chern_number(&atiyah::pullback_bundle(&data, &maps, st.tol_structural)?)?;
            let want = (n * d) as f64;
            let close = (cn.quadrature - want).abs() <= st.tol_quadrature && (cn.residue - want).abs() <= st.tol_quadrature;
            ok &= law && close;
            pullback.push(json!({ "n": n, "d": d, "law": law, "quadrature": cn.quadrature, "residue": cn.residue }));
        }
    }
    Ok((ok, json!({ "tensor": tensor, "dual": dual, "pullback": pullback })))
}

fn c5(st: &Settings) -> Outcome {
    let cover = p1(st)?;
    let three = p1_three(st)?;
    let zz = Expr::z().mul(&Expr::zbar());
    let bump = Expr::one().add(&zz).recip();
    let mut ok = true;

    let ts = [
        Cochain::scalar0(vec![Form::dz(Expr::zbar().mul(&bump)), Form::dz(bump.clone())]),
        Cochain::scalar0(vec![Form::dz(zz.mul(&bump)), Form::dz(Expr::real(3.0))]),
    ];
    let mut nu_b = true;
    for t in &ts {
        nu_b &= cech::map_nu(&cech::map_b(cover.clone(), Coefficients::Scalar, Bidegree::DZ, t)?).is_zero();
    }
    ok &= nu_b;

    let mut b_iota = true;
    for cv in [cover.clone(), three.clone()] {
        let phi = Cochain::scalar0(vec![Form::function(Expr::constant(Complex64::new(2.0, -1.0))); cv.charts()]);
        let lhs = cech::map_b(cv.clone(), Coefficients::Scalar, Bidegree::FUNCTION, &cech::map_iota(&phi)?)?;
        let rhs = cech::coboundary(cv, Coefficients::Scalar, Bidegree::FUNCTION, &phi)?;
        b_iota &= lhs.exact_eq(&rhs)? && rhs.exact_check()?;
    }
    let sum = atiyah::direct_sum(&fs(st, 0)?, &fs(st, 2)?)?;
    let coeffs = sum.coefficients()?;
    let z = Expr::z();
    let m0 = ExprMatrix::from_rows(vec![vec![Expr::real(3.0), Expr::zero()], vec![Expr::one().sub(&z).add(&z.mul(&z)), Expr::real(-1.0)]])?;
    let s0 = FormMatrix::homogeneous(Bidegree::FUNCTION, &m0);
    let s1 = coeffs.transport(&cover, &s0, 0, 1)?;
    let phi = Cochain::from_values(0, 2, [(vec![0], s0), (vec![1], s1)])?;
    let lhs = cech::map_b(cover.clone(), coeffs.clone(), Bidegree::FUNCTION, &cech::map_iota(&phi)?)?;
    let rhs = cech::coboundary(cover.clone(), coeffs, Bidegree::FUNCTION, &phi)?;
    b_iota &= lhs.exact_eq(&rhs)?;
    ok &= b_iota;

    let mut psi_dev: f64 = 0.0;
    let gammas = [
        Cochain::scalar0(vec![Form::dz(z.mul(&z)), Form::dz(Expr::real(-2.0).add(&z))]),
        Cochain::scalar0(vec![Form::dz(Expr::one()), Form::dz(z.powi(3))]),
    ];
    for n in [-2, 1, 3] {
        let c = atiyah::c1_hodge(&fs(st, n)?)?;
        for g in &gammas {
            let cob = cech::coboundary(cover.clone(), Coefficients::Scalar, Bidegree::DZ, g)?;
            let before = cech::map_psi(&c, st.tol_structural)?.forms;
            let after = cech::map_psi(&c.add(&cob)?, st.tol_structural)?.forms;
            psi_dev = psi_dev.max(after.sub(&before)?.max_norm(&cover)?);
        }
    }
    ok &= psi_dev <= st.tol_structural;

    let mut nu_nonzero = Vec::new();
    for n in [-3, -2, -1, 1, 2, 3] {
        let c = atiyah::c1_hodge(&fs(st, n)?)?;
        let res = cech::residue_degree(&c)?;
        let witnessed = !cech::map_nu(&c).exact_zero()? && (res.re - n as f64).abs() <= st.tol_quadrature;
        ok &= witnessed;
        nu_nonzero.push(json!({ "n": n, "residue": res.re, "witnessed": witnessed }));
    }
    Ok((ok, json!({ "nu_after_b_zero": nu_b, "b_after_iota_coboundary": b_iota, "psi_invariance": psi_dev, "nu_nonzero": nu_nonzero })))
}

fn random_lattice(rng: &mut ChaCha8Rng) -> arithext::Result<PeriodLattice> {
    PeriodLattice::elliptic(Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(0.6..2.0)))
}

struct TorusTruth {
    class: UveClass,
    order: Option<u64>,
    compact: bool,
}

fn torus_dataset(st: &Settings) -> Vec<TorusTruth> {
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed);
    let mut out = Vec::new();
    for k in 0..25u64 {
        let n = 1 + k % 12;
        let p: Vec<i64> = (0..2).map(|_| rng.random_range(-30..=30)).collect();
        let order = n / p.iter().fold(n as i64, |a, &x| a.gcd(&x)) as u64;
        let values = p.iter().map(|&x| Complex64::new(0.0, TAU * (x as f64 / n as f64 + rng.random_range(-3..=3) as f64))).collect();
        out.push(TorusTruth { class: UveClass::new(values), order: Some(order), compact: true });
    }
    let mut compact_left = 15;
    let mut open_left = 10;
    while compact_left + open_left > 0 {
        let values: Vec<Complex64> = if compact_left > 0 {
            (0..2).map(|_| Complex64::new(0.0, TAU * rng.random_range(0.0..1.0))).collect()
        } else {
            let p: i64 = rng.random_range(0..12);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            vec![Complex64::new(sign * rng.random_range(0.05..1.0), TAU * p as f64 / 12.0), Complex64::new(0.0, PI)]
        };
        let class = UveClass::new(values);
        if tori::irrationality_margin(&class, st.nmax_torsion) < 1e-3 {
            continue;
        }
        let compact = compact_left > 0;
        if compact {
            compact_left -= 1;
        } else {
            open_left -= 1;
        }
        out.push(TorusTruth { class, order: None, compact });
    }
    out
}

fn c6(st: &Settings) -> Outcome {
    let start = Instant::now();
    let data = torus_dataset(st);
    let mut errors = Vec::new();
    for (k, t) in data.iter().enumerate() {
        let order = tori::is_torsion(&t.class, st.nmax_torsion, st.tol_root);
        let compact = tori::in_max_compact(&t.class, st.tol_root);
        let rou = root_of_unity_order(&tori::monodromy(&t.class), st.nmax_torsion, st.tol_root);
        let want_rou = t.order.is_some();
        let bicond = order.is_some() == (compact && rou.is_some());
        if order != t.order || compact != t.compact || rou.is_some() != want_rou || !bicond {
            errors.push(json!({ "index": k, "order": order, "compact": compact, "root_of_unity": rou }));
        }
    }
    let in_budget = start.elapsed() < Duration::from_secs(10);
    let torsion = data.iter().filter(|t| t.order.is_some()).count();
    Ok((
        errors.is_empty() && in_budget,
        json!({ "classes": data.len(), "torsion": torsion, "non_torsion": data.len() - torsion, "nmax": st.nmax_torsion, "tol": st.tol_root, "errors": errors, "within_budget": in_budget }),
    ))
}

fn c7(st: &Settings) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed ^ 7);
    let mut invariant = 0usize;
    let mut unitary = 0usize;
    let mut failures = Vec::new();
    for k in 0..40 {
        let t: f64 = rng.random_range(0.5..3.0);
        let l = PeriodLattice::new(
            1,
            vec![vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(0.0, t)]],
            Some(vec![RealImage { image: 0, sign: 1 }, RealImage { image: 1, sign: -1 }]),
        )?;
        let re = if k % 2 == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
        let half_turns: i64 = rng.random_range(-4..=4);
        let class = UveClass::new(vec![Complex64::new(re, PI * half_turns as f64), Complex64::new(0.0, rng.random_range(-6.0..6.0))]);
        let rep = tori::real_monodromy_test(&l, &class, st.tol_root)?;
        invariant += rep.conjugation_invariant as usize;
        unitary += (rep.conjugation_invariant && rep.unitary) as usize;
        if !rep.conjugation_invariant || !rep.implication_holds {
            failures.push(k);
        }
    }
    for s in catalog::catalog() {
        if let Scenario::Torus(t) = s {
            let Some(l) = t.lattice.filter(|l| l.real_structure().is_some()) else { continue };
            let rep = tori::real_monodromy_test(&l, &t.class, st.tol_root)?;
            if rep.conjugation_invariant {
                invariant += 1;
                unitary += rep.unitary as usize;
                if !rep.implication_holds {
                    failures.push(1000 + invariant);
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    let mut spans = true;
    for _ in 0..100 {
        let l = random_lattice(&mut rng)?;
        let class = UveClass::new((0..2).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-4.0..4.0))).collect());
        let d = tori::conjugate_double(&l, &class)?;
        worst = worst.max(d.modulus_residual);
        spans &= d.diagonal_spans;
    }
    let ok = failures.is_empty() && worst <= 1e-12 && spans;
    Ok((ok, json!({ "invariant_classes": invariant, "unitary_invariant": unitary, "failures": failures, "doubling_classes": 100, "doubling_residual": worst, "diagonal_spans": spans })))
}

fn elliptic_quadrature(a: f64, b: f64) -> f64 {
    exp_sinh(|t| 1.0 / ((t * t + a) * (t * t + b)).sqrt(), 1e-15)
}

fn c8(st: &Settings) -> Outcome {
    let (_, p) = tori::weierstrass_periods(4.0, 0.0)?;
    let tau_dev = (p.tau - Complex64::new(0.0, 1.0)).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed ^ 8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let e1: f64 = rng.random_range(0.5..3.0);
        let e2 = e1 * rng.random_range(-0.45..0.95) / 2.0 - e1 / 4.0;
        let e3 = -e1 - e2;
        let g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
        let g3 = 4.0 * e1 * e2 * e3;
        let (_, w) = tori::weierstrass_periods(g2, g3)?;
        let real = 2.0 * elliptic_quadrature(e1 - e2, e1 - e3);
        let imag = 2.0 * elliptic_quadrature(e1 - e3, e2 - e3);
        worst = worst.max((w.omega_real - real).abs() / real).max((w.omega_imag - imag).abs() / imag);
    }
    let ok = tau_dev <= st.tol_structural && worst <= 1e-12;
    Ok((ok, json!({ "lemniscatic_tau": [p.tau.re, p.tau.im], "tau_deviation": tau_dev, "curves": 10, "agm_vs_quadrature": worst })))
}

fn c9(st: &Settings) -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for cfg in fibered::kodaira_catalog() {
        let name = cfg.name.clone().unwrap_or_default();
        match fibered::kernel_rank_check(&cfg, st.seed) {
            Ok(p) => {
                let good = p.kernel_is_multiple_of_n && p.identity_holds && p.kernel.iter().map(|x| x.to_string()).eq(cfg.n.iter().map(|x| x.to_string()));
                ok &= good;
                rows.push(json!({ "fiber": name, "rank": p.rank, "samples": p.identity_samples, "passed": good }));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({ "fiber": name, "error": e.to_string() }));
            }
        }
    }
    let in_budget = start.elapsed() < Duration::from_secs(1);
    Ok((ok && in_budget, json!({ "configs": rows, "within_budget": in_budget })))
}

fn qv(cfg: &FiberConfig, v: &[BigRational]) -> Vec<Rat> {
    cfg.q.iter().map(|row| Rat(row.iter().zip(v).map(|(&q, x)| BigRational::from_integer(q.into()) * x).sum())).collect()
}

struct VaCase {
    surface: HodgeClassData,
    fibers: Vec<FiberDegrees>,
    flags: LkFlags,
    nfp: bool,
    intended: bool,
}

fn va_dataset(st: &Settings) -> Vec<VaCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed ^ 10);
    let cat = fibered::kodaira_catalog();
    let mut out = Vec::new();
    // k·F plus a rational multiple of a full fibre, with torsion flags set
    for _ in 0..10 {
        let cfg = cat[rng.random_range(0..cat.len())].clone();
        let k: i64 = rng.random_range(-3..=3);
        let q: i64 = rng.random_range(1..=6);
        let p: i64 = rng.random_range(-6..=6);
        let f_h = q * rng.random_range(1..=3);
        let m0 = BigRational::new(p.into(), q.into());
        let m: Vec<BigRational> = cfg.n.iter().map(|&x| &m0 * BigRational::from_integer(x.into())).collect();
        let total = BigRational::from_integer(k.into()) + &m0;
        let surface = HodgeClassData {
            b_hh: Rat::from(0),
            b_f: Rat::from(0),
            b_h: Rat(total * BigRational::from_integer(f_h.into())),
            f_h: Rat::from(f_h),
        };
        let degs = qv(&cfg, &m);
        let fibers = vec![FiberDegrees { config: cfg, degs, vertical: Some(m.into_iter().map(Rat).collect()) }];
        out.push(VaCase { surface, fibers, flags: LkFlags { alg_equiv_zero: true, trace_point: true }, nfp: rng.random_bool(0.5), intended: true });
    }
    // an ample class H perturbed by a vertical divisor v: β = H + v
    for _ in 0..10 {
        let cfg = cat[rng.random_range(0..cat.len())].clone();
        let r = cfg.r();
        let hh: i64 = rng.random_range(1..=10);
        let f_h: i64 = rng.random_range(1..=5);
        let d: Vec<i64> = (0..r).map(|_| rng.random_range(1..=4)).collect();
        let v: Vec<i64> = (0..r).map(|_| rng.random_range(-2..=2)).collect();
        let hv: i64 = d.iter().zip(&v).map(|(a, b)| a * b).sum();
        let vv: i64 = (0..r).map(|i| (0..r).map(|j| v[i] * cfg.q[i][j] * v[j]).sum::<i64>()).sum();
        let surface = HodgeClassData { b_hh: Rat::from(hh + 2 * hv + vv), b_f: Rat::from(f_h), b_h: Rat::from(hh + hv), f_h: Rat::from(f_h) };
        let vq: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let degs: Vec<Rat> = qv(&cfg, &vq).into_iter().zip(&d).map(|(x, &di)| Rat(x.0 + BigRational::from_integer(di.into()))).collect();
        let flags = LkFlags { alg_equiv_zero: rng.random_bool(0.5), trace_point: rng.random_bool(0.5) };
        out.push(VaCase { surface, fibers: vec![FiberDegrees { config: cfg, degs, vertical: None }], flags, nfp: rng.random_bool(0.5), intended: false });
    }
    out
}

fn c10(st: &Settings) -> Outcome {
    let mut rows = Vec::new();
    let mut inconsistencies = 0usize;
    let mut mismatches = 0usize;
    for (k, case) in va_dataset(st).iter().enumerate() {
        match fibered::va_verdict(&case.surface, &case.fibers, case.flags, case.nfp) {
            Ok(v) => {
                let hit = v.va1 == case.intended;
                mismatches += !hit as usize;
                rows.push(json!({ "index": k, "intended": case.intended, "va1": v.va1, "va2": v.va2, "va3": v.va3 }));
            }
            Err(e) => {
                inconsistencies += 1;
                rows.push(json!({ "index": k, "intended": case.intended, "error": e.to_string() }));
            }
        }
    }
    Ok((inconsistencies == 0 && mismatches == 0, json!({ "datasets": rows.len(), "inconsistencies": inconsistencies, "mismatches": mismatches, "cases": rows })))
}

fn finish(id: usize, r: Outcome) -> CriterionResult {
    let (id_s, title) = MANIFEST[id];
    let (passed, detail) = r.unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
    CriterionResult { id: id_s.into(), title: title.into(), passed, detail }
}

/// Criteria C1–C10, evaluated concurrently and returned in manifest order.
pub fn run_criteria(st: &Settings) -> Vec<CriterionResult> {
    let checks: [fn(&Settings) -> Outcome; 10] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    checks.par_iter().enumerate().map(|(k, f)| finish(k, f(st))).collect()
}

pub fn run_suite_once(st: &Settings) -> SuiteReport {
    let criteria = run_criteria(st);
    SuiteReport {
        passed: criteria.iter().all(|c| c.passed),
        manifest: MANIFEST.iter().map(|(id, _)| id.to_string()).collect(),
        criteria,
        conventions: conventions(),
        settings: *st,
    }
}

/// The full matrix; C11 reruns C1–C10 and compares serialized reports.
pub fn verify_suite(st: &Settings) -> SuiteReport {
    let first = run_suite_once(st);
    let second = run_suite_once(st);
    let a = serde_json::to_vec(&first).unwrap_or_default();
    let b = serde_json::to_vec(&second).unwrap_or_default();
    let same = !a.is_empty() && a == b;
    let mut report = first;
    report.criteria.push(finish(10, Ok((same, json!({ "bytes": a.len(), "identical": same })))));
    report.passed = report.criteria.iter().all(|c| c.passed);
    report
}

/// One line per criterion.
pub fn human_lines(r: &SuiteReport) -> Vec<String> {
    r.criteria.iter().map(|c| format!("{:<4} {}  {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title)).collect()
}
