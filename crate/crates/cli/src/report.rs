//! Evaluating scenarios into reports.

use std::collections::BTreeMap;

use arithext::atiyah::{self, HermitianBundleData};
use arithext::cech::ConeCocycle;
use arithext::fibered;
use arithext::forms::{Expr, Form};
use arithext::tori::{self, MonodromyChar, PeriodLattice, UveClass};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::scenario::*;
use crate::{CliError, Settings};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredicateOutcome {
    pub check: String,
    pub passed: bool,
    pub values: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub kind: String,
    pub passed: bool,
    pub predicates: Vec<PredicateOutcome>,
    pub conventions: BTreeMap<String, String>,
    pub settings: Settings,
}

/// Sign and normalization choices every report records.
pub fn conventions() -> BTreeMap<String, String> {
    [
        ("charts", "z_i = T_ij(z_j); a value on (i0..ip) lives in chart i0"),
        ("coboundary", "(delta beta)_ij = beta_j - beta_i, transported to chart i"),
        ("cone", "cocycle: delta alpha = 0 and alpha = -delta beta; coboundary(g) = (-delta g, g); b(T) = (0, T)"),
        ("frames", "v_j = f_ij v_i; h_i = f_ij^H h_j f_ij"),
        ("atiyah", "alpha_ij = -f_ij^-1 df_ij; beta_i = -h_i^-1 dh_i"),
        ("curvature", "Theta = dbar(h^-1 dh); second fundamental form Psi = dbar beta = -Theta"),
        ("degree", "c1 = (i/2pi) tr Theta; deg O(1) = +1"),
        ("wedge", "dzbar ^ dz = -dz ^ dzbar"),
        ("torus", "phi(gamma) mod 2 pi i Z; rho = exp(phi); torsion if dist(N phi, 2 pi i Z) <= N tol"),
        ("fibers", "q_ij = (D_i . D_j); kernel of q must be Q.n"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

fn outcome(check: &str, passed: bool, values: Value) -> PredicateOutcome {
    PredicateOutcome { check: check.to_string(), passed, values }
}

fn failed(check: &str, e: impl std::fmt::Display) -> PredicateOutcome {
    outcome(check, false, json!({ "error": e.to_string() }))
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn run_scenario(s: &Scenario, settings: &Settings) -> Result<Report, CliError> {
    let mut settings = *settings;
    if let Some(seed) = s.seed() {
        settings.seed = seed;
    }
    let predicates = match s {
        Scenario::P1Bundle(b) => run_bundle(b, &settings)?,
        Scenario::Torus(t) => run_torus(t, &settings)?,
        Scenario::FiberConfig(f) => run_fiber(f, &settings)?,
        Scenario::Composite(c) => run_composite(c)?,
    };
    Ok(Report {
        scenario: s.name().to_string(),
        kind: s.kind().to_string(),
        passed: predicates.iter().all(|p| p.passed),
        predicates,
        conventions: conventions(),
        settings,
    })
}

/// The closed forms `n dz/z` and `n z̄ dz/(1 + zz̄)`.
pub fn fubini_study_closed_form(c: &ConeCocycle, n: i32) -> arithext::Result<bool> {
    let nn = Expr::real(n as f64);
    let a = Form::dz(nn.div(&Expr::z()));
    let b = Form::dz(nn.mul(&Expr::zbar()).div(&atiyah::fs_potential()));
    Ok(c.alpha.scalar(&[0, 1]).exact_eq(&a)? && c.beta.scalar(&[0]).exact_eq(&b)? && c.beta.scalar(&[1]).exact_eq(&b)?)
}

fn bundle_check(data: &HermitianBundleData, p: &BundleCheck, st: &Settings) -> arithext::Result<PredicateOutcome> {
    let ts = |t: &Option<f64>| t.unwrap_or(st.tol_structural);
    let tq = |t: &Option<f64>| t.unwrap_or(st.tol_quadrature);
    Ok(match p {
        BundleCheck::Validate { tol } => {
            let r = data.validate(ts(tol))?;
            outcome("validate", r.passes, serde_json::to_value(&r).unwrap_or(Value::Null))
        }
        BundleCheck::Cocycle { tol } => {
            let r = atiyah::atiyah_cocycle(data)?.check(ts(tol))?;
            outcome("cocycle", r.passes, serde_json::to_value(&r).unwrap_or(Value::Null))
        }
        BundleCheck::ExactCocycle {} => {
            let ok = atiyah::atiyah_cocycle(data)?.exact_check()?;
            outcome("exact-cocycle", ok, json!({ "exact": ok }))
        }
        BundleCheck::FubiniStudyClosedForm { n } => {
            let ok = fubini_study_closed_form(&atiyah::c1_hodge(data)?, *n)?;
            outcome("fubini-study-closed-form", ok, json!({ "n": n, "alpha_01": format!("{n} dz/z"), "beta": format!("{n} zbar dz/(1+z zbar)") }))
        }
        BundleCheck::CurvatureIdentity { tol } => {
            let r = atiyah::verify_curvature_identity(data, ts(tol))?;
            outcome("curvature-identity", true, serde_json::to_value(&r).unwrap_or(Value::Null))
        }
        BundleCheck::ChernNumber { expected, tol } => {
            let cn = atiyah::chern_number(data)?;
            let t = tq(tol);
            let e = *expected as f64;
            let ok = (cn.quadrature - e).abs() <= t && (cn.residue - e).abs() <= t && (cn.quadrature - cn.residue).abs() <= t;
            outcome("chern-number", ok, json!({ "expected": expected, "quadrature": cn.quadrature, "residue": cn.residue, "tol": t }))
        }
        BundleCheck::RealStructure { tol } => {
            let r = atiyah::c1_hodge(data).or_else(|_| atiyah::atiyah_cocycle(data))?.real_structure_residual()?;
            outcome("real-structure", r <= ts(tol), json!({ "residual": r, "tol": ts(tol) }))
        }
        BundleCheck::TensorLaw { with_degree } => {
            let other = atiyah::line_bundle_fs(data.cover().clone(), *with_degree)?;
            let ok = atiyah::verify_tensor_law(data, &other)?;
            outcome("tensor-law", ok, json!({ "with_degree": with_degree, "exact": ok }))
        }
        BundleCheck::DualLaw {} => {
            let ok = atiyah::verify_dual_law(data)?;
            outcome("dual-law", ok, json!({ "exact": ok }))
        }
        BundleCheck::PullbackDegree { d, expected, tol } => {
            let maps = vec![Expr::z().powi(*d); data.cover().charts()];
            let law = atiyah::verify_pullback_law(data, &maps, st.tol_structural)?;
            let cn = atiyah::chern_number(&atiyah::pullback_bundle(data, &maps, st.tol_structural)?)?;
            let t = tq(tol);
            let e = *expected as f64;
            let ok = law && (cn.quadrature - e).abs() <= t && (cn.residue - e).abs() <= t;
            outcome("pullback-degree", ok, json!({ "d": d, "expected": expected, "law_exact": law, "quadrature": cn.quadrature, "residue": cn.residue }))
        }
    })
}

fn check_name(v: &impl Serialize) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.get("check").and_then(Value::as_str).map(String::from)).unwrap_or_default()
}

fn run_bundle(b: &BundleScenario, st: &Settings) -> Result<Vec<PredicateOutcome>, CliError> {
    let data = b.bundle.build(st.seed, st.points)?;
    Ok(b.predicates.iter().map(|p| bundle_check(&data, p, st).unwrap_or_else(|e| failed(&check_name(p), e))).collect())
}

/// Smallest `N ≤ n_max` with `|ρ(γ_k)^N − 1| ≤ N·tol` for every `k`.
pub fn root_of_unity_order(rho: &MonodromyChar, n_max: u64, tol: f64) -> Option<u64> {
    if let Some(q) = &rho.exact_phase {
        let order = q.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.0.denom()));
        return order.to_u64().filter(|&n| n <= n_max);
    }
    let one = Complex64::new(1.0, 0.0);
    let mut acc = vec![one; rho.values.len()];
    for n in 1..=n_max {
        for (a, r) in acc.iter_mut().zip(&rho.values) {
            *a *= r;
        }
        if acc.iter().all(|a| (a - one).norm() <= n as f64 * tol) {
            return Some(n);
        }
    }
    None
}

fn torus_lattice(t: &TorusScenario) -> Result<PeriodLattice, CliError> {
    match (&t.lattice, &t.curve) {
        (Some(l), None) => Ok(l.clone()),
        (None, Some(cv)) => Ok(tori::weierstrass_periods(cv.g2, cv.g3)?.0),
        _ => Err(CliError::Input("a torus scenario needs exactly one of `lattice` and `curve`".into())),
    }
}

fn torus_check(l: &PeriodLattice, cl: &UveClass, t: &TorusScenario, p: &TorusCheck, st: &Settings) -> arithext::Result<PredicateOutcome> {
    let ts = |x: &Option<f64>| x.unwrap_or(st.tol_structural);
    Ok(match p {
        TorusCheck::Torsion { expected } => {
            let got = tori::is_torsion(cl, st.nmax_torsion, st.tol_root);
            outcome("torsion", got == *expected, json!({ "expected": expected, "order": got, "nmax": st.nmax_torsion }))
        }
        TorusCheck::Compact { expected } => {
            let got = tori::in_max_compact(cl, st.tol_root);
            outcome("compact", got == *expected, json!({ "expected": expected, "compact": got }))
        }
        TorusCheck::RootOfUnity { expected } => {
            let got = root_of_unity_order(&tori::monodromy(cl), st.nmax_torsion, st.tol_root);
            outcome("root-of-unity", got.is_some() == *expected, json!({ "expected": expected, "order": got }))
        }
        TorusCheck::TorsionBiconditional {} => {
            let torsion = tori::is_torsion(cl, st.nmax_torsion, st.tol_root);
            let compact = tori::in_max_compact(cl, st.tol_root);
            let rou = root_of_unity_order(&tori::monodromy(cl), st.nmax_torsion, st.tol_root);
            let ok = torsion.is_some() == (compact && rou.is_some());
            outcome("torsion-biconditional", ok, json!({ "torsion": torsion, "compact": compact, "root_of_unity": rou }))
        }
        TorusCheck::HodgeSplit { tol } => {
            let s = tori::hodge_split(l, cl)?;
            outcome("hodge-split", s.residual <= ts(tol), serde_json::to_value(&s).unwrap_or(Value::Null))
        }
        TorusCheck::UnitaryLift { tol } => {
            let u = tori::unitary_lift(l, cl)?;
            let ok = u.residual <= ts(tol) && tori::in_max_compact(&u.class, 0.0);
            outcome("unitary-lift", ok, serde_json::to_value(&u).unwrap_or(Value::Null))
        }
        TorusCheck::SchneiderLang { subset } => {
            let v = tori::schneider_lang_flag(l, cl, subset, st.tol_root, st.nmax_torsion)?;
            outcome("schneider-lang", v.consistent, serde_json::to_value(&v).unwrap_or(Value::Null))
        }
        TorusCheck::RealMonodromy {} => {
            let r = tori::real_monodromy_test(l, cl, st.tol_root)?;
            outcome("real-monodromy", r.implication_holds, serde_json::to_value(&r).unwrap_or(Value::Null))
        }
        TorusCheck::ConjugateDouble { tol } => {
            let d = tori::conjugate_double(l, cl)?;
            let ok = d.modulus_residual <= ts(tol) && d.diagonal_spans;
            let diag: Vec<Value> = d.diagonal.iter().map(|z| c(*z)).collect();
            outcome("conjugate-double", ok, json!({ "diagonal": diag, "modulus_residual": d.modulus_residual, "diagonal_spans": d.diagonal_spans }))
        }
        TorusCheck::Tau { re, im, tol } => {
            let tau = match &t.curve {
                Some(cv) => tori::weierstrass_periods(cv.g2, cv.g3)?.1.tau,
                None if l.g() == 1 => l.generators()[1][0] / l.generators()[0][0],
                None => return Err(arithext::Error::Precondition("tau needs dimension one".into())),
            };
            let dev = (tau - Complex64::new(*re, *im)).norm();
            outcome("tau", dev <= ts(tol), json!({ "tau": c(tau), "deviation": dev }))
        }
    })
}

fn run_torus(t: &TorusScenario, st: &Settings) -> Result<Vec<PredicateOutcome>, CliError> {
    let l = torus_lattice(t)?;
    if t.class.values.len() != 2 * l.g() {
        return Err(CliError::Input(format!("class has {} values for {} generators", t.class.values.len(), 2 * l.g())));
    }
    if let Some(q) = &t.class.exact_phase {
        if q.len() != t.class.values.len() {
            return Err(CliError::Input("exact_phase must match values".into()));
        }
    }
    Ok(t.predicates.iter().map(|p| torus_check(&l, &t.class, t, p, st).unwrap_or_else(|e| failed(&check_name(p), e))).collect())
}

fn run_fiber(f: &FiberScenario, st: &Settings) -> Result<Vec<PredicateOutcome>, CliError> {
    let cfg = &f.config;
    Ok(f.predicates
        .iter()
        .map(|p| match p {
            FiberCheck::Valid {} => match cfg.validate() {
                Ok(r) => outcome("valid", true, serde_json::to_value(&r).unwrap_or(Value::Null)),
                Err(e) => failed("valid", e),
            },
            FiberCheck::Kernel {} => match fibered::kernel_rank_check(cfg, st.seed) {
                Ok(r) => outcome("kernel", true, serde_json::to_value(&r).unwrap_or(Value::Null)),
                Err(e) => failed("kernel", e),
            },
            FiberCheck::Decompose { m, expected } => match fibered::zariski_decompose(cfg, m) {
                Ok(d) => outcome("decompose", d.m0 == *expected, serde_json::to_value(&d).unwrap_or(Value::Null)),
                Err(e) => failed("decompose", e),
            },
        })
        .collect())
}

fn run_composite(s: &CompositeScenario) -> Result<Vec<PredicateOutcome>, CliError> {
    let report = fibered::va_report(&s.surface, &s.fibers, s.flags, s.nfp)?;
    let values = serde_json::to_value(&report).unwrap_or(Value::Null);
    Ok(s.predicates
        .iter()
        .map(|p| match p {
            CompositeCheck::Va { va1, va2, va3 } => {
                let ok = (report.va1, report.va2, report.va3) == (*va1, *va2, *va3);
                outcome("va", ok, values.clone())
            }
            CompositeCheck::Consistent {} => match fibered::va_verdict(&s.surface, &s.fibers, s.flags, s.nfp) {
                Ok(_) => outcome("consistent", true, values.clone()),
                Err(e) => failed("consistent", e),
            },
        })
        .collect())
}
