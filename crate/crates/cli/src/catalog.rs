//! Built-in example scenarios.

use std::f64::consts::TAU;
use std::sync::Arc;

use arithext::atiyah::{self, BundleSpec};
use arithext::fibered::{self, FiberDegrees, HodgeClassData, LkFlags};
use arithext::forms::cover::DEFAULT_SEED;
use arithext::forms::{Cover, Expr, ExprMatrix};
use arithext::rational::Rat;
use arithext::tori::{self, PeriodLattice, RealImage, UveClass};
use num_complex::Complex64;

use crate::scenario::*;

/// Name of the Fubini–Study entry of degree `n`.
pub fn fs_name(n: i32) -> String {
    format!("p1-O{n}-fubini-study")
}

fn p1() -> Arc<Cover> {
    Arc::new(Cover::p1(DEFAULT_SEED))
}

fn bundle(name: String, spec: BundleSpec, predicates: Vec<BundleCheck>) -> Scenario {
    Scenario::P1Bundle(BundleScenario { name, seed: None, bundle: spec, predicates })
}

fn fs_entry(n: i32) -> Scenario {
    let data = atiyah::line_bundle_fs(p1(), n).expect("catalog bundle");
    bundle(
        fs_name(n),
        BundleSpec::from_data(&data),
        vec![
            BundleCheck::Validate { tol: None },
            BundleCheck::FubiniStudyClosedForm { n },
            BundleCheck::Cocycle { tol: None },
            BundleCheck::ExactCocycle {},
            BundleCheck::CurvatureIdentity { tol: None },
            BundleCheck::ChernNumber { expected: n as i64, tol: None },
            BundleCheck::RealStructure { tol: None },
            BundleCheck::DualLaw {},
            BundleCheck::TensorLaw { with_degree: 1 },
        ],
    )
}

fn rank_two_entries() -> Vec<Scenario> {
    let sum = atiyah::direct_sum(&atiyah::line_bundle_fs(p1(), 0).unwrap(), &atiyah::line_bundle_fs(p1(), 2).unwrap()).unwrap();
    let tri_base = atiyah::direct_sum(&atiyah::line_bundle_fs(p1(), 1).unwrap(), &atiyah::line_bundle_fs(p1(), 2).unwrap()).unwrap();
    let g0 = ExprMatrix::from_rows(vec![vec![Expr::one(), Expr::z()], vec![Expr::zero(), Expr::one()]]).unwrap();
    let tri = atiyah::gauge_chart0(&tri_base, &g0).unwrap();
    let checks = |deg: i64| {
        vec![
            BundleCheck::Validate { tol: None },
            BundleCheck::Cocycle { tol: None },
            BundleCheck::ExactCocycle {},
            BundleCheck::CurvatureIdentity { tol: None },
            BundleCheck::ChernNumber { expected: deg, tol: None },
        ]
    };
    vec![
        bundle("p1-O0+O2-fubini-study".into(), BundleSpec::from_data(&sum), checks(2)),
        bundle("p1-triangular-O1-O2".into(), BundleSpec::from_data(&tri), checks(3)),
    ]
}

fn other_bundles() -> Vec<Scenario> {
    let three = atiyah::line_bundle_fs_three(Arc::new(Cover::p1_three(DEFAULT_SEED)), 2).unwrap();
    let zz = Expr::z().mul(&Expr::zbar());
    let one = Expr::one();
    let phi = [one.add(&zz).recip(), zz.div(&one.add(&zz))];
    let trivial = atiyah::trivial_with_potential(p1(), &phi).unwrap();
    vec![
        bundle(
            "p1-3-O2-fubini-study".into(),
            BundleSpec::from_data(&three),
            vec![
                BundleCheck::Validate { tol: None },
                BundleCheck::Cocycle { tol: None },
                BundleCheck::ExactCocycle {},
                BundleCheck::CurvatureIdentity { tol: None },
            ],
        ),
        bundle(
            "p1-trivial-potential".into(),
            BundleSpec::from_data(&trivial),
            vec![
                BundleCheck::Validate { tol: None },
                BundleCheck::Cocycle { tol: None },
                BundleCheck::CurvatureIdentity { tol: None },
                BundleCheck::ChernNumber { expected: 0, tol: None },
            ],
        ),
        bundle(
            "p1-O1-pullback-cube".into(),
            BundleSpec::from_data(&atiyah::line_bundle_fs(p1(), 1).unwrap()),
            vec![BundleCheck::PullbackDegree { d: 3, expected: 3, tol: None }],
        ),
    ]
}

fn torus(name: &str, lattice: Option<PeriodLattice>, curve: Option<Curve>, class: UveClass, predicates: Vec<TorusCheck>) -> Scenario {
    Scenario::Torus(TorusScenario { name: name.into(), seed: None, lattice, curve, class, predicates })
}

fn torus_entries() -> Vec<Scenario> {
    let i = Complex64::new(0.0, 1.0);
    let hex = PeriodLattice::elliptic(Complex64::from_polar(1.0, TAU / 6.0)).unwrap();
    let rect = PeriodLattice::new(
        1,
        vec![vec![Complex64::new(1.0, 0.0)], vec![i * 1.7]],
        Some(vec![RealImage { image: 0, sign: 1 }, RealImage { image: 1, sign: -1 }]),
    )
    .unwrap();
    let sqrt2 = 2f64.sqrt();
    vec![
        torus(
            "torus-square-2torsion",
            Some(PeriodLattice::square()),
            None,
            tori::nabla_tor_char(2, &[1, 0]).unwrap(),
            vec![
                TorusCheck::Torsion { expected: Some(2) },
                TorusCheck::Compact { expected: true },
                TorusCheck::RootOfUnity { expected: true },
                TorusCheck::TorsionBiconditional {},
                TorusCheck::SchneiderLang { subset: vec![0, 1] },
                TorusCheck::RealMonodromy {},
                TorusCheck::ConjugateDouble { tol: Some(1e-12) },
            ],
        ),
        torus(
            "torus-hex-3torsion",
            Some(hex.clone()),
            None,
            tori::nabla_tor_char(3, &[1, 2]).unwrap(),
            vec![
                TorusCheck::Torsion { expected: Some(3) },
                TorusCheck::TorsionBiconditional {},
                TorusCheck::HodgeSplit { tol: None },
                TorusCheck::UnitaryLift { tol: None },
            ],
        ),
        torus(
            "torus-hex-irrational",
            Some(hex.clone()),
            None,
            UveClass::new(vec![i * (TAU * sqrt2 / 10.0), i * (TAU * (3f64.sqrt() - 1.0) / 7.0)]),
            vec![
                TorusCheck::Torsion { expected: None },
                TorusCheck::Compact { expected: true },
                TorusCheck::RootOfUnity { expected: false },
                TorusCheck::TorsionBiconditional {},
            ],
        ),
        torus(
            "torus-rect-nonunitary",
            Some(rect),
            None,
            UveClass::new(vec![Complex64::new(0.4, 0.0), i * 0.9]),
            vec![
                TorusCheck::Torsion { expected: None },
                TorusCheck::Compact { expected: false },
                TorusCheck::TorsionBiconditional {},
                TorusCheck::UnitaryLift { tol: None },
                TorusCheck::RealMonodromy {},
                TorusCheck::ConjugateDouble { tol: Some(1e-12) },
            ],
        ),
        torus(
            "torus-lemniscatic",
            None,
            Some(Curve { g2: 4.0, g3: 0.0 }),
            tori::nabla_tor_char(4, &[1, 3]).unwrap(),
            vec![
                TorusCheck::Tau { re: 0.0, im: 1.0, tol: None },
                TorusCheck::Torsion { expected: Some(4) },
                TorusCheck::RealMonodromy {},
            ],
        ),
    ]
}

fn fiber_entries() -> Vec<Scenario> {
    ["I2", "I5", "IV", "I0*"]
        .iter()
        .map(|n| {
            let config = fibered::kodaira(n).unwrap();
            let m: Vec<Rat> = config.n.iter().map(|&x| Rat::new(3 * x, 2)).collect();
            Scenario::FiberConfig(FiberScenario {
                name: format!("kodaira-{n}"),
                seed: None,
                config,
                predicates: vec![FiberCheck::Valid {}, FiberCheck::Kernel {}, FiberCheck::Decompose { m, expected: Some(Rat::new(3, 2)) }],
            })
        })
        .collect()
}

fn composite_entries() -> Vec<Scenario> {
    let flags = LkFlags { alg_equiv_zero: true, trace_point: true };
    let i2 = fibered::kodaira("I2").unwrap();
    let zero = |c: &arithext::fibered::FiberConfig| FiberDegrees { config: c.clone(), degs: vec![Rat::from(0); c.r()], vertical: None };
    vec![
        Scenario::Composite(CompositeScenario {
            name: "surface-pullback-degree-2".into(),
            seed: None,
            surface: HodgeClassData::fiber_multiple(2, 3),
            fibers: vec![zero(&i2), zero(&fibered::kodaira("I0*").unwrap())],
            flags,
            nfp: true,
            predicates: vec![CompositeCheck::Va { va1: true, va2: true, va3: true }, CompositeCheck::Consistent {}],
        }),
        Scenario::Composite(CompositeScenario {
            name: "surface-ample".into(),
            seed: None,
            surface: HodgeClassData { b_hh: Rat::from(4), b_f: Rat::from(2), b_h: Rat::from(6), f_h: Rat::from(3) },
            fibers: vec![],
            flags: LkFlags::default(),
            nfp: false,
            predicates: vec![CompositeCheck::Va { va1: false, va2: false, va3: false }, CompositeCheck::Consistent {}],
        }),
        Scenario::Composite(CompositeScenario {
            name: "surface-I2-component".into(),
            seed: None,
            surface: HodgeClassData { b_hh: Rat::from(-2), b_f: Rat::from(0), b_h: Rat::from(1), f_h: Rat::from(2) },
            fibers: vec![FiberDegrees { config: i2, degs: vec![Rat::from(-2), Rat::from(2)], vertical: Some(vec![Rat::from(1), Rat::from(0)]) }],
            flags,
            nfp: false,
            predicates: vec![CompositeCheck::Va { va1: false, va2: false, va3: false }, CompositeCheck::Consistent {}],
        }),
    ]
}

pub fn catalog() -> Vec<Scenario> {
    let mut out: Vec<Scenario> = (-3..=3).map(fs_entry).collect();
    out.extend(rank_two_entries());
    out.extend(other_bundles());
    out.extend(torus_entries());
    out.extend(fiber_entries());
    out.extend(composite_entries());
    out
}

pub fn names() -> Vec<String> {
    catalog().iter().map(|s| s.name().to_string()).collect()
}

pub fn entry(name: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_entries_roundtrip() {
        let names = names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(names.len() >= 12);
        for s in catalog() {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(crate::parse_scenario_json(&text).unwrap(), s, "{}", s.name());
        }
    }
}
