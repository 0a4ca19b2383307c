//! Scenario documents. TOML input is converted to a JSON value before
//! decoding so both formats share one schema.

use arithext::atiyah::BundleSpec;
use arithext::fibered::{FiberConfig, FiberDegrees, HodgeClassData, LkFlags};
use arithext::rational::Rat;
use arithext::tori::{PeriodLattice, UveClass};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest scenario document accepted.
pub const MAX_INPUT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    P1Bundle(BundleScenario),
    Torus(TorusScenario),
    FiberConfig(FiberScenario),
    Composite(CompositeScenario),
}

impl Scenario {
    pub fn name(&self) -> &str {
        match self {
            Scenario::P1Bundle(s) => &s.name,
            Scenario::Torus(s) => &s.name,
            Scenario::FiberConfig(s) => &s.name,
            Scenario::Composite(s) => &s.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::P1Bundle(_) => "p1-bundle",
            Scenario::Torus(_) => "torus",
            Scenario::FiberConfig(_) => "fiber-config",
            Scenario::Composite(_) => "composite",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Scenario::P1Bundle(s) => s.seed,
            Scenario::Torus(s) => s.seed,
            Scenario::FiberConfig(s) => s.seed,
            Scenario::Composite(s) => s.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleScenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub bundle: BundleSpec,
    pub predicates: Vec<BundleCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BundleCheck {
    /// Holomorphic cocycle transitions and compatible positive metrics.
    Validate { tol: Option<f64> },
    /// Sampled cone-cocycle conditions of the Atiyah cocycle.
    Cocycle { tol: Option<f64> },
    /// The same conditions after exact simplification.
    ExactCocycle {},
    /// `α_01 = n dz/z` and `β_i = n z̄ dz/(1 + zz̄)` exactly.
    FubiniStudyClosedForm { n: i32 },
    CurvatureIdentity { tol: Option<f64> },
    ChernNumber { expected: i64, tol: Option<f64> },
    RealStructure { tol: Option<f64> },
    /// Tensor law against the Fubini–Study bundle of the given degree.
    TensorLaw { with_degree: i32 },
    DualLaw {},
    /// Degree of the pullback along `z ↦ z^d`.
    PullbackDegree { d: i32, expected: i64, tol: Option<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curve {
    pub g2: f64,
    pub g3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusScenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<PeriodLattice>,
    /// Periods of `y² = 4x³ − g2 x − g3` instead of an explicit lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Curve>,
    pub class: UveClass,
    pub predicates: Vec<TorusCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TorusCheck {
    /// Torsion order, `null` for a non-torsion class.
    Torsion { expected: Option<u64> },
    Compact { expected: bool },
    RootOfUnity { expected: bool },
    /// torsion ⇔ (compact ∧ root-of-unity monodromy).
    TorsionBiconditional {},
    HodgeSplit { tol: Option<f64> },
    UnitaryLift { tol: Option<f64> },
    SchneiderLang { subset: Vec<usize> },
    RealMonodromy {},
    ConjugateDouble { tol: Option<f64> },
    Tau { re: f64, im: f64, tol: Option<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberScenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: FiberConfig,
    pub predicates: Vec<FiberCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FiberCheck {
    Valid {},
    Kernel {},
    Decompose { m: Vec<Rat>, expected: Option<Rat> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeScenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub surface: HodgeClassData,
    #[serde(default)]
    pub fibers: Vec<FiberDegrees>,
    #[serde(default)]
    pub flags: LkFlags,
    #[serde(default)]
    pub nfp: bool,
    pub predicates: Vec<CompositeCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CompositeCheck {
    Va { va1: bool, va2: bool, va3: bool },
    Consistent {},
}

fn too_long(s: &str) -> Result<(), CliError> {
    if s.len() > MAX_INPUT {
        return Err(CliError::Parse(format!("input longer than {MAX_INPUT} bytes")));
    }
    Ok(())
}

pub fn parse_scenario_json(s: &str) -> Result<Scenario, CliError> {
    too_long(s)?;
    serde_json::from_str(s).map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// TOML is normalized to JSON and decoded with the JSON schema.
pub fn toml_to_json(s: &str) -> Result<serde_json::Value, CliError> {
    too_long(s)?;
    let v: toml::Value = toml::from_str(s).map_err(|e| {
        let at = e.span().map(|r| format!("byte {}: ", r.start)).unwrap_or_default();
        CliError::Parse(format!("{at}{}", e.message()))
    })?;
    serde_json::to_value(v).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn parse_scenario_toml(s: &str) -> Result<Scenario, CliError> {
    let v = toml_to_json(s)?;
    serde_json::from_value(v).map_err(|e| CliError::Parse(e.to_string()))
}

/// Picks the format from the file name; anything not ending in `.toml` is JSON.
pub fn parse_scenario(path: &str, text: &str) -> Result<Scenario, CliError> {
    if path.ends_with(".toml") {
        parse_scenario_toml(text)
    } else {
        parse_scenario_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let toml_text = r#"
kind = "fiber-config"
name = "two"

[config]
n = [1, 1]
q = [[-2, 2], [2, -2]]

[[predicates]]
check = "valid"

[[predicates]]
check = "decompose"
m = ["1/2", "1/2"]
expected = "1/2"
"#;
        let a = parse_scenario_toml(toml_text).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(parse_scenario_json(&json).unwrap(), a);
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_scenario_json("{\n  \"kind\": 3").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        assert!(parse_scenario_json(r#"{"kind":"torus","name":"x","class":{"values":[]},"predicates":[],"extra":1}"#).is_err());
    }
}
