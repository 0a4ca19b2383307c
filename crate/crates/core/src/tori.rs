//! Characters of period lattices: the universal vector extension of a
//! complex torus as `Hom(Λ, ℂ)/Hom(Λ, 2πiℤ)`, monodromy, torsion and the
//! reality lemmas.
//!
//! A class stores `φ(γ_k) = value_k + 2πi·winding_k`; the monodromy only
//! looks at `value_k`, so shifting by `Hom(Λ, 2πiℤ)` never changes it.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rat;
use crate::{Error, Result};

/// Relative determinant bound below which generators are not an ℝ-basis.
pub const SINGULAR_REL: f64 = 1e-12;
/// Default tolerances.
pub const DEFAULT_SOLVE_TOL: f64 = 1e-10;
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;
pub const DEFAULT_NMAX: u64 = 10_000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealImage {
    /// `conj(γ_k) = sign · γ_image`.
    pub image: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub g: usize,
    pub generators: Vec<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_structure: Option<Vec<RealImage>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeDoc", into = "LatticeDoc")]
pub struct PeriodLattice {
    g: usize,
    generators: Vec<Vec<Complex64>>,
    real_structure: Option<Vec<RealImage>>,
}

/// Largest dimension accepted from documents.
pub const MAX_G: usize = 16;

impl TryFrom<LatticeDoc> for PeriodLattice {
    type Error = Error;

    fn try_from(d: LatticeDoc) -> Result<Self> {
        PeriodLattice::new(d.g, d.generators, d.real_structure)
    }
}

impl From<PeriodLattice> for LatticeDoc {
    fn from(l: PeriodLattice) -> Self {
        LatticeDoc { g: l.g, generators: l.generators, real_structure: l.real_structure }
    }
}

impl PeriodLattice {
    pub fn new(g: usize, generators: Vec<Vec<Complex64>>, real_structure: Option<Vec<RealImage>>) -> Result<Self> {
        if g == 0 || g > MAX_G {
            return Err(Error::SingularLattice(format!("dimension {g} outside 1..={MAX_G}")));
        }
        if generators.len() != 2 * g || generators.iter().any(|v| v.len() != g) {
            return Err(Error::SingularLattice(format!("need {} generators in C^{g}", 2 * g)));
        }
        if generators.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::SingularLattice("non-finite generator".into()));
        }
        let m = Self::real_matrix_of(g, &generators);
        let scale: f64 = m.column_iter().map(|c| c.norm()).product();
        let det = m.determinant();
        if scale == 0.0 || !(det.abs() > SINGULAR_REL * scale) {
            return Err(Error::SingularLattice("generators are not an R-basis".into()));
        }
        let lat = PeriodLattice { g, generators, real_structure };
        if let Some(rs) = &lat.real_structure {
            lat.check_real_structure(rs)?;
        }
        Ok(lat)
    }

    /// `ℤ + τℤ` in dimension one.
    pub fn elliptic(tau: Complex64) -> Result<Self> {
        Self::new(1, vec![vec![Complex64::new(1.0, 0.0)], vec![tau]], None)
    }

    /// `ℤ + iℤ` with conjugation `1 ↦ 1`, `i ↦ −i`.
    pub fn square() -> Self {
        Self::new(
            1,
            vec![vec![Complex64::new(1.0, 0.0)], vec![I]],
            Some(vec![RealImage { image: 0, sign: 1 }, RealImage { image: 1, sign: -1 }]),
        )
        .expect("square lattice")
    }

    fn check_real_structure(&self, rs: &[RealImage]) -> Result<()> {
        if rs.len() != 2 * self.g {
            return Err(Error::SingularLattice("real structure needs one entry per generator".into()));
        }
        for (k, r) in rs.iter().enumerate() {
            if r.image >= rs.len() || !(r.sign == 1 || r.sign == -1) {
                return Err(Error::SingularLattice(format!("bad real-structure entry {k}")));
            }
            let back = rs[r.image];
            if back.image != k || back.sign != r.sign {
                return Err(Error::SingularLattice(format!("real structure is not an involution at {k}")));
            }
            let target = &self.generators[r.image];
            let dev = self.generators[k]
                .iter()
                .zip(target)
                .map(|(a, b)| (a.conj() - b * r.sign as f64).norm())
                .fold(0.0, f64::max);
            let size = target.iter().map(|c| c.norm()).fold(1.0, f64::max);
            if dev > 1e-9 * size {
                return Err(Error::SingularLattice(format!("conj(gamma_{k}) is not the declared generator")));
            }
        }
        Ok(())
    }

    fn real_matrix_of(g: usize, gens: &[Vec<Complex64>]) -> DMatrix<f64> {
        DMatrix::from_fn(2 * g, 2 * g, |r, c| if r < g { gens[c][r].re } else { gens[c][r - g].im })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn generators(&self) -> &[Vec<Complex64>] {
        &self.generators
    }

    pub fn real_structure(&self) -> Option<&[RealImage]> {
        self.real_structure.as_deref()
    }

    fn check_class(&self, c: &UveClass) -> Result<()> {
        if c.values.len() != 2 * self.g {
            return Err(Error::Precondition(format!("class has {} values for {} generators", c.values.len(), 2 * self.g)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UveClass {
    pub values: Vec<Complex64>,
    /// Integers `m_k` in `φ(γ_k) = value_k + 2πi m_k`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub windings: Vec<i64>,
    /// Exact phases `q_k` when `value_k = 2πi q_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_phase: Option<Vec<Rat>>,
}

impl UveClass {
    pub fn new(values: Vec<Complex64>) -> Self {
        UveClass { values, windings: Vec::new(), exact_phase: None }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Full representative `φ(γ_k)`.
    pub fn phi(&self, k: usize) -> Complex64 {
        let m = self.windings.get(k).copied().unwrap_or(0);
        self.values[k] + I * (TAU * m as f64)
    }

    pub fn phis(&self) -> Vec<Complex64> {
        (0..self.values.len()).map(|k| self.phi(k)).collect()
    }

    /// Add `2πi m_k` to `φ(γ_k)`.
    pub fn shift_by_periods(&self, m: &[i64]) -> Self {
        let mut w = self.windings.clone();
        w.resize(self.values.len(), 0);
        for (a, b) in w.iter_mut().zip(m) {
            *a += b;
        }
        UveClass { windings: w, ..self.clone() }
    }

    pub fn add(&self, o: &UveClass) -> Self {
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect();
        let n = self.values.len();
        let wind = |c: &UveClass, k: usize| c.windings.get(k).copied().unwrap_or(0);
        let windings: Vec<i64> = (0..n).map(|k| wind(self, k) + wind(o, k)).collect();
        let exact_phase = match (&self.exact_phase, &o.exact_phase) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| Rat(&x.0 + &y.0)).collect()),
            _ => None,
        };
        let windings = if windings.iter().all(|&w| w == 0) { Vec::new() } else { windings };
        UveClass { values, windings, exact_phase }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyChar {
    pub values: Vec<Complex64>,
    /// `ρ(γ_k) = exp(2πi q_k)` with `q_k ∈ [0, 1)`, when known exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_phase: Option<Vec<Rat>>,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn unit(q: &BigRational) -> Complex64 {
    let four = q * BigRational::from_integer(4.into());
    if four.is_integer() {
        let k = four.to_integer().mod_floor(&4.into()).to_u8().unwrap_or(0);
        return [Complex64::new(1.0, 0.0), I, Complex64::new(-1.0, 0.0), -I][k as usize];
    }
    let t = q.to_f64().unwrap_or(0.0);
    Complex64::from_polar(1.0, TAU * t)
}

impl MonodromyChar {
    /// `ρ^n`, exact when the phases are.
    pub fn pow(&self, n: i64) -> MonodromyChar {
        match &self.exact_phase {
            Some(q) => {
                let ph: Vec<BigRational> = q.iter().map(|x| frac(&(&x.0 * BigRational::from_integer(n.into())))).collect();
                MonodromyChar { values: ph.iter().map(unit).collect(), exact_phase: Some(ph.into_iter().map(Rat).collect()) }
            }
            None => MonodromyChar { values: self.values.iter().map(|v| v.powi(n as i32)).collect(), exact_phase: None },
        }
    }

    /// Every value is exactly 1.
    pub fn is_trivial(&self) -> bool {
        match &self.exact_phase {
            Some(q) => q.iter().all(|x| x.0.is_zero()),
            None => self.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)),
        }
    }
}

/// Reduce an angle to `(−π, π]`.
fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub fn monodromy(c: &UveClass) -> MonodromyChar {
    if let Some(q) = &c.exact_phase {
        let ph: Vec<BigRational> = q.iter().map(|x| frac(&x.0)).collect();
        return MonodromyChar { values: ph.iter().map(unit).collect(), exact_phase: Some(ph.into_iter().map(Rat).collect()) };
    }
    let values = c.values.iter().map(|v| Complex64::from_polar(v.re.exp(), reduce_angle(v.im))).collect();
    MonodromyChar { values, exact_phase: None }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeSplit {
    /// `a ∈ ℂ^g` with linear part `γ ↦ Σ a_l γ_l`.
    pub linear: Vec<Complex64>,
    /// `b ∈ ℂ^g` with antilinear part `γ ↦ Σ b_l conj(γ_l)`.
    pub antilinear: Vec<Complex64>,
    pub linear_values: Vec<Complex64>,
    pub antilinear_values: Vec<Complex64>,
    pub residual: f64,
}

fn dot(a: &[Complex64], v: &[Complex64]) -> Complex64 {
    a.iter().zip(v).map(|(x, y)| x * y).sum()
}

fn dot_conj(b: &[Complex64], v: &[Complex64]) -> Complex64 {
    b.iter().zip(v).map(|(x, y)| x * y.conj()).sum()
}

/// `φ = a + b̄` with `a` ℂ-linear and `b̄` ℂ-antilinear.
pub fn hodge_split(l: &PeriodLattice, c: &UveClass) -> Result<HodgeSplit> {
    l.check_class(c)?;
    let g = l.g;
    let gens = &l.generators;
    let m = DMatrix::from_fn(2 * g, 2 * g, |k, col| if col < g { gens[k][col] } else { gens[k][col - g].conj() });
    let phi = DVector::from_vec(c.phis());
    let sol = m.clone().lu().solve(&phi).ok_or_else(|| Error::SingularLattice("Hodge split system is singular".into()))?;
    let a: Vec<Complex64> = sol.iter().take(g).copied().collect();
    let b: Vec<Complex64> = sol.iter().skip(g).copied().collect();
    let linear_values: Vec<Complex64> = gens.iter().map(|v| dot(&a, v)).collect();
    let antilinear_values: Vec<Complex64> = gens.iter().map(|v| dot_conj(&b, v)).collect();
    let residual = (0..2 * g)
        .map(|k| (linear_values[k] + antilinear_values[k] - phi[k]).norm())
        .fold(0.0, f64::max);
    Ok(HodgeSplit { linear: a, antilinear: b, linear_values, antilinear_values, residual })
}

/// `|Re φ(γ_k)| ≤ tol` for all `k`.
pub fn in_max_compact(c: &UveClass, tol: f64) -> bool {
    c.values.iter().all(|v| v.re.abs() <= tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryLift {
    pub class: UveClass,
    /// The subtracted ℂ-linear functional `a ∈ ℂ^g`.
    pub linear: Vec<Complex64>,
    pub residual: f64,
}

/// The representative `φ − a` with `a` ℂ-linear and `Re(φ − a) = 0` on Λ.
pub fn unitary_lift(l: &PeriodLattice, c: &UveClass) -> Result<UnitaryLift> {
    l.check_class(c)?;
    let g = l.g;
    if c.values.iter().all(|v| v.re == 0.0) {
        return Ok(UnitaryLift { class: c.clone(), linear: vec![Complex64::new(0.0, 0.0); g], residual: 0.0 });
    }
    // Re(Σ (x_l + i y_l) γ_l) = Σ x_l Re γ_l − y_l Im γ_l
    let gens = &l.generators;
    let m = DMatrix::from_fn(2 * g, 2 * g, |k, col| if col < g { gens[k][col].re } else { -gens[k][col - g].im });
    let rhs = DVector::from_iterator(2 * g, c.values.iter().map(|v| v.re));
    let sol = m.lu().solve(&rhs).ok_or_else(|| Error::SingularLattice("unitary lift system is singular".into()))?;
    let a: Vec<Complex64> = (0..g).map(|l| Complex64::new(sol[l], sol[g + l])).collect();
    let mut residual: f64 = 0.0;
    let values = gens
        .iter()
        .zip(&c.values)
        .map(|(v, phi)| {
            let d = phi - dot(&a, v);
            residual = residual.max(d.re.abs());
            Complex64::new(0.0, d.im)
        })
        .collect();
    Ok(UnitaryLift {
        class: UveClass { values, windings: c.windings.clone(), exact_phase: None },
        linear: a,
        residual,
    })
}

/// `dist(x, 2πiℤ)`.
pub fn dist_to_periods(x: Complex64) -> f64 {
    let k = (x.im / TAU).round();
    Complex64::new(x.re, x.im - TAU * k).norm()
}

/// Smallest `N ≤ n_max` with `dist(N·φ(γ_k), 2πiℤ) ≤ N·tol` for every `k`.
pub fn is_torsion(c: &UveClass, n_max: u64, tol: f64) -> Option<u64> {
    if let Some(q) = &c.exact_phase {
        let order = q.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.0.denom()));
        return order.to_u64().filter(|&n| n <= n_max);
    }
    (1..=n_max).find(|&n| {
        let nf = n as f64;
        c.values.iter().all(|v| dist_to_periods(v * nf) <= nf * tol)
    })
}

/// `min_{N ≤ n_max} max_k dist(N·φ(γ_k), 2πiℤ)`: how far the class stays
/// from being torsion of small order.
pub fn irrationality_margin(c: &UveClass, n_max: u64) -> f64 {
    (1..=n_max)
        .map(|n| c.values.iter().map(|v| dist_to_periods(v * n as f64)).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// `φ(γ_k) = 2πi p_k/n` with exact phases.
pub fn nabla_tor_char(n: u64, p: &[i64]) -> Result<UveClass> {
    if n == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let nn = i64::try_from(n).map_err(|_| Error::Precondition("order too large".into()))?;
    let phases: Vec<BigRational> = p.iter().map(|&pk| BigRational::new(pk.into(), nn.into())).collect();
    let values = phases.iter().map(|q| I * (TAU * q.to_f64().unwrap_or(0.0))).collect();
    Ok(UveClass { values, windings: Vec::new(), exact_phase: Some(phases.into_iter().map(Rat).collect()) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchneiderLangVerdict {
    pub subset: Vec<usize>,
    pub is_basis: bool,
    /// Order of `ρ(γ)` as a root of unity for each `γ` in the subset, if ≤ `n_max`.
    pub root_orders: Vec<Option<u64>>,
    pub criterion_applies: bool,
    pub torsion_predicted: bool,
    pub torsion_order: Option<u64>,
    pub consistent: bool,
    /// "algebraic value" is tested as "root of unity of order ≤ n_max within tol".
    pub proxy: String,
}

fn complex_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.singular_values.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}

pub fn schneider_lang_flag(l: &PeriodLattice, c: &UveClass, subset: &[usize], tol: f64, n_max: u64) -> Result<SchneiderLangVerdict> {
    l.check_class(c)?;
    let g = l.g;
    if subset.len() < g || subset.iter().any(|&k| k >= 2 * g) {
        return Err(Error::NotABasis(subset.to_vec()));
    }
    let m = DMatrix::from_fn(g, subset.len(), |r, col| l.generators[subset[col]][r]);
    if complex_rank(&m, tol) < g {
        return Err(Error::NotABasis(subset.to_vec()));
    }
    let root_orders: Vec<Option<u64>> = subset
        .iter()
        .map(|&k| {
            let single = UveClass {
                values: vec![c.values[k]],
                windings: Vec::new(),
                exact_phase: c.exact_phase.as_ref().map(|q| vec![q[k].clone()]),
            };
            is_torsion(&single, n_max, tol)
        })
        .collect();
    let criterion_applies = root_orders.iter().all(Option::is_some);
    let torsion_order = is_torsion(c, n_max, tol);
    Ok(SchneiderLangVerdict {
        subset: subset.to_vec(),
        is_basis: true,
        root_orders,
        criterion_applies,
        torsion_predicted: criterion_applies,
        torsion_order,
        consistent: !criterion_applies || torsion_order.is_some(),
        proxy: format!("root of unity of order <= {n_max} within {tol:e}"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMonodromyReport {
    pub conjugation_invariant: bool,
    pub invariance_residual: f64,
    /// `ρ` on generators of the real periods `Γ⁺`.
    pub gamma_plus: Vec<Complex64>,
    /// `ρ` on generators of the purely imaginary periods `Γ⁻`.
    pub gamma_minus: Vec<Complex64>,
    /// All `|ρ(γ_k)| = 1`.
    pub unitary: bool,
    /// `ρ(Γ⁺) ⊂ {±1}`.
    pub real_values_pm1: bool,
    /// For invariant classes, unitary ⇒ values in `{±1}` on `Γ⁺`.
    pub implication_holds: bool,
}

pub fn real_monodromy_test(l: &PeriodLattice, c: &UveClass, tol: f64) -> Result<RealMonodromyReport> {
    l.check_class(c)?;
    let rs = l.real_structure.as_ref().ok_or(Error::NoRealStructure)?;
    let phi = c.phis();
    // φ(conj γ_k) = s·φ(γ_image) must equal conj φ(γ_k) mod 2πiℤ
    let invariance_residual = (0..phi.len())
        .map(|k| dist_to_periods(phi[rs[k].image] * rs[k].sign as f64 - phi[k].conj()))
        .fold(0.0, f64::max);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (k, r) in rs.iter().enumerate() {
        let s = r.sign as f64;
        if r.image == k {
            if r.sign == 1 {
                plus.push(phi[k]);
            } else {
                minus.push(phi[k]);
            }
        } else if k < r.image {
            plus.push(phi[k] + phi[r.image] * s);
            minus.push(phi[k] - phi[r.image] * s);
        }
    }
    let rho = |x: &Complex64| Complex64::from_polar(x.re.exp(), reduce_angle(x.im));
    let gamma_plus: Vec<Complex64> = plus.iter().map(rho).collect();
    let gamma_minus: Vec<Complex64> = minus.iter().map(rho).collect();
    let unitary = in_max_compact(c, tol);
    let one = Complex64::new(1.0, 0.0);
    let real_values_pm1 = gamma_plus.iter().all(|v| (v - one).norm() <= tol || (v + one).norm() <= tol);
    let conjugation_invariant = invariance_residual <= tol;
    Ok(RealMonodromyReport {
        conjugation_invariant,
        invariance_residual,
        gamma_plus,
        gamma_minus,
        unitary,
        real_values_pm1,
        implication_holds: !(conjugation_invariant && unitary) || real_values_pm1,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateDouble {
    pub lattice: PeriodLattice,
    pub class: UveClass,
    /// `ρ̃(Δγ_k)` with `Δγ = (γ, conj γ)`.
    pub diagonal: Vec<Complex64>,
    /// `max |ρ̃(Δγ_k) − |ρ(γ_k)|²|`.
    pub modulus_residual: f64,
    pub diagonal_spans: bool,
}

/// The class `φ(γ) + conj φ(γ′)` on `Λ ⊕ conj(Λ)`.
pub fn conjugate_double(l: &PeriodLattice, c: &UveClass) -> Result<ConjugateDouble> {
    l.check_class(c)?;
    let g = l.g;
    let zero = Complex64::new(0.0, 0.0);
    let mut gens = Vec::with_capacity(4 * g);
    for v in &l.generators {
        let mut w = v.clone();
        w.extend(std::iter::repeat_n(zero, g));
        gens.push(w);
    }
    for v in &l.generators {
        let mut w = vec![zero; g];
        w.extend(v.iter().map(|x| x.conj()));
        gens.push(w);
    }
    let lattice = PeriodLattice::new(2 * g, gens, None)?;
    let phi = c.phis();
    let mut values = phi.clone();
    values.extend(phi.iter().map(|x| x.conj()));
    let class = UveClass::new(values);
    let diagonal: Vec<Complex64> = phi.iter().map(|x| (x + x.conj()).exp()).collect();
    let modulus_residual = phi
        .iter()
        .zip(&diagonal)
        .map(|(x, d)| (d - Complex64::new(x.exp().norm_sqr(), 0.0)).norm())
        .fold(0.0, f64::max);
    let delta = DMatrix::from_fn(2 * g, 2 * g, |r, col| {
        let v = &l.generators[col];
        if r < g {
            v[r]
        } else {
            v[r - g].conj()
        }
    });
    let diagonal_spans = complex_rank(&delta, 1e-12) == 2 * g;
    Ok(ConjugateDouble { lattice, class, diagonal, modulus_residual, diagonal_spans })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassPeriods {
    pub roots: [f64; 3],
    pub omega_real: f64,
    /// Imaginary part of the imaginary period.
    pub omega_imag: f64,
    pub tau: Complex64,
}

/// Arithmetic–geometric mean of positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
        if (na - nb).abs() <= 1e-16 * na {
            return na;
        }
        a = na;
        b = nb;
    }
    a
}

/// Real roots `e1 > e2 > e3` of `4x³ − g2·x − g3`.
fn cubic_roots(g2: f64, g3: f64) -> [f64; 3] {
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let t = arg.acos() / 3.0;
    let mut r: Vec<f64> = (0..3).map(|k| m * (t - TAU * k as f64 / 3.0).cos()).collect();
    for x in r.iter_mut() {
        for _ in 0..4 {
            let f = 4.0 * *x * *x * *x - g2 * *x - g3;
            let d = 12.0 * *x * *x - g2;
            if d == 0.0 {
                break;
            }
            *x -= f / d;
        }
    }
    r.sort_by(|a, b| b.total_cmp(a));
    [r[0], r[1], r[2]]
}

/// Periods of `y² = 4x³ − g2·x − g3` for a positive discriminant.
pub fn weierstrass_periods(g2: f64, g3: f64) -> Result<(PeriodLattice, WeierstrassPeriods)> {
    if !g2.is_finite() || !g3.is_finite() {
        return Err(Error::Precondition("non-finite coefficients".into()));
    }
    let disc = g2.powi(3) - 27.0 * g3 * g3;
    let scale = g2.abs().powi(3) + 27.0 * g3 * g3;
    if disc.abs() <= 1e-12 * scale || scale == 0.0 {
        return Err(Error::SingularCurve);
    }
    if disc < 0.0 {
        return Err(Error::NonRectangular);
    }
    let [e1, e2, e3] = cubic_roots(g2, g3);
    let omega_real = PI / agm((e1 - e3).sqrt(), (e1 - e2).sqrt());
    let omega_imag = PI / agm((e1 - e3).sqrt(), (e2 - e3).sqrt());
    let tau = Complex64::new(0.0, omega_imag / omega_real);
    let lattice = PeriodLattice::new(
        1,
        vec![vec![Complex64::new(omega_real, 0.0)], vec![Complex64::new(0.0, omega_imag)]],
        Some(vec![RealImage { image: 0, sign: 1 }, RealImage { image: 1, sign: -1 }]),
    )?;
    Ok((lattice, WeierstrassPeriods { roots: [e1, e2, e3], omega_real, omega_imag, tau }))
}

/// Signed magnitude helper for exact phases: `q` reduced into `(−1/2, 1/2]`.
pub fn centered_phase(q: &BigRational) -> BigRational {
    let f = frac(q);
    let half = BigRational::new(1.into(), 2.into());
    if f > half {
        f - BigRational::one()
    } else if f.is_negative() {
        f + BigRational::one()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn monodromy_examples() {
        let rho = monodromy(&UveClass::new(vec![c(0.0, 0.0), c(0.0, PI)]));
        assert!((rho.values[1] - c(-1.0, 0.0)).norm() < 1e-15);
        let t = nabla_tor_char(2, &[1, 0]).unwrap();
        assert_eq!(monodromy(&t).values, vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(monodromy(&t).pow(2).is_trivial());
    }

    #[test]
    fn torsion_examples() {
        let sq = UveClass::new(vec![c(0.0, 0.0), c(0.0, PI)]);
        assert_eq!(is_torsion(&sq, 100, 1e-9), Some(2));
        let three = UveClass::new(vec![c(0.0, TAU / 3.0), c(0.0, 2.0 * TAU / 3.0)]);
        assert_eq!(is_torsion(&three, 100, 1e-9), Some(3));
        let irr = UveClass::new(vec![c(0.0, 0.0), c(0.0, TAU * 2f64.sqrt() / 10.0)]);
        assert_eq!(is_torsion(&irr, 10_000, 1e-9), None);
    }

    #[test]
    fn hodge_split_of_identity_and_conjugation() {
        let l = PeriodLattice::elliptic(c(0.3, 1.1)).unwrap();
        let id = UveClass::new(l.generators().iter().map(|v| v[0]).collect());
        let s = hodge_split(&l, &id).unwrap();
        assert!((s.linear[0] - c(1.0, 0.0)).norm() < 1e-12 && s.antilinear[0].norm() < 1e-12);
        let cj = UveClass::new(l.generators().iter().map(|v| v[0].conj()).collect());
        let s = hodge_split(&l, &cj).unwrap();
        assert!(s.linear[0].norm() < 1e-12 && (s.antilinear[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unitary_lift_of_identity_on_square_lattice() {
        let l = PeriodLattice::square();
        let id = UveClass::new(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let lift = unitary_lift(&l, &id).unwrap();
        assert!(in_max_compact(&lift.class, 0.0));
        assert!(lift.residual < 1e-12);
        let compact = UveClass::new(vec![c(0.0, 0.4), c(0.0, -2.0)]);
        assert_eq!(unitary_lift(&l, &compact).unwrap().class, compact);
    }

    #[test]
    fn singular_lattice() {
        assert!(PeriodLattice::elliptic(c(2.0, 0.0)).is_err());
        assert!(PeriodLattice::new(1, vec![vec![c(1.0, 0.0)]], None).is_err());
    }

    #[test]
    fn lemniscatic_curve() {
        let (_, p) = weierstrass_periods(4.0, 0.0).unwrap();
        assert!((p.tau - c(0.0, 1.0)).norm() < 1e-10);
        assert!(matches!(weierstrass_periods(3.0, 1.0), Err(Error::SingularCurve)));
        assert!(matches!(weierstrass_periods(1.0, 1.0), Err(Error::NonRectangular)));
    }

    #[test]
    fn real_monodromy_on_square_lattice() {
        let l = PeriodLattice::square();
        let triv = real_monodromy_test(&l, &UveClass::zero(2), 1e-12).unwrap();
        assert!(triv.unitary && triv.real_values_pm1 && triv.implication_holds);
        let non_unitary = real_monodromy_test(&l, &UveClass::new(vec![c(0.5, 0.0), c(0.0, 0.0)]), 1e-12).unwrap();
        assert!(!non_unitary.unitary && !non_unitary.real_values_pm1 && non_unitary.implication_holds);
        assert!(matches!(
            real_monodromy_test(&PeriodLattice::elliptic(c(0.0, 1.0)).unwrap(), &UveClass::zero(2), 1e-9),
            Err(Error::NoRealStructure)
        ));
    }

    #[test]
    fn lattice_json() {
        let l = PeriodLattice::square();
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(serde_json::from_str::<PeriodLattice>(&text).unwrap(), l);
        assert!(serde_json::from_str::<PeriodLattice>(r#"{"g":1,"generators":[[[1,0]],[[2,0]]]}"#).is_err());
    }
}
