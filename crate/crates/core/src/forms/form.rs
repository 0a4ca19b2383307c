//! Differential forms on a one-dimensional chart.
//!
//! A [`Form`] is a sum of homogeneous pieces `f`, `f dz`, `f dz̄`,
//! `f dz∧dz̄`. Sign convention: `dz̄∧dz = −dz∧dz̄`. Bidegrees beyond `(1,1)`
//! vanish identically on a curve, so `∂`, `∂̄` and `∧` drop them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::normal;
use super::FormsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: u8,
    pub q: u8,
}

impl Bidegree {
    pub const FUNCTION: Bidegree = Bidegree { p: 0, q: 0 };
    pub const DZ: Bidegree = Bidegree { p: 1, q: 0 };
    pub const DZBAR: Bidegree = Bidegree { p: 0, q: 1 };
    pub const TOP: Bidegree = Bidegree { p: 1, q: 1 };
    pub const ALL: [Bidegree; 4] = [Self::FUNCTION, Self::DZ, Self::DZBAR, Self::TOP];

    pub fn new(p: u8, q: u8) -> Result<Self, FormsError> {
        if p > 1 || q > 1 {
            return Err(FormsError::Bidegree(format!("({p},{q}) does not exist on a curve")));
        }
        Ok(Bidegree { p, q })
    }

    /// Key used in the JSON encoding.
    pub fn basis_name(self) -> &'static str {
        match (self.p, self.q) {
            (0, 0) => "1",
            (1, 0) => "dz",
            (0, 1) => "dzbar",
            _ => "dz^dzbar",
        }
    }

    pub fn from_basis_name(s: &str) -> Result<Self, FormsError> {
        match s {
            "1" => Ok(Self::FUNCTION),
            "dz" => Ok(Self::DZ),
            "dzbar" => Ok(Self::DZBAR),
            "dz^dzbar" => Ok(Self::TOP),
            other => Err(FormsError::Bidegree(format!("unknown basis element {other:?}"))),
        }
    }

    fn index(self) -> usize {
        (self.p * 2 + self.q) as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Form {
    terms: BTreeMap<Bidegree, Expr>,
}

/// Coefficients in the order `1, dz, dz̄, dz∧dz̄` (see [`Bidegree::ALL`]).
pub type Coefficients = [Complex64; 4];

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn homogeneous(b: Bidegree, coeff: Expr) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(b, coeff);
        }
        Form { terms }
    }

    pub fn function(e: Expr) -> Self {
        Self::homogeneous(Bidegree::FUNCTION, e)
    }

    pub fn dz(e: Expr) -> Self {
        Self::homogeneous(Bidegree::DZ, e)
    }

    pub fn dzbar(e: Expr) -> Self {
        Self::homogeneous(Bidegree::DZBAR, e)
    }

    pub fn dz_dzbar(e: Expr) -> Self {
        Self::homogeneous(Bidegree::TOP, e)
    }

    pub fn coeff(&self, b: Bidegree) -> Expr {
        self.terms.get(&b).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Bidegree, &Expr)> {
        self.terms.iter().map(|(b, e)| (*b, e))
    }

    pub fn bidegrees(&self) -> Vec<Bidegree> {
        self.terms.keys().copied().collect()
    }

    /// Structurally zero (no terms at all).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> Form {
        let mut terms = BTreeMap::new();
        for (b, e) in &self.terms {
            let v = f(e);
            if !v.is_zero() {
                terms.insert(*b, v);
            }
        }
        Form { terms }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut terms = self.terms.clone();
        for (b, e) in &other.terms {
            let v = match terms.get(b) {
                Some(x) => x.add(e),
                None => e.clone(),
            };
            if v.is_zero() {
                terms.remove(b);
            } else {
                terms.insert(*b, v);
            }
        }
        Form { terms }
    }

    pub fn neg(&self) -> Form {
        self.map_coeffs(Expr::neg)
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    /// Multiply by a function.
    pub fn scale(&self, f: &Expr) -> Form {
        self.map_coeffs(|e| f.mul(e))
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (p, q) = (a.p + b.p, a.q + b.q);
                if p > 1 || q > 1 {
                    continue;
                }
                // dz̄ ∧ dz = −dz ∧ dz̄
                let sign = if a.q == 1 && b.p == 1 { -1.0 } else { 1.0 };
                let c = x.mul(y).scale(Complex64::new(sign, 0.0));
                out = out.add(&Form::homogeneous(Bidegree { p, q }, c));
            }
        }
        out
    }

    /// Holomorphic exterior derivative `∂`.
    pub fn del(&self) -> Form {
        let mut out = Form::zero();
        for (b, e) in &self.terms {
            if b.p == 1 {
                continue;
            }
            let (dz, _) = e.wirtinger();
            // ∂(f dz̄) = f_z dz∧dz̄ ; ∂f = f_z dz
            out = out.add(&Form::homogeneous(Bidegree { p: 1, q: b.q }, dz));
        }
        out
    }

    /// Antiholomorphic exterior derivative `∂̄`.
    pub fn delbar(&self) -> Form {
        let mut out = Form::zero();
        for (b, e) in &self.terms {
            if b.q == 1 {
                continue;
            }
            let (_, dzb) = e.wirtinger();
            // ∂̄(f dz) = f_z̄ dz̄∧dz = −f_z̄ dz∧dz̄
            let c = if b.p == 1 { dzb.neg() } else { dzb };
            out = out.add(&Form::homogeneous(Bidegree { p: b.p, q: 1 }, c));
        }
        out
    }

    pub fn d(&self) -> Form {
        self.del().add(&self.delbar())
    }

    /// Pull back along a holomorphic coordinate change `z = t(w)`.
    pub fn pullback(&self, t: &Expr) -> Form {
        let (t_prime, _) = t.wirtinger();
        let t_prime_bar = t_prime.conj();
        self.map_coeffs_with_bidegree(|b, e| {
            let mut c = e.subst(t);
            if b.p == 1 {
                c = c.mul(&t_prime);
            }
            if b.q == 1 {
                c = c.mul(&t_prime_bar);
            }
            c
        })
    }

    fn map_coeffs_with_bidegree(&self, f: impl Fn(Bidegree, &Expr) -> Expr) -> Form {
        let mut terms = BTreeMap::new();
        for (b, e) in &self.terms {
            let v = f(*b, e);
            if !v.is_zero() {
                terms.insert(*b, v);
            }
        }
        Form { terms }
    }

    /// Coefficient-wise complex conjugate of the coefficient functions
    /// (basis elements untouched).
    pub fn conj_coeffs(&self) -> Form {
        self.map_coeffs(Expr::conj)
    }

    pub fn eval(&self, p: Complex64) -> Result<Coefficients, FormsError> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (b, e) in &self.terms {
            out[b.index()] = e.eval(p)?;
        }
        Ok(out)
    }

    /// Exact equality of every coefficient (rational normal form).
    pub fn exact_eq(&self, other: &Form) -> Result<bool, FormsError> {
        for b in Bidegree::ALL {
            if !normal::equal(&self.coeff(b), &other.coeff(b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every coefficient reduces to zero exactly.
    pub fn exact_zero(&self) -> Result<bool, FormsError> {
        for e in self.terms.values() {
            if !normal::is_zero(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Max over `points` and coefficients of `|self − other|`.
    pub fn max_deviation(&self, other: &Form, points: &[Complex64]) -> Result<f64, FormsError> {
        let diff = self.sub(other);
        let mut worst: f64 = 0.0;
        for p in points {
            for c in diff.eval(*p)? {
                worst = worst.max(c.norm());
            }
        }
        Ok(worst)
    }

    /// Max over `points` of the largest coefficient modulus.
    pub fn max_norm(&self, points: &[Complex64]) -> Result<f64, FormsError> {
        self.max_deviation(&Form::zero(), points)
    }

    /// Conjugation-symmetry residual for a real structure `z ↦ z̄`:
    /// a coefficient of bidegree `(p,q)` must satisfy `c(z) = (−1)^{pq} conj(c(z̄))`.
    pub fn real_structure_residual(&self, points: &[Complex64]) -> Result<f64, FormsError> {
        let mut worst: f64 = 0.0;
        for p in points {
            for (b, e) in &self.terms {
                let here = e.eval(*p)?;
                let mirrored = e.eval(p.conj())?.conj();
                let sign = if b.p * b.q == 1 { -1.0 } else { 1.0 };
                worst = worst.max((here - mirrored * sign).norm());
            }
        }
        Ok(worst)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, e) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{e} {}", b.basis_name())?;
        }
        Ok(())
    }
}

/// `de/e`. For holomorphic `e` this is the (1,0)-form `e′/e dz`.
pub fn dlog(e: &Expr) -> Result<Form, FormsError> {
    if e.is_zero() {
        return Err(FormsError::Domain { point: Complex64::new(0.0, 0.0), what: "dlog of the zero function".into() });
    }
    let (dz, dzb) = e.wirtinger();
    Ok(Form::dz(dz.div(e)).add(&Form::dzbar(dzb.div(e))))
}

/// `∂ log e = (∂e/∂z)/e dz`.
pub fn del_log(e: &Expr) -> Result<Form, FormsError> {
    if e.is_zero() {
        return Err(FormsError::Domain { point: Complex64::new(0.0, 0.0), what: "log of the zero function".into() });
    }
    let (dz, _) = e.wirtinger();
    Ok(Form::dz(dz.div(e)))
}
