//! Exact equality on the rational fragment of [`Expr`].
//!
//! An expression is mapped to a quotient of polynomials with Gaussian
//! rational coefficients in the variables `z`, `z̄` and one extra variable per
//! distinct `exp`/`log` subterm (keyed by its printed form). Floating-point
//! constants are converted exactly (every finite `f64` is dyadic). Two
//! expressions are declared equal iff `p₁·q₂ − p₂·q₁` is the zero
//! polynomial: sound, and complete for rational functions of `z, z̄`, but
//! blind to transcendental identities such as `exp(a)·exp(b) = exp(a+b)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::{Expr, Node};
use super::FormsError;

pub type Gauss = Complex<BigRational>;

/// Hard cap on intermediate polynomial size.
pub const MAX_TERMS: usize = 50_000;

/// Exponent vector: index 0 is `z`, 1 is `z̄`, then atoms.
type Monomial = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Gauss>,
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0))
        .collect();
    trim(v)
}

fn too_large() -> FormsError {
    FormsError::NormalForm(format!("intermediate polynomial exceeds {MAX_TERMS} terms"))
}

impl Poly {
    pub fn constant(c: Gauss) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Self::constant(Gauss::one())
    }

    pub fn var(index: usize) -> Self {
        let mut m = vec![0; index + 1];
        m[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, Gauss::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Gauss::zero);
            *e = &*e + c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, FormsError> {
        if self.len().saturating_mul(other.len()) > MAX_TERMS * 8 {
            return Err(too_large());
        }
        let mut terms: BTreeMap<Monomial, Gauss> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let e = terms.entry(m).or_insert_with(Gauss::zero);
                *e = &*e + ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        if terms.len() > MAX_TERMS {
            return Err(too_large());
        }
        Ok(Poly { terms })
    }

    pub fn pow(&self, n: u32) -> Result<Poly, FormsError> {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// `num / den` with `den` never the zero polynomial.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    fn poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    fn add(&self, o: &RatFn) -> Result<RatFn, FormsError> {
        if self.den == o.den {
            return Ok(RatFn { num: self.num.add(&o.num), den: self.den.clone() });
        }
        Ok(RatFn {
            num: self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?),
            den: self.den.mul(&o.den)?,
        })
    }

    fn mul(&self, o: &RatFn) -> Result<RatFn, FormsError> {
        Ok(RatFn { num: self.num.mul(&o.num)?, den: self.den.mul(&o.den)? })
    }

    fn inv(&self) -> Result<RatFn, FormsError> {
        if self.num.is_zero() {
            return Err(FormsError::NormalForm("division by an identically zero expression".into()));
        }
        Ok(RatFn { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Registry of opaque transcendental subterms shared by the expressions
/// being compared.
#[derive(Default, Debug)]
pub struct Context {
    atoms: Vec<String>,
}

impl Context {
    fn atom(&mut self, e: &Expr) -> usize {
        let key = e.to_string();
        if let Some(k) = self.atoms.iter().position(|a| *a == key) {
            return 2 + k;
        }
        self.atoms.push(key);
        2 + self.atoms.len() - 1
    }

    pub fn to_ratfn(&mut self, e: &Expr) -> Result<RatFn, FormsError> {
        Ok(match e.node() {
            Node::Const(c) => {
                let re = BigRational::from_float(c.re).ok_or_else(|| FormsError::NormalForm("non-finite constant".into()))?;
                let im = BigRational::from_float(c.im).ok_or_else(|| FormsError::NormalForm("non-finite constant".into()))?;
                RatFn::poly(Poly::constant(Complex::new(re, im)))
            }
            Node::Z => RatFn::poly(Poly::var(0)),
            Node::ZBar => RatFn::poly(Poly::var(1)),
            Node::Add(ts) => {
                let mut acc = RatFn::poly(Poly::default());
                for t in ts {
                    acc = acc.add(&self.to_ratfn(t)?)?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = RatFn::poly(Poly::one());
                for f in fs {
                    acc = acc.mul(&self.to_ratfn(f)?)?;
                }
                acc
            }
            Node::Div(a, b) => self.to_ratfn(a)?.mul(&self.to_ratfn(b)?.inv()?)?,
            Node::Pow(a, n) => {
                let base = self.to_ratfn(a)?;
                let k = n.unsigned_abs();
                if k > 64 {
                    return Err(FormsError::NormalForm(format!("exponent {n} too large for exact expansion")));
                }
                let p = RatFn { num: base.num.pow(k)?, den: base.den.pow(k)? };
                if *n < 0 {
                    p.inv()?
                } else {
                    p
                }
            }
            Node::Exp(_) | Node::Log(_) => RatFn::poly(Poly::var(self.atom(e))),
        })
    }
}

/// Exact equality of `a` and `b` as rational functions (see module docs).
pub fn equal(a: &Expr, b: &Expr) -> Result<bool, FormsError> {
    if a == b {
        return Ok(true);
    }
    let mut ctx = Context::default();
    let ra = ctx.to_ratfn(a)?;
    let rb = ctx.to_ratfn(b)?;
    let lhs = ra.num.mul(&rb.den)?;
    let rhs = rb.num.mul(&ra.den)?;
    Ok(lhs == rhs)
}

pub fn is_zero(e: &Expr) -> Result<bool, FormsError> {
    if e.is_zero() {
        return Ok(true);
    }
    Ok(Context::default().to_ratfn(e)?.is_zero())
}

/// Exact rational value of a real `f64` (helper for tests and reports).
pub fn exact_real(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
