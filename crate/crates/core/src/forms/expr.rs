//! Expression trees in one complex chart coordinate `z` and its conjugate.
//!
//! Trees are immutable and cheap to clone (`Arc` nodes). The smart
//! constructors perform a small, fixed set of rewrites (constant folding,
//! flattening of sums and products, units and zeros); anything beyond that
//! is left to [`crate::forms::normal`], which decides equality exactly on
//! the rational fragment.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::FormsError;

/// Values whose modulus is at or below this threshold count as vanishing
/// denominators or logarithm arguments.
pub const DOMAIN_EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    Z,
    ZBar,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Exp(Expr),
    /// Principal branch.
    Log(Expr),
}

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    fn wrap(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn i() -> Self {
        Self::constant(Complex64::new(0.0, 1.0))
    }

    pub fn z() -> Self {
        Self::wrap(Node::Z)
    }

    pub fn zbar() -> Self {
        Self::wrap(Node::ZBar)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c == Complex64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c == Complex64::new(1.0, 0.0))
    }

    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Self {
        let mut constant = Complex64::new(0.0, 0.0);
        let mut rest = Vec::new();
        for t in terms {
            match t.node() {
                Node::Const(c) => constant += c,
                Node::Add(inner) => {
                    for u in inner {
                        match u.node() {
                            Node::Const(c) => constant += c,
                            _ => rest.push(u.clone()),
                        }
                    }
                }
                _ => rest.push(t),
            }
        }
        // combine like terms c·t + d·t = (c+d)·t
        let mut combined: Vec<(Complex64, Expr)> = Vec::with_capacity(rest.len());
        for t in rest {
            let (c, core) = t.split_coefficient();
            match combined.iter_mut().find(|(_, u)| *u == core) {
                Some((acc, _)) => *acc += c,
                None => combined.push((c, core)),
            }
        }
        let mut rest: Vec<Expr> = combined
            .into_iter()
            .filter(|(c, _)| *c != Complex64::new(0.0, 0.0))
            .map(|(c, core)| core.scale(c))
            .collect();
        if constant != Complex64::new(0.0, 0.0) {
            rest.insert(0, Expr::constant(constant));
        }
        match rest.len() {
            0 => Expr::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::wrap(Node::Add(rest)),
        }
    }

    /// `(c, t)` with `self = c·t` and `t` free of a leading constant factor.
    fn split_coefficient(&self) -> (Complex64, Expr) {
        if let Node::Mul(fs) = self.node() {
            if let Some(c) = fs[0].as_const() {
                let core = if fs.len() == 2 { fs[1].clone() } else { Self::wrap(Node::Mul(fs[1..].to_vec())) };
                return (c, core);
            }
        }
        (Complex64::new(1.0, 0.0), self.clone())
    }

    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Self {
        let mut constant = Complex64::new(1.0, 0.0);
        let mut rest = Vec::new();
        for f in factors {
            match f.node() {
                Node::Const(c) => constant *= c,
                Node::Mul(inner) => {
                    for u in inner {
                        match u.node() {
                            Node::Const(c) => constant *= c,
                            _ => rest.push(u.clone()),
                        }
                    }
                }
                _ => rest.push(f),
            }
        }
        if constant == Complex64::new(0.0, 0.0) {
            return Expr::zero();
        }
        if constant != Complex64::new(1.0, 0.0) {
            rest.insert(0, Expr::constant(constant));
        }
        match rest.len() {
            0 => Expr::constant(constant),
            1 => rest.pop().unwrap(),
            _ => Self::wrap(Node::Mul(rest)),
        }
    }

    pub fn add(&self, other: &Expr) -> Self {
        Self::sum([self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Expr) -> Self {
        Self::sum([self.clone(), other.neg()])
    }

    pub fn mul(&self, other: &Expr) -> Self {
        Self::product([self.clone(), other.clone()])
    }

    pub fn neg(&self) -> Self {
        Self::product([Expr::real(-1.0), self.clone()])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::product([Expr::constant(c), self.clone()])
    }

    pub fn div(&self, den: &Expr) -> Self {
        if self.is_zero() {
            return Expr::zero();
        }
        if let Some(d) = den.as_const() {
            if d != Complex64::new(0.0, 0.0) {
                return self.scale(d.inv());
            }
        }
        if self == den && !self.is_zero() {
            return Expr::one();
        }
        Self::wrap(Node::Div(self.clone(), den.clone()))
    }

    pub fn recip(&self) -> Self {
        Expr::one().div(self)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            if n > 0 || c != Complex64::new(0.0, 0.0) {
                return Expr::constant(c.powi(n));
            }
        }
        if let Node::Pow(base, m) = self.node() {
            if let Some(k) = m.checked_mul(n) {
                return base.powi(k);
            }
        }
        Self::wrap(Node::Pow(self.clone(), n))
    }

    pub fn exp(&self) -> Self {
        if let Some(c) = self.as_const() {
            return Expr::constant(c.exp());
        }
        Self::wrap(Node::Exp(self.clone()))
    }

    pub fn ln(&self) -> Self {
        if let Some(c) = self.as_const() {
            if c == Complex64::new(1.0, 0.0) {
                return Expr::zero();
            }
            if c.norm() > DOMAIN_EPS {
                return Expr::constant(c.ln());
            }
        }
        Self::wrap(Node::Log(self.clone()))
    }

    /// Complex conjugate of the expression (valid off the branch cut of `log`).
    pub fn conj(&self) -> Self {
        match self.node() {
            Node::Const(c) => Expr::constant(c.conj()),
            Node::Z => Expr::zbar(),
            Node::ZBar => Expr::z(),
            Node::Add(ts) => Expr::sum(ts.iter().map(Expr::conj)),
            Node::Mul(fs) => Expr::product(fs.iter().map(Expr::conj)),
            Node::Div(a, b) => a.conj().div(&b.conj()),
            Node::Pow(a, n) => a.conj().powi(*n),
            Node::Exp(a) => a.conj().exp(),
            Node::Log(a) => a.conj().ln(),
        }
    }

    /// Substitute `z := t` (and hence `z̄ := conj(t)`).
    pub fn subst(&self, t: &Expr) -> Self {
        let tbar = t.conj();
        self.subst_pair(t, &tbar)
    }

    fn subst_pair(&self, t: &Expr, tbar: &Expr) -> Self {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Z => t.clone(),
            Node::ZBar => tbar.clone(),
            Node::Add(ts) => Expr::sum(ts.iter().map(|u| u.subst_pair(t, tbar))),
            Node::Mul(fs) => Expr::product(fs.iter().map(|u| u.subst_pair(t, tbar))),
            Node::Div(a, b) => a.subst_pair(t, tbar).div(&b.subst_pair(t, tbar)),
            Node::Pow(a, n) => a.subst_pair(t, tbar).powi(*n),
            Node::Exp(a) => a.subst_pair(t, tbar).exp(),
            Node::Log(a) => a.subst_pair(t, tbar).ln(),
        }
    }

    /// True if `z̄` occurs anywhere in the tree.
    pub fn contains_conj(&self) -> bool {
        match self.node() {
            Node::Const(_) | Node::Z => false,
            Node::ZBar => true,
            Node::Add(ts) | Node::Mul(ts) => ts.iter().any(Expr::contains_conj),
            Node::Div(a, b) => a.contains_conj() || b.contains_conj(),
            Node::Pow(a, _) | Node::Exp(a) | Node::Log(a) => a.contains_conj(),
        }
    }

    /// Holomorphic if `z̄` is absent, or if `∂e/∂z̄` reduces to zero exactly.
    pub fn is_holomorphic(&self) -> bool {
        if !self.contains_conj() {
            return true;
        }
        let (_, dbar) = self.wirtinger();
        super::normal::is_zero(&dbar).unwrap_or(false)
    }

    pub fn depth(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Z | Node::ZBar => 1,
            Node::Add(ts) | Node::Mul(ts) => 1 + ts.iter().map(Expr::depth).max().unwrap_or(0),
            Node::Div(a, b) => 1 + a.depth().max(b.depth()),
            Node::Pow(a, _) | Node::Exp(a) | Node::Log(a) => 1 + a.depth(),
        }
    }

    pub fn eval(&self, p: Complex64) -> Result<Complex64, FormsError> {
        let v = match self.node() {
            Node::Const(c) => *c,
            Node::Z => p,
            Node::ZBar => p.conj(),
            Node::Add(ts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in ts {
                    acc += t.eval(p)?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= f.eval(p)?;
                }
                acc
            }
            Node::Div(a, b) => {
                let d = b.eval(p)?;
                if d.norm() <= DOMAIN_EPS {
                    return Err(FormsError::Domain {
                        point: p,
                        what: format!("denominator {b} vanishes"),
                    });
                }
                a.eval(p)? / d
            }
            Node::Pow(a, n) => {
                let base = a.eval(p)?;
                if *n < 0 && base.norm() <= DOMAIN_EPS {
                    return Err(FormsError::Domain {
                        point: p,
                        what: format!("negative power of vanishing {a}"),
                    });
                }
                base.powi(*n)
            }
            Node::Exp(a) => a.eval(p)?.exp(),
            Node::Log(a) => {
                let x = a.eval(p)?;
                if x.norm() <= DOMAIN_EPS {
                    return Err(FormsError::Domain {
                        point: p,
                        what: format!("log argument {a} vanishes"),
                    });
                }
                x.ln()
            }
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(FormsError::Domain {
                point: p,
                what: format!("non-finite value of {self}"),
            });
        }
        Ok(v)
    }

    /// Wirtinger derivatives `(∂e/∂z, ∂e/∂z̄)`.
    pub fn wirtinger(&self) -> (Expr, Expr) {
        match self.node() {
            Node::Const(_) => (Expr::zero(), Expr::zero()),
            Node::Z => (Expr::one(), Expr::zero()),
            Node::ZBar => (Expr::zero(), Expr::one()),
            Node::Add(ts) => {
                let (dz, dzb): (Vec<_>, Vec<_>) = ts.iter().map(Expr::wirtinger).unzip();
                (Expr::sum(dz), Expr::sum(dzb))
            }
            Node::Mul(fs) => {
                let ds: Vec<_> = fs.iter().map(Expr::wirtinger).collect();
                let leibniz = |pick: fn(&(Expr, Expr)) -> &Expr| {
                    Expr::sum((0..fs.len()).map(|k| {
                        Expr::product(
                            fs.iter()
                                .enumerate()
                                .map(|(j, f)| if j == k { pick(&ds[k]).clone() } else { f.clone() }),
                        )
                    }))
                };
                (leibniz(|d| &d.0), leibniz(|d| &d.1))
            }
            Node::Div(a, b) => {
                let (a_z, a_zb) = a.wirtinger();
                let (b_z, b_zb) = b.wirtinger();
                let b2 = b.powi(2);
                let quot = |da: Expr, db: Expr| da.mul(b).sub(&a.mul(&db)).div(&b2);
                (quot(a_z, b_z), quot(a_zb, b_zb))
            }
            Node::Pow(a, n) => {
                let (d_z, d_zb) = a.wirtinger();
                let outer = a.powi(n - 1).scale(Complex64::new(*n as f64, 0.0));
                (outer.mul(&d_z), outer.mul(&d_zb))
            }
            Node::Exp(a) => {
                let (d_z, d_zb) = a.wirtinger();
                (self.mul(&d_z), self.mul(&d_zb))
            }
            Node::Log(a) => {
                let (d_z, d_zb) = a.wirtinger();
                (d_z.div(a), d_zb.div(a))
            }
        }
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::real(x)
    }
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Self {
        Expr::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::normal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_plus_zzbar() -> Expr {
        Expr::one().add(&Expr::z().mul(&Expr::zbar()))
    }

    #[test]
    fn eval_examples() {
        let zz = Expr::z().mul(&Expr::zbar());
        assert!((zz.eval(c(1.0, 1.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        let el = Expr::z().ln().exp();
        assert!((el.eval(c(2.0, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        let inv = one_plus_zzbar().powi(-1);
        assert_eq!(inv.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn eval_domain_errors() {
        assert!(matches!(Expr::z().recip().eval(c(0.0, 0.0)), Err(FormsError::Domain { .. })));
        assert!(matches!(Expr::z().ln().eval(c(0.0, 0.0)), Err(FormsError::Domain { .. })));
        assert!(matches!(Expr::z().powi(-2).eval(c(0.0, 0.0)), Err(FormsError::Domain { .. })));
    }

    #[test]
    fn wirtinger_examples() {
        let z = Expr::z();
        let zb = Expr::zbar();
        let e = z.powi(2).mul(&zb);
        let (dz, dzb) = e.wirtinger();
        assert!(normal::equal(&dz, &Expr::real(2.0).mul(&z).mul(&zb)).unwrap());
        assert!(normal::equal(&dzb, &z.powi(2)).unwrap());

        let l = one_plus_zzbar().ln();
        let (dz, dzb) = l.wirtinger();
        assert!(normal::equal(&dz, &zb.div(&one_plus_zzbar())).unwrap());
        assert!(normal::equal(&dzb, &z.div(&one_plus_zzbar())).unwrap());

        let h = z.powi(3).add(&z.exp());
        let (dz, dzb) = h.wirtinger();
        assert!(dzb.is_zero());
        assert!(normal::equal(&dz, &Expr::real(3.0).mul(&z.powi(2)).add(&z.exp())).unwrap());
    }

    #[test]
    fn smart_constructors_fold() {
        assert!(Expr::z().mul(&Expr::zero()).is_zero());
        assert_eq!(Expr::z().powi(1), Expr::z());
        assert_eq!(Expr::z().powi(2).powi(3), Expr::z().powi(6));
        assert!(Expr::real(2.0).add(&Expr::real(-2.0)).is_zero());
        assert!(Expr::one().ln().is_zero());
    }

    #[test]
    fn holomorphic_detection() {
        assert!(Expr::z().powi(-3).is_holomorphic());
        assert!(!one_plus_zzbar().is_holomorphic());
        // z̄ that cancels is still holomorphic
        let cancel = Expr::z().add(&Expr::zbar()).sub(&Expr::zbar());
        assert!(cancel.is_holomorphic());
    }

    #[test]
    fn conj_and_subst() {
        let e = Expr::z().mul(&Expr::constant(c(0.0, 2.0)));
        let p = c(0.3, -0.7);
        assert!((e.conj().eval(p).unwrap() - e.eval(p).unwrap().conj()).norm() < 1e-15);
        let t = Expr::z().recip();
        let s = Expr::z().mul(&Expr::zbar()).subst(&t);
        assert!((s.eval(c(2.0, 0.0)).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
    }
}
