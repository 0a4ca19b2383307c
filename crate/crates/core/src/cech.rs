//! Alternating Čech cochains and cone cocycles `(α, β)` with
//! `δα = 0` and `α_ij = β_i − β_j`.
//!
//! The value of a cochain at a key `(i0, …, ip)` is written in the coordinate
//! (and, for adjoint coefficients, the frame) of chart `i0`. Moving a value
//! from chart `j` to chart `i` is [`Coefficients::transport`].

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::forms::{Bidegree, Cover, Expr, ExprMatrix, Form, FormMatrix};
use crate::{Error, Result};

/// Number of trapezoid nodes on `|z| = 1` used by [`residue_degree`].
pub const RESIDUE_NODES: usize = 1 << 10;

/// Frames of a holomorphic bundle: `f_ij` with `v_j = f_ij · v_i`, written in
/// chart `i`'s coordinate, for every ordered overlapping pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Frames {
    rank: usize,
    f: BTreeMap<(usize, usize), ExprMatrix>,
    f_inv: BTreeMap<(usize, usize), ExprMatrix>,
}

impl Frames {
    pub fn new(rank: usize, f: BTreeMap<(usize, usize), ExprMatrix>) -> Result<Self> {
        let mut f_inv = BTreeMap::new();
        for (k, m) in &f {
            if m.dim() != rank {
                return Err(Error::InvalidBundle(format!("transition {k:?} has size {}, rank is {rank}", m.dim())));
            }
            f_inv.insert(*k, m.inverse()?);
        }
        Ok(Frames { rank, f, f_inv })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&ExprMatrix> {
        self.f.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &ExprMatrix)> {
        self.f.iter()
    }
}

/// Coefficient system of a cochain: plain forms, or `End(E)`-valued forms.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Scalar,
    Adjoint(Arc<Frames>),
}

impl Coefficients {
    pub fn rank(&self) -> usize {
        match self {
            Coefficients::Scalar => 1,
            Coefficients::Adjoint(fr) => fr.rank,
        }
    }

    /// Rewrite a value given on chart `from` (its coordinate and frame) on
    /// chart `to`.
    pub fn transport(&self, cover: &Cover, m: &FormMatrix, from: usize, to: usize) -> Result<FormMatrix> {
        if from == to {
            return Ok(m.clone());
        }
        let t = cover
            .transition(from, to)
            .ok_or_else(|| Error::CoverMismatch(format!("charts {from} and {to} do not overlap")))?;
        let framed = match self {
            Coefficients::Scalar => m.clone(),
            Coefficients::Adjoint(fr) if fr.rank == 1 => m.clone(),
            Coefficients::Adjoint(fr) => {
                // M_to = f · M_from · f^{-1} with f = f_{from,to}
                let g = fr
                    .f
                    .get(&(from, to))
                    .ok_or_else(|| Error::InvalidBundle(format!("transition {from}->{to} missing")))?;
                let g_inv = &fr.f_inv[&(from, to)];
                m.conjugate(g, g_inv)
            }
        };
        Ok(framed.pullback(&t))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    degree: usize,
    rank: usize,
    values: BTreeMap<Vec<usize>, FormMatrix>,
}

impl Cochain {
    pub fn zero(degree: usize, rank: usize) -> Self {
        Cochain { degree, rank, values: BTreeMap::new() }
    }

    pub fn from_values(degree: usize, rank: usize, values: impl IntoIterator<Item = (Vec<usize>, FormMatrix)>) -> Result<Self> {
        let mut c = Cochain::zero(degree, rank);
        for (k, v) in values {
            c.insert(k, v)?;
        }
        Ok(c)
    }

    /// Degree-0 cochain of scalar forms, one per chart.
    pub fn scalar0(forms: Vec<Form>) -> Self {
        Cochain {
            degree: 0,
            rank: 1,
            values: forms.into_iter().enumerate().map(|(i, f)| (vec![i], FormMatrix::scalar(f))).collect(),
        }
    }

    pub fn insert(&mut self, key: Vec<usize>, value: FormMatrix) -> Result<()> {
        if key.len() != self.degree + 1 || key.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!("key {key:?} is not a strictly increasing {}-tuple", self.degree + 1)));
        }
        if value.dim() != self.rank {
            return Err(Error::Rank { expected: self.rank, got: value.dim() });
        }
        self.values.insert(key, value);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, key: &[usize]) -> FormMatrix {
        self.values.get(key).cloned().unwrap_or_else(|| FormMatrix::zero(self.rank))
    }

    pub fn scalar(&self, key: &[usize]) -> Form {
        self.get(key).as_scalar().cloned().unwrap_or_else(|| self.get(key).trace())
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &FormMatrix)> {
        self.values.iter()
    }

    fn check_shape(&self, o: &Cochain) -> Result<()> {
        if self.degree != o.degree || self.rank != o.rank {
            return Err(Error::CoverMismatch(format!(
                "cochains of degree/rank {}/{} and {}/{}",
                self.degree, self.rank, o.degree, o.rank
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Cochain) -> Result<Cochain> {
        self.check_shape(o)?;
        let mut values = self.values.clone();
        for (k, v) in &o.values {
            let sum = match values.get(k) {
                Some(x) => x.add(v),
                None => v.clone(),
            };
            values.insert(k.clone(), sum);
        }
        values.retain(|_, v| !v.is_zero());
        Ok(Cochain { degree: self.degree, rank: self.rank, values })
    }

    pub fn neg(&self) -> Cochain {
        self.map(FormMatrix::neg)
    }

    pub fn sub(&self, o: &Cochain) -> Result<Cochain> {
        self.add(&o.neg())
    }

    pub fn zscale(&self, k: i64) -> Cochain {
        if k == 0 {
            return Cochain::zero(self.degree, self.rank);
        }
        let s = Expr::real(k as f64);
        self.map(|m| m.map(|f| f.scale(&s)))
    }

    pub fn map(&self, f: impl Fn(&FormMatrix) -> FormMatrix) -> Cochain {
        let mut values: BTreeMap<_, _> = self.values.iter().map(|(k, v)| (k.clone(), f(v))).collect();
        values.retain(|_, v| !v.is_zero());
        Cochain { degree: self.degree, rank: self.rank, values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(FormMatrix::is_zero)
    }

    /// Every value reduces to zero in the rational normal form.
    pub fn exact_zero(&self) -> Result<bool> {
        for v in self.values.values() {
            if !v.exact_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn exact_eq(&self, o: &Cochain) -> Result<bool> {
        self.check_shape(o)?;
        self.sub(o)?.exact_zero()
    }

    /// Max coefficient modulus over the grid of each key.
    pub fn max_norm(&self, cover: &Cover) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (k, v) in &self.values {
            worst = worst.max(v.max_norm(cover.grid(k)?)?);
        }
        Ok(worst)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.values.values().all(|m| m.entries().iter().all(|f| f.terms().all(|(_, e)| e.is_holomorphic())))
    }
}

/// `(δc)_{i0…ip+1} = Σ_k (−1)^k c_{i0…î_k…ip+1}`; the `k = 0` face is moved
/// from chart `i1` to chart `i0`.
pub fn delta(cover: &Cover, coeffs: &Coefficients, c: &Cochain) -> Result<Cochain> {
    let mut out = Cochain::zero(c.degree + 1, c.rank);
    for key in cover.simplices(c.degree + 1) {
        let mut acc = FormMatrix::zero(c.rank);
        for k in 0..key.len() {
            let face: Vec<usize> = key.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &x)| x).collect();
            let v = c.get(&face);
            if v.is_zero() {
                continue;
            }
            let v = if k == 0 { coeffs.transport(cover, &v, key[1], key[0])? } else { v };
            acc = if k % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
        }
        if !acc.is_zero() {
            out.values.insert(key, acc);
        }
    }
    Ok(out)
}

/// A pair `(α, β)` on a cover: `α` of degree 1, `β` of degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCocycle {
    pub cover: Arc<Cover>,
    pub coeffs: Coefficients,
    /// Bidegree of the coefficient forms (`(1,0)` for Atiyah/ĉ₁ classes).
    pub tag: Bidegree,
    pub alpha: Cochain,
    pub beta: Cochain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub passes: bool,
    pub delta_alpha_residual: f64,
    pub gluing_residual: f64,
    pub tol: f64,
}

impl ConeCocycle {
    pub fn new(cover: Arc<Cover>, coeffs: Coefficients, tag: Bidegree, alpha: Cochain, beta: Cochain) -> Result<Self> {
        if alpha.degree != 1 || beta.degree != 0 {
            return Err(Error::Precondition("alpha must have degree 1 and beta degree 0".into()));
        }
        if alpha.rank != coeffs.rank() || beta.rank != coeffs.rank() {
            return Err(Error::Rank { expected: coeffs.rank(), got: alpha.rank.max(beta.rank) });
        }
        Ok(ConeCocycle { cover, coeffs, tag, alpha, beta })
    }

    pub fn zero(cover: Arc<Cover>, coeffs: Coefficients, tag: Bidegree) -> Self {
        let r = coeffs.rank();
        ConeCocycle { cover, coeffs, tag, alpha: Cochain::zero(1, r), beta: Cochain::zero(0, r) }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.rank()
    }

    fn check_compatible(&self, o: &ConeCocycle) -> Result<()> {
        if *self.cover != *o.cover {
            return Err(Error::CoverMismatch(format!("{} vs {}", self.cover.id(), o.cover.id())));
        }
        if self.coeffs != o.coeffs {
            return Err(Error::CoverMismatch("different coefficient systems".into()));
        }
        if self.tag != o.tag {
            return Err(Error::CoverMismatch(format!("coefficient tags {:?} vs {:?}", self.tag, o.tag)));
        }
        Ok(())
    }

    /// Baer sum at representative level.
    pub fn add(&self, o: &ConeCocycle) -> Result<ConeCocycle> {
        self.check_compatible(o)?;
        Ok(ConeCocycle { alpha: self.alpha.add(&o.alpha)?, beta: self.beta.add(&o.beta)?, ..self.clone() })
    }

    pub fn neg(&self) -> ConeCocycle {
        ConeCocycle { alpha: self.alpha.neg(), beta: self.beta.neg(), ..self.clone() }
    }

    pub fn zscale(&self, k: i64) -> ConeCocycle {
        ConeCocycle { alpha: self.alpha.zscale(k), beta: self.beta.zscale(k), ..self.clone() }
    }

    /// `(β_i − β_j)` moved to chart `i`, for every overlap `(i, j)`.
    fn beta_difference(&self) -> Result<Cochain> {
        // (δβ)_ij = β_j − β_i, so the gluing target is −δβ
        Ok(delta(&self.cover, &self.coeffs, &self.beta)?.neg())
    }

    /// Sampled residuals of `δα = 0` and `α = −δβ`.
    pub fn check(&self, tol: f64) -> Result<CocycleReport> {
        let da = delta(&self.cover, &self.coeffs, &self.alpha)?;
        let delta_alpha_residual = da.max_norm(&self.cover)?;
        let mut gluing_residual: f64 = 0.0;
        let target = self.beta_difference()?;
        for key in self.cover.simplices(1) {
            let d = self.alpha.get(&key).sub(&target.get(&key));
            gluing_residual = gluing_residual.max(d.max_norm(self.cover.grid(&key)?)?);
        }
        Ok(CocycleReport {
            passes: delta_alpha_residual <= tol && gluing_residual <= tol,
            delta_alpha_residual,
            gluing_residual,
            tol,
        })
    }

    /// Both cocycle identities hold in the rational normal form.
    pub fn exact_check(&self) -> Result<bool> {
        let da = delta(&self.cover, &self.coeffs, &self.alpha)?;
        Ok(da.exact_zero()? && self.alpha.exact_eq(&self.beta_difference()?)?)
    }

    /// Componentwise exact equality of representatives.
    pub fn exact_eq(&self, o: &ConeCocycle) -> Result<bool> {
        self.check_compatible(o)?;
        Ok(self.alpha.exact_eq(&o.alpha)? && self.beta.exact_eq(&o.beta)?)
    }

    /// Largest defect of `c(z) = (−1)^{pq} conj(c(z̄))` over all values and grids.
    pub fn real_structure_residual(&self) -> Result<f64> {
        if !self.cover.is_real() {
            return Err(Error::Precondition(format!("cover {} carries no real structure", self.cover.id())));
        }
        let mut worst: f64 = 0.0;
        for c in [&self.alpha, &self.beta] {
            for (k, v) in c.iter() {
                worst = worst.max(v.real_structure_residual(self.cover.grid(k)?)?);
            }
        }
        Ok(worst)
    }
}

pub fn is_cone_cocycle(c: &ConeCocycle, tol: f64) -> Result<CocycleReport> {
    c.check(tol)
}

/// `(−δγ, γ)`.
pub fn coboundary(cover: Arc<Cover>, coeffs: Coefficients, tag: Bidegree, gamma: &Cochain) -> Result<ConeCocycle> {
    let alpha = delta(&cover, &coeffs, gamma)?.neg();
    ConeCocycle::new(cover, coeffs, tag, alpha, gamma.clone())
}

pub fn map_nu(c: &ConeCocycle) -> Cochain {
    c.alpha.clone()
}

/// `b(T) = (0, (T|U_i)_i)` for a global smooth section given chart-wise.
pub fn map_b(cover: Arc<Cover>, coeffs: Coefficients, tag: Bidegree, t: &Cochain) -> Result<ConeCocycle> {
    let r = coeffs.rank();
    ConeCocycle::new(cover, coeffs, tag, Cochain::zero(1, r), t.clone())
}

/// A global algebraic section regarded as a smooth one; rejects
/// non-holomorphic input.
pub fn map_iota(phi: &Cochain) -> Result<Cochain> {
    if phi.degree != 0 {
        return Err(Error::Precondition("a global section is a 0-cochain".into()));
    }
    if !phi.is_holomorphic() {
        return Err(Error::NotHolomorphic("section has a z̄-dependent coefficient".into()));
    }
    Ok(phi.clone())
}

/// Sampled gluing defect `max |s_i − s_j|` of a 0-cochain meant as a global section.
pub fn global_section_residual(cover: &Cover, coeffs: &Coefficients, s: &Cochain) -> Result<f64> {
    delta(cover, coeffs, s)?.max_norm(cover)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiImage {
    /// `∂̄β_i` on each chart.
    pub forms: Cochain,
    pub residual: f64,
}

/// Second fundamental form `(∂̄β_i)_i` with its sampled gluing residual.
pub fn map_psi(c: &ConeCocycle, tol: f64) -> Result<PsiImage> {
    let forms = c.beta.map(FormMatrix::delbar);
    let residual = global_section_residual(&c.cover, &c.coeffs, &forms)?;
    if residual > tol {
        return Err(Error::Gluing { residual, tol });
    }
    Ok(PsiImage { forms, residual })
}

/// `(1/2πi) ∮_{|z|=1} tr α_01` by the trapezoid rule; with this orientation
/// `deg 𝒪(1) = +1`.
pub fn residue_degree(c: &ConeCocycle) -> Result<Complex64> {
    if c.cover.charts() != 2 || c.cover.simplices(1) != vec![vec![0, 1]] {
        return Err(Error::Precondition("residue_degree needs the two-chart cover of P1".into()));
    }
    if c.tag != Bidegree::DZ {
        return Err(Error::Precondition("residue_degree needs (1,0)-form coefficients".into()));
    }
    let a = c.alpha.get(&[0, 1]).trace().coeff(Bidegree::DZ);
    let n = RESIDUE_NODES;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
        acc += a.eval(z)? * z;
    }
    Ok(acc / n as f64)
}

/// JSON shape of a form: basis name (`1`, `dz`, `dzbar`, `dz^dzbar`) to coefficient.
pub type FormDoc = BTreeMap<String, Expr>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    pub keys: Vec<Vec<usize>>,
    /// One matrix (list of rows) of forms per key.
    pub values: Vec<Vec<Vec<FormDoc>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<Expr>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeCocycleDoc {
    pub cover: String,
    pub rank: usize,
    pub tag: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frames: Vec<FrameDoc>,
    pub alpha: CochainDoc,
    pub beta: CochainDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<CocycleReport>,
}

pub fn form_to_doc(f: &Form) -> FormDoc {
    f.terms().map(|(b, e)| (b.basis_name().to_string(), e.clone())).collect()
}

pub fn form_from_doc(d: &FormDoc) -> Result<Form> {
    let mut f = Form::zero();
    for (name, e) in d {
        f = f.add(&Form::homogeneous(Bidegree::from_basis_name(name)?, e.clone()));
    }
    Ok(f)
}

fn cochain_to_doc(c: &Cochain) -> CochainDoc {
    let mut keys = Vec::new();
    let mut values = Vec::new();
    for (k, v) in c.iter() {
        keys.push(k.clone());
        let n = v.dim();
        values.push((0..n).map(|r| (0..n).map(|col| form_to_doc(v.get(r, col))).collect()).collect());
    }
    CochainDoc { keys, values }
}

fn cochain_from_doc(d: &CochainDoc, degree: usize, rank: usize, cover: &Cover) -> Result<Cochain> {
    if d.keys.len() != d.values.len() {
        return Err(Error::Decode("keys and values differ in length".into()));
    }
    let valid = if degree == 0 { (0..cover.charts()).map(|i| vec![i]).collect() } else { cover.simplices(degree) };
    let mut c = Cochain::zero(degree, rank);
    for (k, rows) in d.keys.iter().zip(&d.values) {
        if !valid.contains(k) {
            return Err(Error::Decode(format!("key {k:?} is not a simplex of cover {}", cover.id())));
        }
        if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
            return Err(Error::Decode(format!("value at {k:?} is not {rank}x{rank}")));
        }
        let entries = rows.iter().flatten().map(form_from_doc).collect::<Result<Vec<_>>>()?;
        c.insert(k.clone(), FormMatrix::from_entries(rank, entries)?)?;
    }
    Ok(c)
}

impl ConeCocycle {
    pub fn to_doc(&self, residuals: Option<CocycleReport>) -> ConeCocycleDoc {
        let frames = match &self.coeffs {
            Coefficients::Scalar => Vec::new(),
            Coefficients::Adjoint(fr) => fr
                .iter()
                .map(|(&(from, to), m)| FrameDoc { from, to, matrix: m.rows() })
                .collect(),
        };
        ConeCocycleDoc {
            cover: self.cover.id().to_string(),
            rank: self.rank(),
            tag: self.tag.basis_name().to_string(),
            frames,
            alpha: cochain_to_doc(&self.alpha),
            beta: cochain_to_doc(&self.beta),
            residuals,
        }
    }

    /// Decode against a resolved cover.
    pub fn from_doc(doc: &ConeCocycleDoc, cover: Arc<Cover>) -> Result<Self> {
        if doc.cover != cover.id() {
            return Err(Error::CoverMismatch(format!("document names cover {}, got {}", doc.cover, cover.id())));
        }
        if doc.rank == 0 || doc.rank > 8 {
            return Err(Error::Decode(format!("unsupported rank {}", doc.rank)));
        }
        let coeffs = if doc.frames.is_empty() {
            if doc.rank != 1 {
                return Err(Error::Decode("matrix-valued cocycles need frames".into()));
            }
            Coefficients::Scalar
        } else {
            let mut f = BTreeMap::new();
            for fd in &doc.frames {
                if !cover.overlaps(fd.from, fd.to) || fd.from == fd.to || fd.from >= cover.charts() {
                    return Err(Error::Decode(format!("frame {}->{} is not an overlap", fd.from, fd.to)));
                }
                f.insert((fd.from, fd.to), ExprMatrix::from_rows(fd.matrix.clone())?);
            }
            Coefficients::Adjoint(Arc::new(Frames::new(doc.rank, f)?))
        };
        let tag = Bidegree::from_basis_name(&doc.tag)?;
        let alpha = cochain_from_doc(&doc.alpha, 1, doc.rank, &cover)?;
        let beta = cochain_from_doc(&doc.beta, 0, doc.rank, &cover)?;
        ConeCocycle::new(cover, coeffs, tag, alpha, beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::cover::DEFAULT_SEED;

    fn p1() -> Arc<Cover> {
        Arc::new(Cover::p1(DEFAULT_SEED))
    }

    fn fs_cocycle(n: i32) -> ConeCocycle {
        let z = Expr::z();
        let nn = Expr::real(n as f64);
        let s = Expr::one().add(&z.mul(&Expr::zbar()));
        let beta = Cochain::scalar0(vec![
            Form::dz(nn.mul(&Expr::zbar()).div(&s)),
            Form::dz(nn.mul(&Expr::zbar()).div(&s)),
        ]);
        let alpha = Cochain::from_values(1, 1, [(vec![0, 1], FormMatrix::scalar(Form::dz(nn.div(&z))))]).unwrap();
        ConeCocycle::new(p1(), Coefficients::Scalar, Bidegree::DZ, alpha, beta).unwrap()
    }

    #[test]
    fn delta_of_zero_cochain_on_two_charts() {
        let cover = p1();
        let b = Cochain::scalar0(vec![Form::dz(Expr::one()), Form::dz(Expr::z())]);
        let d = delta(&cover, &Coefficients::Scalar, &b).unwrap();
        // β_1 = w dw moved to chart 0 is (1/z)(−dz/z²), minus β_0 = dz
        let expected = Form::dz(Expr::z().powi(-3).neg().sub(&Expr::one()));
        assert!(d.scalar(&[0, 1]).exact_eq(&expected).unwrap());
        let constant = Cochain::scalar0(vec![Form::function(Expr::real(2.0)), Form::function(Expr::real(2.0))]);
        assert!(delta(&cover, &Coefficients::Scalar, &constant).unwrap().exact_zero().unwrap());
    }

    #[test]
    fn fubini_study_cocycle_glues() {
        for n in -3..=3 {
            let c = fs_cocycle(n);
            let rep = c.check(1e-10).unwrap();
            assert!(rep.passes, "n={n}: {rep:?}");
            assert!(c.exact_check().unwrap());
            let deg = residue_degree(&c).unwrap();
            assert!((deg - Complex64::new(n as f64, 0.0)).norm() < 1e-9);
            assert!(c.real_structure_residual().unwrap() < 1e-12);
        }
    }

    #[test]
    fn perturbed_beta_fails() {
        let mut c = fs_cocycle(2);
        c.beta.insert(vec![1], FormMatrix::scalar(c.beta.scalar(&[1]).add(&Form::dz(Expr::one())))).unwrap();
        assert!(!c.check(1e-10).unwrap().passes);
    }

    #[test]
    fn group_law_and_mismatch() {
        let c = fs_cocycle(3);
        assert!(c.add(&c.neg()).unwrap().alpha.is_zero());
        assert!(c.zscale(0).beta.is_zero());
        let other = ConeCocycle::zero(Arc::new(Cover::p1_three(DEFAULT_SEED)), Coefficients::Scalar, Bidegree::DZ);
        assert!(matches!(c.add(&other), Err(Error::CoverMismatch(_))));
    }

    #[test]
    fn document_roundtrip() {
        let c = fs_cocycle(-2);
        let doc = c.to_doc(Some(c.check(1e-10).unwrap()));
        let text = serde_json::to_string(&doc).unwrap();
        let back: ConeCocycleDoc = serde_json::from_str(&text).unwrap();
        let c2 = ConeCocycle::from_doc(&back, p1()).unwrap();
        assert!(c.exact_eq(&c2).unwrap());
    }
}
