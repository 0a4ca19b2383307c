//! Hermitian bundle data on a cover and the Atiyah / first Chern cocycles
//! `((−f_ij^{-1} df_ij), (−h_i^{-1} ∂h_i))`.
//!
//! Conventions: `f_ij` satisfies `v_j = f_ij · v_i` for fibre coordinates in
//! the frames of charts `i` and `j`, and is written in chart `i`'s
//! coordinate. Gram matrices obey `h_i = f_ijᴴ · h_j · f_ij`. Matrix-valued
//! forms are written in the frame of the chart that carries them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cech::{self, Cochain, Coefficients, ConeCocycle, Frames};
use crate::forms::matrix::min_hermitian_eigenvalue;
use crate::forms::{Bidegree, Cover, CoverSpec, Expr, ExprMatrix, FormMatrix};
use crate::quad;
use crate::{Error, Result};

/// Tolerance of the degree cross-check in [`chern_number`].
pub const CHERN_AGREEMENT_TOL: f64 = 1e-6;

/// Partition of unity on ℙ¹: chart 0 carries `|z| ≤ 1.2`, chart 1 carries `|z| ≥ 0.8`.
pub const PARTITION_INNER: f64 = 0.8;
pub const PARTITION_OUTER: f64 = 1.2;
/// Gauss–Legendre nodes per radial panel and trapezoid nodes in angle.
pub const RADIAL_NODES: usize = 48;
pub const ANGULAR_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianBundleData {
    cover: Arc<Cover>,
    rank: usize,
    f: BTreeMap<(usize, usize), ExprMatrix>,
    h: Vec<ExprMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleReport {
    pub passes: bool,
    pub holomorphic: bool,
    pub cocycle_residual: f64,
    pub metric_residual: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
}

impl HermitianBundleData {
    /// `transitions` must contain `f_ij` for at least one order of every
    /// overlap; the other order is derived as `f_ji = f_ij^{-1} ∘ T_ij`.
    pub fn new(cover: Arc<Cover>, rank: usize, transitions: BTreeMap<(usize, usize), ExprMatrix>, metrics: Vec<ExprMatrix>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidBundle("rank must be positive".into()));
        }
        if metrics.len() != cover.charts() {
            return Err(Error::InvalidBundle(format!("{} metrics for {} charts", metrics.len(), cover.charts())));
        }
        if let Some(m) = metrics.iter().find(|m| m.dim() != rank) {
            return Err(Error::InvalidBundle(format!("metric of size {} for rank {rank}", m.dim())));
        }
        let mut f = BTreeMap::new();
        for (&(i, j), m) in &transitions {
            if i == j || !cover.overlaps(i, j) {
                return Err(Error::InvalidBundle(format!("transition ({i},{j}) is not an overlap of {}", cover.id())));
            }
            if m.dim() != rank {
                return Err(Error::InvalidBundle(format!("transition ({i},{j}) has size {}", m.dim())));
            }
            if !m.is_holomorphic() {
                return Err(Error::NotHolomorphic(format!("transition ({i},{j})")));
            }
            f.insert((i, j), m.clone());
        }
        for key in cover.simplices(1) {
            let (i, j) = (key[0], key[1]);
            match (f.contains_key(&(i, j)), f.contains_key(&(j, i))) {
                (true, true) => {}
                (true, false) => {
                    let t = cover.transition(i, j).expect("overlap");
                    let inv = f[&(i, j)].inverse()?.subst(&t);
                    f.insert((j, i), inv);
                }
                (false, true) => {
                    let t = cover.transition(j, i).expect("overlap");
                    let inv = f[&(j, i)].inverse()?.subst(&t);
                    f.insert((i, j), inv);
                }
                (false, false) => return Err(Error::InvalidBundle(format!("no transition on overlap ({i},{j})"))),
            }
        }
        Ok(HermitianBundleData { cover, rank, f, h: metrics })
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transition(&self, i: usize, j: usize) -> Option<&ExprMatrix> {
        self.f.get(&(i, j))
    }

    pub fn metric(&self, i: usize) -> &ExprMatrix {
        &self.h[i]
    }

    pub fn coefficients(&self) -> Result<Coefficients> {
        if self.rank == 1 {
            return Ok(Coefficients::Scalar);
        }
        Ok(Coefficients::Adjoint(Arc::new(Frames::new(self.rank, self.f.clone())?)))
    }

    /// Sampled cocycle, metric-compatibility and positivity checks.
    pub fn validate(&self, tol: f64) -> Result<BundleReport> {
        let cover = &self.cover;
        let eye = DMatrix::<Complex64>::identity(self.rank, self.rank);
        let mut cocycle_residual: f64 = 0.0;
        let mut metric_residual: f64 = 0.0;
        let mut min_eigenvalue = f64::INFINITY;
        for key in cover.simplices(1) {
            let (i, j) = (key[0], key[1]);
            for &p in cover.grid(&key)? {
                let q = cover.map_point(j, i, p)?;
                let fij = self.f[&(i, j)].eval(p)?;
                let fji = self.f[&(j, i)].eval(q)?;
                cocycle_residual = cocycle_residual.max((&fji * &fij - &eye).norm());
                let hi = self.h[i].eval(p)?;
                let hj = self.h[j].eval(q)?;
                let pulled = fij.adjoint() * hj * &fij;
                metric_residual = metric_residual.max((&pulled - &hi).norm() / hi.norm().max(1.0));
            }
        }
        for key in cover.simplices(2) {
            let (i, j, k) = (key[0], key[1], key[2]);
            for &p in cover.grid(&key)? {
                let zj = cover.map_point(j, i, p)?;
                let fik = self.f[&(i, k)].eval(p)?;
                let composed = self.f[&(j, k)].eval(zj)? * self.f[&(i, j)].eval(p)?;
                cocycle_residual = cocycle_residual.max((&composed - &fik).norm() / fik.norm().max(1.0));
            }
        }
        for i in 0..cover.charts() {
            let mut keys = vec![vec![i]];
            keys.extend(cover.simplices(1).into_iter().filter(|k| k[0] == i));
            for key in keys {
                for &p in cover.grid(&key)? {
                    let h = self.h[i].eval(p)?;
                    let lo = min_hermitian_eigenvalue(&h, tol).unwrap_or(f64::NEG_INFINITY);
                    min_eigenvalue = min_eigenvalue.min(lo);
                }
            }
        }
        let holomorphic = self.f.values().all(ExprMatrix::is_holomorphic);
        Ok(BundleReport {
            passes: holomorphic && cocycle_residual <= tol && metric_residual <= tol && min_eigenvalue > 0.0,
            holomorphic,
            cocycle_residual,
            metric_residual,
            min_eigenvalue,
            tol,
        })
    }
}

fn minus_dlog_matrix(m: &ExprMatrix) -> Result<FormMatrix> {
    if m.dim() == 1 {
        return Ok(FormMatrix::scalar(crate::forms::del_log(m.get(0, 0))?.neg()));
    }
    let (mz, _) = m.wirtinger();
    Ok(FormMatrix::homogeneous(Bidegree::DZ, &m.inverse()?.mul(&mz)).neg())
}

/// `α_ij = −f_ij^{-1} ∂f_ij`, `β_i = −h_i^{-1} ∂h_i`.
pub fn atiyah_cocycle(data: &HermitianBundleData) -> Result<ConeCocycle> {
    let r = data.rank;
    let mut alpha = Cochain::zero(1, r);
    for key in data.cover.simplices(1) {
        let v = minus_dlog_matrix(&data.f[&(key[0], key[1])])?;
        alpha.insert(key, v)?;
    }
    let mut beta = Cochain::zero(0, r);
    for (i, h) in data.h.iter().enumerate() {
        beta.insert(vec![i], minus_dlog_matrix(h)?)?;
    }
    ConeCocycle::new(data.cover.clone(), data.coefficients()?, Bidegree::DZ, alpha, beta)
}

/// `ĉ₁ᴴ` of a hermitian line bundle: `((−dlog f_ij), (−∂ log h_i))`.
pub fn c1_hodge(data: &HermitianBundleData) -> Result<ConeCocycle> {
    if data.rank != 1 {
        return Err(Error::Rank { expected: 1, got: data.rank });
    }
    atiyah_cocycle(data)
}

/// Componentwise trace of an `End(E)`-valued cocycle.
pub fn trace_reduce(c: &ConeCocycle) -> Result<ConeCocycle> {
    let tr = |ch: &Cochain| Cochain::from_values(ch.degree(), 1, ch.iter().map(|(k, m)| (k.clone(), FormMatrix::scalar(m.trace()))));
    ConeCocycle::new(c.cover.clone(), Coefficients::Scalar, c.tag, tr(&c.alpha)?, tr(&c.beta)?)
}

/// Determinant line bundle `(det f_ij, det h_i)`.
pub fn det_bundle(data: &HermitianBundleData) -> Result<HermitianBundleData> {
    let f = data.f.iter().map(|(k, m)| (*k, ExprMatrix::scalar(m.det()))).collect();
    let h = data.h.iter().map(|m| ExprMatrix::scalar(m.det())).collect();
    HermitianBundleData::new(data.cover.clone(), 1, f, h)
}

/// Chern curvature `Θ_i = ∂̄(h_i^{-1} ∂h_i)`, expanded as
/// `(h^{-1} h_z̄ h^{-1} h_z − h^{-1} h_{zz̄}) dz∧dz̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    pub forms: Cochain,
    pub residual: f64,
}

pub fn curvature(data: &HermitianBundleData, tol: f64) -> Result<Curvature> {
    let mut forms = Cochain::zero(0, data.rank);
    for (i, h) in data.h.iter().enumerate() {
        let hinv = h.inverse()?;
        let (hz, hzb) = h.wirtinger();
        let (_, hzzb) = hz.wirtinger();
        let coeff = hinv.mul(&hzb).mul(&hinv).mul(&hz).sub(&hinv.mul(&hzzb));
        forms.insert(vec![i], FormMatrix::homogeneous(Bidegree::TOP, &coeff))?;
    }
    let residual = cech::global_section_residual(&data.cover, &data.coefficients()?, &forms)?;
    if residual > tol {
        return Err(Error::Gluing { residual, tol });
    }
    Ok(Curvature { forms, residual })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    /// `max |Ψ(ât) + Θ|` over all chart grids.
    pub residual: f64,
    pub psi_gluing: f64,
    pub curvature_gluing: f64,
    pub tol: f64,
}

/// Checks `Ψ(ât(Ē)) = −Θ` chart by chart.
pub fn verify_curvature_identity(data: &HermitianBundleData, tol: f64) -> Result<CurvatureReport> {
    let psi = cech::map_psi(&atiyah_cocycle(data)?, tol)?;
    let theta = curvature(data, tol)?;
    let mut residual: f64 = 0.0;
    for i in 0..data.cover.charts() {
        let s = psi.forms.get(&[i]).add(&theta.forms.get(&[i]));
        residual = residual.max(s.max_norm(data.cover.grid(&[i])?)?);
    }
    if residual > tol {
        return Err(Error::IdentityViolation { residual, tol });
    }
    Ok(CurvatureReport { residual, psi_gluing: psi.residual, curvature_gluing: theta.residual, tol })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernNumber {
    pub quadrature: f64,
    pub residue: f64,
    /// Set when the two computations differ by more than [`CHERN_AGREEMENT_TOL`].
    pub quadrature_warning: Option<String>,
}

fn is_standard_p1(cover: &Cover) -> bool {
    cover.charts() == 2 && cover.transition(0, 1) == Some(Expr::z().recip()) && cover.transition(1, 0) == Some(Expr::z().recip())
}

/// Smooth step, 0 for `t ≤ 0` and 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    let psi = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    let a = psi(t);
    let b = psi(1.0 - t);
    a / (a + b)
}

/// Partition function of chart 0 at modulus `r = |z|`.
pub fn rho0(r: f64) -> f64 {
    smooth_step((PARTITION_OUTER - r) / (PARTITION_OUTER - PARTITION_INNER))
}

/// `∫_{ℙ¹} c₁(Ē)` with `c₁ = (i/2π) tr Θ`, by partition-of-unity quadrature,
/// cross-checked against the residue of `tr α_01`.
pub fn chern_number(data: &HermitianBundleData) -> Result<ChernNumber> {
    if !is_standard_p1(&data.cover) {
        return Err(Error::Precondition("chern_number needs the two-chart cover of P1".into()));
    }
    let theta = curvature(data, f64::INFINITY)?;
    // (i/2π) c dz∧dz̄ = (c/π) dx∧dy
    let density: Vec<Expr> = (0..2).map(|i| theta.forms.get(&[i]).trace().coeff(Bidegree::TOP)).collect();
    let angles = quad::trapezoid_circle(ANGULAR_NODES);
    let inner_edges = [0.0, PARTITION_INNER, PARTITION_OUTER];
    let outer_edges = [0.0, 1.0 / PARTITION_OUTER, 1.0 / PARTITION_INNER];
    let mut total = 0.0;
    for (chart, edges) in [(0usize, inner_edges), (1, outer_edges)] {
        for (r, wr) in quad::composite_gauss(&edges, RADIAL_NODES) {
            let weight = if chart == 0 { rho0(r) } else { 1.0 - rho0(1.0 / r) };
            if weight == 0.0 {
                continue;
            }
            let mut ring = 0.0;
            for &(t, wt) in &angles {
                let v = density[chart].eval(Complex64::from_polar(r, t))?;
                ring += wt * v.re;
            }
            total += wr * r * weight * ring / PI;
        }
    }
    let residue = cech::residue_degree(&trace_reduce(&atiyah_cocycle(data)?)?)?.re;
    let quadrature_warning = ((total - residue).abs() > CHERN_AGREEMENT_TOL)
        .then(|| format!("quadrature {total} and residue {residue} differ by more than {CHERN_AGREEMENT_TOL:e}"));
    Ok(ChernNumber { quadrature: total, residue, quadrature_warning })
}

fn same_cover(a: &HermitianBundleData, b: &HermitianBundleData) -> Result<()> {
    if a.cover != b.cover {
        return Err(Error::CoverMismatch(format!("{} vs {}", a.cover.id(), b.cover.id())));
    }
    Ok(())
}

pub fn tensor(a: &HermitianBundleData, b: &HermitianBundleData) -> Result<HermitianBundleData> {
    same_cover(a, b)?;
    let f = a.f.iter().map(|(k, m)| (*k, m.kron(&b.f[k]))).collect();
    let h = a.h.iter().zip(&b.h).map(|(x, y)| x.kron(y)).collect();
    HermitianBundleData::new(a.cover.clone(), a.rank * b.rank, f, h)
}

pub fn direct_sum(a: &HermitianBundleData, b: &HermitianBundleData) -> Result<HermitianBundleData> {
    same_cover(a, b)?;
    let f = a.f.iter().map(|(k, m)| (*k, m.block_diag(&b.f[k]))).collect();
    let h = a.h.iter().zip(&b.h).map(|(x, y)| x.block_diag(y)).collect();
    HermitianBundleData::new(a.cover.clone(), a.rank + b.rank, f, h)
}

/// `(f^{-T}, (h^{-1})^T)`.
pub fn dual(a: &HermitianBundleData) -> Result<HermitianBundleData> {
    let f = a.f.iter().map(|(k, m)| Ok((*k, m.inverse()?.transpose()))).collect::<Result<_>>()?;
    let h = a.h.iter().map(|m| Ok(m.inverse()?.transpose())).collect::<Result<_>>()?;
    HermitianBundleData::new(a.cover.clone(), a.rank, f, h)
}

/// Largest defect of `T_i ∘ T_ij = T_ij ∘ T_j` on overlap grids, for a
/// self-map given chart by chart.
pub fn self_map_residual(cover: &Cover, maps: &[Expr]) -> Result<f64> {
    if maps.len() != cover.charts() {
        return Err(Error::CoverMismatch(format!("{} chart maps for {} charts", maps.len(), cover.charts())));
    }
    let mut worst: f64 = 0.0;
    for key in cover.simplices(1) {
        let (i, j) = (key[0], key[1]);
        let tji = cover.transition(j, i).expect("overlap");
        let tij = cover.transition(i, j).expect("overlap");
        for &p in cover.grid(&key)? {
            // p in chart i; its image under the map, computed via chart i and via chart j
            let via_i = maps[i].eval(p)?;
            let via_j = tij.eval(maps[j].eval(tji.eval(p)?)?)?;
            worst = worst.max((via_i - via_j).norm() / via_i.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Pull back along a self-map preserving every chart, given as `T_i` per chart.
pub fn pullback_bundle(a: &HermitianBundleData, maps: &[Expr], tol: f64) -> Result<HermitianBundleData> {
    let res = self_map_residual(&a.cover, maps)?;
    if res > tol {
        return Err(Error::CoverMismatch(format!("self-map does not preserve the charts (residual {res:e})")));
    }
    if let Some(i) = maps.iter().position(|m| !m.is_holomorphic()) {
        return Err(Error::NotHolomorphic(format!("chart map {i}")));
    }
    let f = a.f.iter().map(|(k, m)| (*k, m.subst(&maps[k.0]))).collect();
    let h = a.h.iter().zip(maps).map(|(m, t)| m.subst(t)).collect();
    HermitianBundleData::new(a.cover.clone(), a.rank, f, h)
}

/// Pull back a cocycle along chart-preserving maps.
pub fn pullback_cocycle(c: &ConeCocycle, maps: &[Expr]) -> Result<ConeCocycle> {
    let pull = |ch: &Cochain| -> Result<Cochain> {
        let mut out = Cochain::zero(ch.degree(), ch.rank());
        for (k, v) in ch.iter() {
            out.insert(k.clone(), v.pullback(&maps[k[0]]))?;
        }
        Ok(out)
    };
    ConeCocycle::new(c.cover.clone(), c.coeffs.clone(), c.tag, pull(&c.alpha)?, pull(&c.beta)?)
}

/// `ĉ₁ᴴ(L ⊗ M) = ĉ₁ᴴ(L) + ĉ₁ᴴ(M)` at representative level.
pub fn verify_tensor_law(l: &HermitianBundleData, m: &HermitianBundleData) -> Result<bool> {
    let lhs = c1_hodge(&tensor(l, m)?)?;
    lhs.exact_eq(&c1_hodge(l)?.add(&c1_hodge(m)?)?)
}

/// `ĉ₁ᴴ(L^∨) = −ĉ₁ᴴ(L)` at representative level.
pub fn verify_dual_law(l: &HermitianBundleData) -> Result<bool> {
    c1_hodge(&dual(l)?)?.exact_eq(&c1_hodge(l)?.neg())
}

/// `T^* ĉ₁ᴴ(L) = ĉ₁ᴴ(T^* L)` at representative level.
pub fn verify_pullback_law(l: &HermitianBundleData, maps: &[Expr], tol: f64) -> Result<bool> {
    let lhs = pullback_cocycle(&c1_hodge(l)?, maps)?;
    lhs.exact_eq(&c1_hodge(&pullback_bundle(l, maps, tol)?)?)
}

/// Cocycle of a connection not induced by a metric: `α_ij = −f_ij^{-1} df_ij`
/// from the bundle and `β_i = −θ_i` for user-supplied connection matrices.
pub fn connection_cocycle(data: &HermitianBundleData, theta: Vec<FormMatrix>) -> Result<ConeCocycle> {
    if theta.len() != data.cover.charts() {
        return Err(Error::InvalidBundle(format!("{} connection matrices for {} charts", theta.len(), data.cover.charts())));
    }
    let base = atiyah_cocycle(data)?;
    let mut beta = Cochain::zero(0, data.rank);
    for (i, t) in theta.into_iter().enumerate() {
        if t.dim() != data.rank {
            return Err(Error::Rank { expected: data.rank, got: t.dim() });
        }
        beta.insert(vec![i], t.neg())?;
    }
    ConeCocycle::new(base.cover, base.coeffs, base.tag, base.alpha, beta)
}

/// `1 + z z̄`.
pub fn fs_potential() -> Expr {
    Expr::one().add(&Expr::z().mul(&Expr::zbar()))
}

/// `(𝒪(n), Fubini–Study)` on the two-chart cover: `f_01 = z^{-n}`, `h_i = (1 + |z_i|²)^{-n}`.
pub fn line_bundle_fs(cover: Arc<Cover>, n: i32) -> Result<HermitianBundleData> {
    if !is_standard_p1(&cover) {
        return Err(Error::Precondition("line_bundle_fs needs the two-chart cover of P1".into()));
    }
    let h = ExprMatrix::scalar(fs_potential().powi(-n));
    let f = BTreeMap::from([((0, 1), ExprMatrix::scalar(Expr::z().powi(-n)))]);
    HermitianBundleData::new(cover, 1, f, vec![h.clone(), h])
}

/// `(𝒪(n), Fubini–Study)` on the three-chart cover `z`, `w = 1/z`, `u = 1/(z − 1)`.
pub fn line_bundle_fs_three(cover: Arc<Cover>, n: i32) -> Result<HermitianBundleData> {
    if cover.charts() != 3 || cover.transition(2, 0) != Some(Expr::z().sub(&Expr::one()).recip()) {
        return Err(Error::Precondition("line_bundle_fs_three needs the three-chart cover of P1".into()));
    }
    let z = Expr::z();
    let one = Expr::one();
    let h = fs_potential().powi(-n);
    // h_2 = (|u|² + |u + 1|²)^{-n}
    let up1 = z.add(&one);
    let h2 = z.mul(&Expr::zbar()).add(&up1.mul(&up1.conj())).powi(-n);
    let f = BTreeMap::from([
        ((0, 1), ExprMatrix::scalar(z.powi(-n))),
        ((0, 2), ExprMatrix::scalar(z.sub(&one).powi(-n))),
        ((1, 2), ExprMatrix::scalar(one.sub(&z).powi(-n))),
    ]);
    HermitianBundleData::new(cover, 1, f, vec![ExprMatrix::scalar(h.clone()), ExprMatrix::scalar(h), ExprMatrix::scalar(h2)])
}

/// Trivial line bundle with metric `‖1‖² = exp(φ)`, `φ` given chart by chart.
pub fn trivial_with_potential(cover: Arc<Cover>, phi: &[Expr]) -> Result<HermitianBundleData> {
    if phi.len() != cover.charts() {
        return Err(Error::InvalidBundle(format!("{} potentials for {} charts", phi.len(), cover.charts())));
    }
    let f = cover.simplices(1).into_iter().map(|k| ((k[0], k[1]), ExprMatrix::scalar(Expr::one()))).collect();
    let h = phi.iter().map(|p| ExprMatrix::scalar(p.exp())).collect();
    HermitianBundleData::new(cover, 1, f, h)
}

/// Change the frame of chart 0 by `g_0`: `f_0j ↦ f_0j·g_0`, `h_0 ↦ g_0ᴴ h_0 g_0`.
pub fn gauge_chart0(a: &HermitianBundleData, g0: &ExprMatrix) -> Result<HermitianBundleData> {
    if g0.dim() != a.rank {
        return Err(Error::Rank { expected: a.rank, got: g0.dim() });
    }
    if !g0.is_holomorphic() {
        return Err(Error::NotHolomorphic("gauge".into()));
    }
    let f = a
        .f
        .iter()
        .filter(|(k, _)| k.1 != 0)
        .map(|(k, m)| (*k, if k.0 == 0 { m.mul(g0) } else { m.clone() }))
        .collect();
    let mut h = a.h.clone();
    h[0] = g0.adjoint().mul(&h[0]).mul(g0);
    HermitianBundleData::new(a.cover.clone(), a.rank, f, h)
}

/// Either a builtin cover id or an inline cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverRef {
    Builtin(String),
    Inline(CoverSpec),
}

impl CoverRef {
    pub fn resolve(&self, seed: u64, points: usize) -> Result<Cover> {
        let spec = match self {
            CoverRef::Builtin(id) => Cover::builtin_spec(id).ok_or_else(|| Error::Decode(format!("unknown cover {id:?}")))?,
            CoverRef::Inline(spec) => spec.clone(),
        };
        Ok(Cover::from_spec(&spec, seed, points)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Scalar(Expr),
    Rows(Vec<Vec<Expr>>),
}

impl MatrixSpec {
    pub fn to_matrix(&self) -> Result<ExprMatrix> {
        Ok(match self {
            MatrixSpec::Scalar(e) => ExprMatrix::scalar(e.clone()),
            MatrixSpec::Rows(r) => ExprMatrix::from_rows(r.clone())?,
        })
    }

    pub fn from_matrix(m: &ExprMatrix) -> Self {
        if m.dim() == 1 {
            MatrixSpec::Scalar(m.get(0, 0).clone())
        } else {
            MatrixSpec::Rows(m.rows())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionMatrixSpec {
    /// `f_ij` with `v_j = f_ij · v_i`, in chart `i`'s coordinate.
    pub i: usize,
    pub j: usize,
    pub matrix: MatrixSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub cover: CoverRef,
    pub rank: usize,
    pub transitions: Vec<TransitionMatrixSpec>,
    /// One Gram matrix per chart, in chart order.
    pub metrics: Vec<MatrixSpec>,
}

/// Largest rank accepted from files.
pub const MAX_RANK: usize = 6;

impl BundleSpec {
    pub fn build(&self, seed: u64, points: usize) -> Result<HermitianBundleData> {
        if self.rank == 0 || self.rank > MAX_RANK {
            return Err(Error::InvalidBundle(format!("rank {} outside 1..={MAX_RANK}", self.rank)));
        }
        let cover = Arc::new(self.cover.resolve(seed, points)?);
        let mut f = BTreeMap::new();
        for t in &self.transitions {
            if f.insert((t.i, t.j), t.matrix.to_matrix()?).is_some() {
                return Err(Error::InvalidBundle(format!("duplicate transition ({},{})", t.i, t.j)));
            }
        }
        let h = self.metrics.iter().map(MatrixSpec::to_matrix).collect::<Result<Vec<_>>>()?;
        HermitianBundleData::new(cover, self.rank, f, h)
    }

    pub fn from_data(data: &HermitianBundleData) -> Self {
        let cover = match Cover::builtin_spec(data.cover.id()) {
            Some(spec) if spec == data.cover.to_spec() => CoverRef::Builtin(data.cover.id().to_string()),
            _ => CoverRef::Inline(data.cover.to_spec()),
        };
        BundleSpec {
            cover,
            rank: data.rank,
            transitions: data
                .cover
                .simplices(1)
                .into_iter()
                .map(|k| TransitionMatrixSpec { i: k[0], j: k[1], matrix: MatrixSpec::from_matrix(&data.f[&(k[0], k[1])]) })
                .collect(),
            metrics: data.h.iter().map(MatrixSpec::from_matrix).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;
    use crate::forms::cover::DEFAULT_SEED;

    fn p1() -> Arc<Cover> {
        Arc::new(Cover::p1(DEFAULT_SEED))
    }

    #[test]
    fn fubini_study_cocycle_matches_closed_form() {
        for n in -3..=3 {
            let data = line_bundle_fs(p1(), n).unwrap();
            assert!(data.validate(1e-10).unwrap().passes);
            let c = c1_hodge(&data).unwrap();
            let nn = Expr::real(n as f64);
            let a = Form::dz(nn.div(&Expr::z()));
            let b = Form::dz(nn.mul(&Expr::zbar()).div(&fs_potential()));
            assert!(c.alpha.scalar(&[0, 1]).exact_eq(&a).unwrap(), "n={n}");
            assert!(c.beta.scalar(&[0]).exact_eq(&b).unwrap(), "n={n}");
            assert!(c.check(1e-10).unwrap().passes);
        }
    }

    #[test]
    fn three_chart_line_bundle() {
        let cover = Arc::new(Cover::p1_three(DEFAULT_SEED));
        for n in [-2, 1, 3] {
            let data = line_bundle_fs_three(cover.clone(), n).unwrap();
            let rep = data.validate(1e-10).unwrap();
            assert!(rep.passes, "{rep:?}");
            let c = c1_hodge(&data).unwrap();
            assert!(c.check(1e-10).unwrap().passes);
            assert!(c.exact_check().unwrap());
        }
    }

    #[test]
    fn curvature_of_fubini_study() {
        let data = line_bundle_fs(p1(), 2).unwrap();
        let theta = curvature(&data, 1e-10).unwrap();
        let expected = Form::dz_dzbar(Expr::real(2.0).mul(&fs_potential().powi(-2)));
        assert!(theta.forms.scalar(&[0]).exact_eq(&expected).unwrap());
        let rep = verify_curvature_identity(&data, 1e-10).unwrap();
        assert!(rep.residual <= 1e-10);
    }

    #[test]
    fn chern_numbers() {
        for n in -3..=3 {
            let cn = chern_number(&line_bundle_fs(p1(), n).unwrap()).unwrap();
            assert!((cn.quadrature - n as f64).abs() < 1e-6, "n={n}: {cn:?}");
            assert!(cn.quadrature_warning.is_none());
        }
    }

    #[test]
    fn rank_error() {
        let a = line_bundle_fs(p1(), 1).unwrap();
        let s = direct_sum(&a, &a).unwrap();
        assert!(matches!(c1_hodge(&s), Err(Error::Rank { .. })));
    }

    #[test]
    fn spec_roundtrip() {
        let data = line_bundle_fs(p1(), 3).unwrap();
        let spec = BundleSpec::from_data(&data);
        let text = serde_json::to_string(&spec).unwrap();
        let back: BundleSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build(DEFAULT_SEED, 200).unwrap(), data);
    }
}
