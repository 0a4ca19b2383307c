//! Finite ordered covers by one-dimensional charts, with deterministic
//! sample grids on every chart and every overlap.
//!
//! `transition(i, j)` is `T_ij` with `z_i = T_ij(z_j)`. Grid points of a
//! simplex `(i0, …, ip)` are stored in the coordinate of chart `i0`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::form::Form;
use super::FormsError;

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_POINTS: usize = 200;

/// Radial range of overlap samples, in the first chart's coordinate.
pub const OVERLAP_RADII: (f64, f64) = (0.4, 2.5);
/// Every chart coordinate of an accepted overlap point lies in this modulus range.
pub const COORD_MODULI: (f64, f64) = (0.1, 10.0);
/// Radius of the disc sampled for single-chart grids.
pub const CHART_RADIUS: f64 = 2.5;

const MAX_ATTEMPTS_PER_POINT: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub to: usize,
    pub from: usize,
    pub map: Expr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub id: String,
    pub charts: usize,
    #[serde(default)]
    pub transitions: Vec<TransitionSpec>,
    /// Transitions have real coefficients, so grids are made conjugation-stable.
    #[serde(default)]
    pub real: bool,
}

#[derive(Clone, Debug)]
pub struct Cover {
    id: String,
    charts: usize,
    real: bool,
    seed: u64,
    points: usize,
    transitions: BTreeMap<(usize, usize), Expr>,
    grids: BTreeMap<Vec<usize>, Vec<Complex64>>,
}

impl PartialEq for Cover {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id && self.charts == o.charts && self.transitions == o.transitions && self.seed == o.seed && self.points == o.points
    }
}

fn key_hash(key: &[usize]) -> u64 {
    key.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &k| (h ^ (k as u64 + 1)).wrapping_mul(0x0100_0000_01b3))
}

impl Cover {
    /// Standard two-chart cover of ℙ¹: `z` on chart 0, `w = 1/z` on chart 1.
    pub fn p1_spec() -> CoverSpec {
        let inv = Expr::z().recip();
        CoverSpec {
            id: "p1".into(),
            charts: 2,
            transitions: vec![
                TransitionSpec { to: 0, from: 1, map: inv.clone() },
                TransitionSpec { to: 1, from: 0, map: inv },
            ],
            real: true,
        }
    }

    /// Three-chart cover of ℙ¹: `z`, `w = 1/z`, `u = 1/(z − 1)`.
    pub fn p1_three_spec() -> CoverSpec {
        let z = Expr::z();
        let one = Expr::one();
        let t = |to, from, map: Expr| TransitionSpec { to, from, map };
        CoverSpec {
            id: "p1-3".into(),
            charts: 3,
            transitions: vec![
                t(0, 1, z.recip()),
                t(1, 0, z.recip()),
                t(2, 0, z.sub(&one).recip()),
                t(0, 2, z.add(&one).div(&z)),
                t(2, 1, z.div(&one.sub(&z))),
                t(1, 2, z.div(&z.add(&one))),
            ],
            real: true,
        }
    }

    pub fn builtin_spec(id: &str) -> Option<CoverSpec> {
        match id {
            "p1" => Some(Self::p1_spec()),
            "p1-3" => Some(Self::p1_three_spec()),
            _ => None,
        }
    }

    pub fn p1(seed: u64) -> Self {
        Self::from_spec(&Self::p1_spec(), seed, DEFAULT_POINTS).expect("builtin cover")
    }

    pub fn p1_three(seed: u64) -> Self {
        Self::from_spec(&Self::p1_three_spec(), seed, DEFAULT_POINTS).expect("builtin cover")
    }

    pub fn from_spec(spec: &CoverSpec, seed: u64, points: usize) -> Result<Self, FormsError> {
        if spec.charts == 0 {
            return Err(FormsError::Cover("a cover needs at least one chart".into()));
        }
        if points == 0 {
            return Err(FormsError::Cover("grids need at least one point".into()));
        }
        let mut transitions = BTreeMap::new();
        for t in &spec.transitions {
            if t.to >= spec.charts || t.from >= spec.charts || t.to == t.from {
                return Err(FormsError::Cover(format!("bad transition {} <- {}", t.to, t.from)));
            }
            if !t.map.is_holomorphic() {
                return Err(FormsError::Cover(format!("transition {} <- {} is not holomorphic", t.to, t.from)));
            }
            if transitions.insert((t.to, t.from), t.map.clone()).is_some() {
                return Err(FormsError::Cover(format!("duplicate transition {} <- {}", t.to, t.from)));
            }
        }
        for &(i, j) in transitions.keys() {
            if !transitions.contains_key(&(j, i)) {
                return Err(FormsError::Cover(format!("transition {j} <- {i} missing (inverse of {i} <- {j})")));
            }
        }
        let mut cover = Cover {
            id: spec.id.clone(),
            charts: spec.charts,
            real: spec.real,
            seed,
            points,
            transitions,
            grids: BTreeMap::new(),
        };
        let mut keys: Vec<Vec<usize>> = (0..cover.charts).map(|i| vec![i]).collect();
        keys.extend(cover.simplices(1));
        keys.extend(cover.simplices(2));
        for key in keys {
            let grid = cover.sample(&key)?;
            cover.grids.insert(key, grid);
        }
        Ok(cover)
    }

    pub fn to_spec(&self) -> CoverSpec {
        CoverSpec {
            id: self.id.clone(),
            charts: self.charts,
            transitions: self
                .transitions
                .iter()
                .map(|(&(to, from), map)| TransitionSpec { to, from, map: map.clone() })
                .collect(),
            real: self.real,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn charts(&self) -> usize {
        self.charts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn overlaps(&self, i: usize, j: usize) -> bool {
        i == j || self.transitions.contains_key(&(i, j))
    }

    /// `T_ij`, identity for `i == j`.
    pub fn transition(&self, i: usize, j: usize) -> Option<Expr> {
        if i == j {
            return Some(Expr::z());
        }
        self.transitions.get(&(i, j)).cloned()
    }

    /// Strictly increasing `(p+1)`-tuples of pairwise overlapping charts.
    pub fn simplices(&self, p: usize) -> Vec<Vec<usize>> {
        fn rec(c: &Cover, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == p + 1 {
                out.push(cur.clone());
                return;
            }
            for k in start..c.charts {
                if cur.iter().all(|&i| c.overlaps(i, k)) {
                    cur.push(k);
                    rec(c, p, k + 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self, p, 0, &mut Vec::new(), &mut out);
        out
    }

    /// Grid of a simplex (or single chart), in the coordinate of its first chart.
    pub fn grid(&self, key: &[usize]) -> Result<&[Complex64], FormsError> {
        self.grids
            .get(key)
            .map(Vec::as_slice)
            .ok_or_else(|| FormsError::Cover(format!("no grid for simplex {key:?}")))
    }

    /// Coordinate in chart `to` of the point with coordinate `p` in chart `from`.
    pub fn map_point(&self, to: usize, from: usize, p: Complex64) -> Result<Complex64, FormsError> {
        let t = self
            .transition(to, from)
            .ok_or_else(|| FormsError::Cover(format!("charts {to} and {from} do not overlap")))?;
        t.eval(p)
    }

    /// Rewrite a form given on chart `from` in the coordinate of chart `to`.
    pub fn pull(&self, f: &Form, from: usize, to: usize) -> Result<Form, FormsError> {
        if from == to {
            return Ok(f.clone());
        }
        let t = self
            .transition(from, to)
            .ok_or_else(|| FormsError::Cover(format!("charts {from} and {to} do not overlap")))?;
        Ok(f.pullback(&t))
    }

    fn accept(&self, key: &[usize], p: Complex64) -> bool {
        let (lo, hi) = COORD_MODULI;
        key.iter().skip(1).all(|&k| match self.map_point(k, key[0], p) {
            Ok(q) => (lo..=hi).contains(&q.norm()),
            Err(_) => false,
        })
    }

    fn sample(&self, key: &[usize]) -> Result<Vec<Complex64>, FormsError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ key_hash(key));
        let (r_lo, r_hi) = if key.len() == 1 { (0.0, CHART_RADIUS) } else { OVERLAP_RADII };
        let mut out = Vec::with_capacity(self.points);
        let mut attempts = 0;
        while out.len() < self.points {
            attempts += 1;
            if attempts > MAX_ATTEMPTS_PER_POINT * self.points {
                return Err(FormsError::Cover(format!("could not sample simplex {key:?}")));
            }
            let r = r_lo + (r_hi - r_lo) * rng.random::<f64>();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            let p = Complex64::from_polar(r, theta);
            if !self.accept(key, p) {
                continue;
            }
            out.push(p);
            if self.real && out.len() < self.points {
                if !self.accept(key, p.conj()) {
                    return Err(FormsError::Cover(format!("grid of {key:?} is not conjugation-stable")));
                }
                out.push(p.conj());
            }
        }
        Ok(out)
    }

    /// Largest composition defect `|T_ij(T_ji(p)) − p|` and
    /// `|T_ij(T_jk(p)) − T_ik(p)|` over all grids.
    pub fn validate(&self) -> Result<f64, FormsError> {
        let mut worst: f64 = 0.0;
        for key in self.simplices(1) {
            let (i, j) = (key[0], key[1]);
            for &p in self.grid(&key)? {
                let q = self.map_point(j, i, p)?;
                worst = worst.max((self.map_point(i, j, q)? - p).norm());
            }
        }
        for key in self.simplices(2) {
            let (i, j, k) = (key[0], key[1], key[2]);
            for &p in self.grid(&key)? {
                let zk = self.map_point(k, i, p)?;
                let zj = self.map_point(j, i, p)?;
                worst = worst.max((self.map_point(i, j, zj)? - p).norm());
                worst = worst.max((self.map_point(j, k, zk)? - zj).norm());
                worst = worst.max((self.map_point(i, k, zk)? - p).norm());
            }
        }
        Ok(worst)
    }

    /// Compare forms given on charts `ca` and `cb` on their overlap grid,
    /// after pulling both to the first chart of the overlap.
    pub fn sample_equal(&self, a: &Form, ca: usize, b: &Form, cb: usize, tol: f64) -> Result<bool, FormsError> {
        Ok(self.sample_deviation(a, ca, b, cb)? <= tol)
    }

    pub fn sample_deviation(&self, a: &Form, ca: usize, b: &Form, cb: usize) -> Result<f64, FormsError> {
        let key: Vec<usize> = if ca == cb { vec![ca] } else { vec![ca.min(cb), ca.max(cb)] };
        let target = key[0];
        let a = self.pull(a, ca, target)?;
        let b = self.pull(b, cb, target)?;
        a.max_deviation(&b, self.grid(&key)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_covers_are_consistent() {
        for cover in [Cover::p1(DEFAULT_SEED), Cover::p1_three(DEFAULT_SEED)] {
            assert!(cover.validate().unwrap() < 1e-12, "{}", cover.id());
            for key in cover.simplices(1) {
                assert_eq!(cover.grid(&key).unwrap().len(), DEFAULT_POINTS);
            }
        }
        assert_eq!(Cover::p1_three(1).simplices(2), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn grids_are_deterministic_and_conjugation_stable() {
        let a = Cover::p1(7);
        let b = Cover::p1(7);
        let c = Cover::p1(8);
        assert_eq!(a.grid(&[0, 1]).unwrap(), b.grid(&[0, 1]).unwrap());
        assert_ne!(a.grid(&[0, 1]).unwrap(), c.grid(&[0, 1]).unwrap());
        let g = a.grid(&[0, 1]).unwrap();
        for p in g {
            assert!(g.contains(&p.conj()));
        }
    }

    #[test]
    fn chain_rule_on_p1() {
        let cover = Cover::p1(DEFAULT_SEED);
        let dz_over_z = Form::dz(Expr::z().recip());
        let minus_dw_over_w = Form::dz(Expr::z().recip().neg());
        assert!(cover.sample_equal(&dz_over_z, 0, &minus_dw_over_w, 1, 1e-10).unwrap());
        let dz = Form::dz(Expr::one());
        assert!(cover.sample_equal(&dz, 0, &dz, 0, 1e-12).unwrap());
        assert!(!cover.sample_equal(&dz, 0, &Form::dz(Expr::real(2.0)), 0, 1e-10).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = Cover::p1_spec();
        spec.transitions.pop();
        assert!(Cover::from_spec(&spec, 1, 10).is_err());
        let mut spec = Cover::p1_spec();
        spec.transitions[0].map = Expr::zbar();
        assert!(Cover::from_spec(&spec, 1, 10).is_err());
    }
}
