//! Vertical divisors on fibered surfaces: intersection data of fibre
//! components, the kernel of the fibre quadratic form, the Hodge-index
//! proportionality test and the VA1/VA2/VA3 verdicts. Everything here is
//! exact.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rational::Rat;
use crate::{Error, Result};

/// Largest number of fibre components accepted.
pub const MAX_COMPONENTS: usize = 64;
/// Random vectors used by the negativity identity check.
pub const IDENTITY_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Multiplicities `n_i`.
    pub n: Vec<i64>,
    /// Symmetric intersection numbers `q_ij`.
    pub q: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub components: usize,
    pub symmetric: bool,
    pub off_diagonal_nonnegative: bool,
    pub fiber_orthogonal: bool,
    pub connected: bool,
}

impl FiberConfig {
    pub fn new(n: Vec<i64>, q: Vec<Vec<i64>>) -> Self {
        FiberConfig { name: None, n, q }
    }

    pub fn named(name: &str, n: Vec<i64>, q: Vec<Vec<i64>>) -> Self {
        FiberConfig { name: Some(name.to_string()), n, q }
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let r = self.n.len();
        let bad = |what: &str| Err(Error::InvariantViolation(what.to_string()));
        if r == 0 || r > MAX_COMPONENTS {
            return bad("component count");
        }
        if self.q.len() != r || self.q.iter().any(|row| row.len() != r) {
            return bad("shape");
        }
        if self.n.iter().any(|&x| x <= 0) {
            return bad("multiplicities must be positive");
        }
        for i in 0..r {
            for j in 0..i {
                if self.q[i][j] != self.q[j][i] {
                    return bad("symmetry");
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                if i != j && self.q[i][j] < 0 {
                    return bad("off-diagonal entries must be non-negative");
                }
            }
        }
        for i in 0..r {
            let s: i128 = (0..r).map(|j| self.q[i][j] as i128 * self.n[j] as i128).sum();
            if s != 0 {
                return Err(Error::InvariantViolation(format!("fiber orthogonality fails in row {i}")));
            }
        }
        let mut seen = vec![false; r];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if !seen[j] && i != j && self.q[i][j] > 0 {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("connectivity");
        }
        Ok(ValidationReport {
            components: r,
            symmetric: true,
            off_diagonal_nonnegative: true,
            fiber_orthogonal: true,
            connected: true,
        })
    }

    fn qmat(&self) -> Vec<Vec<BigRational>> {
        self.q.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
    }

    fn nvec(&self) -> Vec<BigRational> {
        self.n.iter().map(|&x| int(x)).collect()
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn mat_vec(q: &[Vec<BigRational>], m: &[BigRational]) -> Vec<BigRational> {
    q.iter().map(|row| row.iter().zip(m).map(|(a, b)| a * b).sum()).collect()
}

/// `I_n` for `n ≥ 1`, `II`, `III`, `IV` and `I0*`.
pub fn kodaira(name: &str) -> Option<FiberConfig> {
    let cfg = match name {
        "I1" | "II" => FiberConfig::named(name, vec![1], vec![vec![0]]),
        "I2" | "III" => FiberConfig::named(name, vec![1, 1], vec![vec![-2, 2], vec![2, -2]]),
        "IV" => FiberConfig::named(name, vec![1, 1, 1], vec![vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]]),
        "I0*" => {
            let mut q = vec![vec![0; 5]; 5];
            for i in 0..4 {
                q[i][i] = -2;
                q[i][4] = 1;
                q[4][i] = 1;
            }
            q[4][4] = -2;
            FiberConfig::named(name, vec![1, 1, 1, 1, 2], q)
        }
        _ => {
            let k: usize = name.strip_prefix('I')?.parse().ok()?;
            if !(3..=MAX_COMPONENTS).contains(&k) {
                return None;
            }
            let mut q = vec![vec![0; k]; k];
            for i in 0..k {
                q[i][i] = -2;
                q[i][(i + 1) % k] = 1;
                q[(i + 1) % k][i] = 1;
            }
            FiberConfig::named(name, vec![1; k], q)
        }
    };
    Some(cfg)
}

/// `I1`–`I12`, `II`, `III`, `IV`, `I0*`.
pub fn kodaira_catalog() -> Vec<FiberConfig> {
    let mut names: Vec<String> = (1..=12).map(|k| format!("I{k}")).collect();
    names.extend(["II", "III", "IV", "I0*"].map(String::from));
    names.iter().filter_map(|n| kodaira(n)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `m₀` with `m = m₀·n`.
    pub m0: Option<Rat>,
    /// `q·m`.
    pub residual: Vec<Rat>,
}

pub fn zariski_decompose(cfg: &FiberConfig, m: &[Rat]) -> Result<Decomposition> {
    cfg.validate()?;
    if m.len() != cfg.r() {
        return Err(Error::Precondition(format!("vector has {} entries for {} components", m.len(), cfg.r())));
    }
    let mv: Vec<BigRational> = m.iter().map(|x| x.0.clone()).collect();
    let qm = mat_vec(&cfg.qmat(), &mv);
    let residual: Vec<Rat> = qm.iter().cloned().map(Rat).collect();
    if qm.iter().any(|x| !x.is_zero()) {
        return Ok(Decomposition { m0: None, residual });
    }
    let n = cfg.nvec();
    let m0 = &mv[0] / &n[0];
    let m0 = mv.iter().zip(&n).all(|(a, b)| *a == &m0 * b).then_some(Rat(m0));
    Ok(Decomposition { m0, residual })
}

/// Basis of the right kernel of `a` by Gaussian elimination.
pub fn rational_kernel(a: &[Vec<BigRational>]) -> (usize, Vec<Vec<BigRational>>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let d = &f * &m[row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect();
    (pivots.len(), basis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelProof {
    pub rank: usize,
    pub kernel_dimension: usize,
    /// The kernel generator rescaled to agree with `n` in the first entry.
    pub kernel: Vec<Rat>,
    pub kernel_is_multiple_of_n: bool,
    pub identity_samples: usize,
    pub identity_holds: bool,
    pub seed: u64,
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-30i64..=30).into(), rng.random_range(1i64..=12).into())
}

/// `Σ q_ij m_i m_j` and `−Σ_{i<j} q_ij n_i n_j (m_i/n_i − m_j/n_j)²`.
pub fn negativity_sides(cfg: &FiberConfig, m: &[BigRational]) -> (BigRational, BigRational) {
    let q = cfg.qmat();
    let n = cfg.nvec();
    let r = n.len();
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    for i in 0..r {
        for j in 0..r {
            lhs += &q[i][j] * &m[i] * &m[j];
            if i < j {
                let d = &m[i] / &n[i] - &m[j] / &n[j];
                rhs -= &q[i][j] * &n[i] * &n[j] * &d * &d;
            }
        }
    }
    (lhs, rhs)
}

pub fn kernel_rank_check(cfg: &FiberConfig, seed: u64) -> Result<KernelProof> {
    cfg.validate()?;
    let (rank, basis) = rational_kernel(&cfg.qmat());
    if basis.len() != 1 {
        return Err(Error::KernelAnomaly(format!("kernel has dimension {}", basis.len())));
    }
    let n = cfg.nvec();
    let v = &basis[0];
    let s = &n[0] / &v[0];
    let kernel: Vec<BigRational> = v.iter().map(|x| x * &s).collect();
    if kernel != n {
        return Err(Error::KernelAnomaly("kernel is not spanned by the multiplicity vector".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..IDENTITY_SAMPLES {
        let m: Vec<BigRational> = (0..n.len()).map(|_| random_rational(&mut rng)).collect();
        let (lhs, rhs) = negativity_sides(cfg, &m);
        if lhs != rhs {
            return Err(Error::KernelAnomaly(format!("negativity identity fails on sample {k}")));
        }
        if lhs.is_positive() {
            return Err(Error::KernelAnomaly(format!("form is positive on sample {k}")));
        }
    }
    Ok(KernelProof {
        rank,
        kernel_dimension: 1,
        kernel: kernel.into_iter().map(Rat).collect(),
        kernel_is_multiple_of_n: true,
        identity_samples: IDENTITY_SAMPLES,
        identity_holds: true,
        seed,
    })
}

/// Pairing numbers `∫β²h^{d−2}`, `∫β·F·h^{d−2}`, `∫β·h^{d−1}`, `∫F·h^{d−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeClassData {
    pub b_hh: Rat,
    pub b_f: Rat,
    pub b_h: Rat,
    pub f_h: Rat,
}

impl HodgeClassData {
    pub fn validate(&self) -> Result<()> {
        if !self.f_h.0.is_positive() {
            return Err(Error::InvariantViolation("fiber degree must be positive".into()));
        }
        if !self.b_h.0.is_integer() {
            return Err(Error::InvariantViolation("degree of the class must be an integer".into()));
        }
        Ok(())
    }

    /// The data of `k·F` given the fiber degree.
    pub fn fiber_multiple(k: i64, f_h: i64) -> Self {
        HodgeClassData { b_hh: Rat::from(0), b_f: Rat::from(0), b_h: Rat::from(k * f_h), f_h: Rat::from(f_h) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportionality {
    pub proportional: Option<Rat>,
    /// Nonzero pairings witnessing non-proportionality.
    pub witnesses: Vec<String>,
}

pub fn hodge_proportionality(data: &HodgeClassData) -> Result<Proportionality> {
    data.validate()?;
    let mut witnesses = Vec::new();
    if !data.b_hh.0.is_zero() {
        witnesses.push(format!("b_hh = {}", data.b_hh));
    }
    if !data.b_f.0.is_zero() {
        witnesses.push(format!("b_f = {}", data.b_f));
    }
    let proportional = witnesses.is_empty().then(|| Rat(&data.b_h.0 / &data.f_h.0));
    Ok(Proportionality { proportional, witnesses })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LkFlags {
    /// Some power of `L_K` is algebraically equivalent to zero.
    pub alg_equiv_zero: bool,
    /// The attached point comes from the trace.
    pub trace_point: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDegrees {
    pub config: FiberConfig,
    /// `deg_{H,D_i} L` for each component.
    pub degs: Vec<Rat>,
    /// Multiplicities of a vertical divisor supported on this fibre, if `L` is known to be one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertical: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Va2Witness {
    /// `N` with `L^N ⊗ π*M` algebraically trivial.
    pub n: Rat,
    pub deg_m: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCheck {
    pub name: Option<String>,
    pub degrees_vanish: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertical: Option<Decomposition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaVerdict {
    pub va1: bool,
    pub va2: bool,
    pub va3: bool,
    pub proportionality: Proportionality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub va2_witness: Option<Va2Witness>,
    pub fibers: Vec<FiberCheck>,
    pub flags: LkFlags,
    /// Present when no fixed part is assumed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub va2_prime: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub va3_prime: Option<bool>,
    pub consistent: bool,
}

/// Verdicts without raising on inconsistent data.
pub fn va_report(surface: &HodgeClassData, fibers: &[FiberDegrees], flags: LkFlags, nfp: bool) -> Result<VaVerdict> {
    let proportionality = hodge_proportionality(surface)?;
    let va1 = proportionality.proportional.is_some();
    let va2_witness = proportionality.proportional.as_ref().map(|m| {
        let n = m.0.denom().clone();
        let deg_m = Rat(-(&m.0 * BigRational::from_integer(n.clone())));
        Va2Witness { n: Rat(BigRational::from_integer(n)), deg_m }
    });
    let va2 = va2_witness.is_some();
    let mut checks = Vec::with_capacity(fibers.len());
    for f in fibers {
        f.config.validate()?;
        if f.degs.len() != f.config.r() {
            return Err(Error::Precondition("one degree per fibre component is required".into()));
        }
        let vertical = f.vertical.as_ref().map(|m| zariski_decompose(&f.config, m)).transpose()?;
        checks.push(FiberCheck {
            name: f.config.name.clone(),
            degrees_vanish: f.degs.iter().all(|d| d.0.is_zero()),
            vertical,
        });
    }
    let va3 = flags.alg_equiv_zero && flags.trace_point && checks.iter().all(|c| c.degrees_vanish);
    Ok(VaVerdict {
        va1,
        va2,
        va3,
        proportionality,
        va2_witness,
        fibers: checks,
        flags,
        va2_prime: nfp.then_some(va2),
        va3_prime: nfp.then_some(va3),
        consistent: va1 == va2 && va2 == va3,
    })
}

pub fn va_verdict(surface: &HodgeClassData, fibers: &[FiberDegrees], flags: LkFlags, nfp: bool) -> Result<VaVerdict> {
    let v = va_report(surface, fibers, flags, nfp)?;
    if !v.consistent {
        return Err(Error::InconsistentInput(format!(
            "VA1 = {}, VA2 = {}, VA3 = {} should agree",
            v.va1, v.va2, v.va3
        )));
    }
    Ok(v)
}
