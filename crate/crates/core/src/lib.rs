//! Čech cocycle models of arithmetic extension classes, hermitian Atiyah and
//! first Chern cocycles, period-lattice characters of complex tori, and the
//! exact linear algebra of vertical divisors on fibered surfaces.

pub mod atiyah;
pub mod cech;
pub mod fibered;
pub mod forms;
pub mod quad;
pub mod rational;
pub mod tori;

pub use forms::FormsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("cover mismatch: {0}")]
    CoverMismatch(String),
    #[error("gluing residual {residual:e} exceeds tolerance {tol:e}")]
    Gluing { residual: f64, tol: f64 },
    #[error("expected rank {expected}, got {got}")]
    Rank { expected: usize, got: usize },
    #[error("not holomorphic: {0}")]
    NotHolomorphic(String),
    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),
    #[error("identity violated: residual {residual:e} exceeds tolerance {tol:e}")]
    IdentityViolation { residual: f64, tol: f64 },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("singular lattice: {0}")]
    SingularLattice(String),
    #[error("generators {0:?} are not a basis")]
    NotABasis(Vec<usize>),
    #[error("lattice has no real structure")]
    NoRealStructure,
    #[error("singular curve: discriminant vanishes")]
    SingularCurve,
    #[error("curve is not rectangular (negative discriminant)")]
    NonRectangular,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("kernel anomaly: {0}")]
    KernelAnomaly(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("decode: {0}")]
    Decode(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
