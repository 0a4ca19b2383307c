//! Chart-wise symbolic functions and differential forms on covers by
//! one-dimensional charts.

pub mod cover;
pub mod expr;
pub mod form;
pub mod matrix;
pub mod normal;
pub mod sexpr;

use num_complex::Complex64;

pub use cover::{Cover, CoverSpec, TransitionSpec};
pub use expr::{Expr, Node};
pub use form::{del_log, dlog, Bidegree, Form};
pub use matrix::{ExprMatrix, FormMatrix};
pub use sexpr::parse;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormsError {
    #[error("domain error at {point}: {what}")]
    Domain { point: Complex64, what: String },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("normal form: {0}")]
    NormalForm(String),
    #[error("bidegree: {0}")]
    Bidegree(String),
    #[error("cover: {0}")]
    Cover(String),
    #[error("matrix shape: {0}")]
    Shape(String),
}
