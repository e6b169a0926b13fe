//! Exact algebra over `Z` and `Q`: polynomials, integer matrices, lattice
//! reduction and factorization.

pub mod factor;
pub mod field;
pub mod galois;
pub mod linalg;
pub mod lll;
pub mod matrix;
mod modp;
pub mod parse;
pub mod poly;
pub mod relation;
pub mod roots;

pub use factor::{factor_q, Factorization};
pub use field::{nf_create, AlgebraicNumber, NumberField};
pub use galois::{galois_group, splitting_field_order};
pub use lll::lll_reduce;
pub use matrix::IntMatrix;
pub use parse::{parse_poly, poly_from_json, poly_to_json};
pub use poly::{IntPoly, RatPoly};
pub use relation::{algdep, algdep_refinable, integer_relation, integer_relation_refinable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not monic or has degree zero")]
    NotMonic,
    #[error("polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root index {index} out of range for degree {degree}")]
    RootIndexOutOfRange { index: usize, degree: usize },
    #[error("insufficient precision: {have} bits, need at least {need}")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}
