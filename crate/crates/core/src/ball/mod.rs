//! Midpoint-radius ball arithmetic over arbitrary-precision dyadics.

mod complex;
pub mod elementary;
mod mag;
mod real;

pub use complex::BallComplex;
pub use elementary::{agm, exp, exp_real, pi, two_pi_i};
pub use mag::Mag;
pub use real::BallReal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BallError {
    #[error("division by a ball containing zero")]
    DivisionByZero,
    #[error("square root of a ball that is not certainly non-negative")]
    NegativeSqrt,
    #[error("argument touches the branch cut")]
    BranchCut,
    #[error("argument is not certainly positive")]
    NotPositive,
}
