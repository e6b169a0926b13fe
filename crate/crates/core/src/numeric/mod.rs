//! Certified high-precision numerics in genus one: periods and
//! quasi-periods, `j` and `j'`, representative CM periods, and the
//! verification and falsification pipelines built on integer relations.

pub mod expr;
pub mod modular;
pub mod periods;
pub mod tau;
pub mod verify;

pub use expr::{parse_value, ValueExpr};
pub use modular::{j_and_derivative, reduce, Mobius};
pub use periods::{cm_model, cm_theta, elliptic_periods, model_periods, CurveModel, PeriodDataG1, SUPPORTED_DISCRIMINANTS};
pub use tau::{parse_tau, QuadraticNumber};
pub use verify::{
    hasc_falsify, hasc_falsify_discs, hasc_precision, verify_beta_diag_g1, verify_beta_diag_g1_perturbed, verify_siegel_g1, Bounds,
    Certificate, CertificateKind, HascVariant, NoneFound, Outcome, Payload,
};

use crate::ball::BallError;
use crate::exact::ExactError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("point is not in the upper half plane")]
    NotUpperHalfPlane,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("insufficient precision: {have} bits, need at least {need}")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("unsupported discriminant {0} (class number one orders only)")]
    UnsupportedDiscriminant(i64),
    #[error("degenerate elliptic point: {0}")]
    EllipticPointDegenerate(String),
    #[error("singular curve model")]
    SingularModel,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Exact(ExactError),
}

impl From<ExactError> for NumericError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::InsufficientPrecision { have, need } => NumericError::InsufficientPrecision { have, need },
            e => NumericError::Exact(e),
        }
    }
}
