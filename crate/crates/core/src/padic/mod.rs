//! Local p-adic integrals and canonical measures of SNC resolution models,
//! with exact values in `Q(q^(1/r))`.

mod measure;
mod model;
mod value;

use thiserror::Error;

pub use measure::{
    fiber_factor, local_integral, measure_compare, snc_measure, snc_measure_with, MeasureComparison, MeasurePiece,
    MeasureReport, MeasureResult, MeasureVerdict, SncMeasure,
};
pub use model::{DivisorSpec, ModelDivisor, ModelSpec, ResolutionModel};
pub use value::{binomial_is_irreducible, minimal_binomial, ExtendedRational, ExtendedRationalSpec, MAX_DOUBLINGS};

use crate::birational::BirationalError;
use crate::varieties::VarietyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("division by zero in Q(q^(1/r))")]
    DivisionByZero,
    #[error("values live in different fields")]
    FieldMismatch,
    #[error("index {r_new} is not a multiple of {r}")]
    NotMultiple { r: u32, r_new: u32 },
    #[error("sign not resolved after {} precision doublings", MAX_DOUBLINGS)]
    SignUnresolved,
    #[error("invalid value: {0}")]
    BadValue(String),
    #[error("discrepancy {e}/{r} <= -1: not log-terminal")]
    NotLogTerminal { e: i64, r: u32 },
    #[error("invalid model: {0}")]
    BadModel(String),
    #[error("models differ beyond their discrepancies: {0}")]
    ModelMismatch(String),
    #[error("discrepancy vectors are incomparable")]
    Incomparable,
    #[error(transparent)]
    Birational(#[from] BirationalError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}
