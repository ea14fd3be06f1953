use thiserror::Error;

use crate::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed ring value `{value}` for partial field {field}")]
    MalformedValue { field: String, value: String },

    #[error("unknown partial field `{0}`")]
    UnknownField(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix too large: |X|+|Y| = {size} exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("ground set has {0} elements; at most 16 are supported")]
    GroundTooLarge(usize),

    #[error("duplicate or overlapping labels: {0}")]
    LabelClash(String),

    #[error("label {0} is not an element of the ground set")]
    UnknownLabel(Label),

    #[error("basis family is empty")]
    NoBases,

    #[error("bases have unequal sizes ({0} and {1})")]
    UnequalBases(usize, usize),

    #[error("basis exchange fails: B1={b1:?}, B2={b2:?}, e={e}")]
    ExchangeViolation { b1: Vec<Label>, b2: Vec<Label>, e: Label },

    #[error("matrix is not a P-matrix; failing set {0:?}")]
    NotPMatrix(Vec<Label>),

    #[error("pivot entry A[{x},{y}] is zero")]
    ZeroPivot { x: Label, y: Label },

    #[error("pivot entry A[{x},{y}] is not a unit of the ring")]
    NonUnitPivot { x: Label, y: Label },

    #[error("label sets differ between matrices")]
    LabelMismatch,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{0} is not a basis")]
    NotABasis(String),

    #[error("set {0:?} does not incriminate the pair")]
    NotIncriminating(Vec<Label>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search budget of {0} exceeded")]
    Budget(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
