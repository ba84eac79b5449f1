use thiserror::Error;

/// Errors raised by the algebra, pencil and realization layers.
///
/// Normal mathematical outcomes (a pole at a point, a non-square, a vector
/// outside a subspace) are *not* errors; they are ordinary return values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands live in different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable count mismatch: expected {expected}, got {found}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    BadVariableIndex { index: usize, nvars: usize },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("field {from} does not embed into {into}")]
    NonEmbeddableField { from: String, into: String },
    #[error("operation requires characteristic {expected}, field has characteristic {found}")]
    WrongCharacteristic { expected: u64, found: u64 },
    #[error("derivative test and exponent test disagree on {0}")]
    ProcedureDisagreement(String),
    #[error("expected a homogeneous function of degree 1")]
    NotHomogeneousDegreeOne,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the A22 block of the pencil is singular")]
    SingularBlock,
    #[error("the middle pencil is singular")]
    SingularMiddle,
    #[error("the realized matrix is not invertible")]
    SingularTarget,
    #[error("the full pencil is singular")]
    SingularPencil,
    #[error("expected a scalar (1x1) target, found top block of size {0}")]
    NotScalarTarget(usize),
    #[error("target is not realizable in mode {0}")]
    NotRealizable(String),
    #[error("found only {found} of {wanted} non-singular sample points")]
    InsufficientNonSingularPoints { found: usize, wanted: usize },
    #[error("{ext} is not an extension of {base}")]
    NotAnExtension { base: String, ext: String },
    #[error("consistency failure: {0}")]
    Inconsistent(String),
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown variable `{name}`")]
    UnknownVariable {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: bad field literal: {message}")]
    FieldLiteral {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
