use thiserror::Error;

/// Errors raised by the algebraic layers and the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot invert `{0}`: not a unit monomial")]
    NonMonomialInverse(String),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("valuation of `{0}` depends on an unevaluated parameter")]
    ParamValuation(String),

    #[error("base change matrix is singular at embedding {embedding}: determinant `{det}`")]
    SingularBaseChange { embedding: usize, det: String },

    #[error("Frobenius entry `{0}` is not a parameter-free monomial")]
    NonMonomialFrobenius(String),

    #[error("Frobenius matrix is not diagonal at embedding {0}")]
    NotDiagonal(usize),

    #[error("Frobenius entry `{0}` is not of the form (root of unity) * p^n with integer n")]
    NonNormalized(String),

    #[error("degree f = {0} is even; the closed formula needs f odd")]
    EvenDegree(usize),

    #[error("enumeration needs p^(2f) = {size}, above the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },

    #[error("truncation order {order} cannot decide divisibility (need more than {needed})")]
    TruncationTooShallow { order: usize, needed: usize },

    #[error("no Gamma-action matrices were supplied")]
    MissingGammaData,

    #[error("unsupported family shape: {0}")]
    UnsupportedShape(String),

    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
