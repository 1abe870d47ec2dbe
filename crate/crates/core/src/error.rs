use thiserror::Error;

/// Errors surfaced by the algebra engine.
///
/// Contract violations that cannot arise from well-formed user input
/// (mismatched coefficient orders, exponent vectors of the wrong length)
/// panic instead; everything reachable from the CLI is an `Error`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero element has no leading term")]
    ZeroElement,

    #[error("valuation of a truncated element cannot be certified")]
    ValUncertain,

    #[error("element is not integral: valuation is negative")]
    NotIntegral,

    #[error("not cone-regular: {0}")]
    NotConeRegular(String),

    #[error("not an element of 1 + m: {0}")]
    NotOnePlusM(String),
}

pub type Result<T> = std::result::Result<T, Error>;
