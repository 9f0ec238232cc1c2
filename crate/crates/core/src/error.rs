use thiserror::Error;

use crate::rational::{fmt_rational, ExactRational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent {} is not a multiple of 1/{denominator}", fmt_rational(.exponent))]
    OffGrid {
        exponent: ExactRational,
        denominator: u64,
    },

    #[error("grading denominator must be positive")]
    ZeroDenominator,

    #[error("series has no invertible leading term")]
    UndefinedInverse,

    #[error("series exponents are not integer steps from the leading exponent {}", fmt_rational(.leading))]
    NonIntegerStep { leading: ExactRational },

    #[error("requested order {} exceeds available order {}", fmt_rational(.requested), fmt_rational(.available))]
    InsufficientOrder {
        requested: ExactRational,
        available: ExactRational,
    },

    #[error("substitution ratio must be positive, got {}", fmt_rational(.0))]
    NonPositiveRatio(ExactRational),

    #[error("invalid character label: {0}")]
    InvalidLabel(String),

    #[error("no twisted trace is defined for module {0}")]
    NoTwistedTrace(String),

    #[error("z-window too small to certify any order: {0}")]
    InsufficientWindow(String),

    #[error("z-windows differ: [{0}, {1}] vs [{2}, {3}]")]
    WindowMismatch(i64, i64, i64, i64),

    #[error("invalid product factor: {0}")]
    InvalidFactor(String),

    #[error("invalid theta sum: {0}")]
    InvalidTheta(String),

    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),

    #[error("need at least {needed} coefficient rows, only {available} available")]
    InsufficientRows { needed: usize, available: usize },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
