use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two partitions (or a partition and a declared degree) disagree in size.
    #[error("size mismatch: expected |mu| = {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    /// Two series carry different truncation degrees.
    #[error("truncation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    /// One operand uses polynomial beta, the other truncated beta (or different orders).
    #[error("beta mode mismatch: {left} vs {right}")]
    BetaModeMismatch { left: String, right: String },

    /// A request exceeds the truncation degree of the series.
    #[error("degree {requested} exceeds truncation degree {limit}")]
    DegreeTooLarge { requested: u32, limit: u32 },

    /// The leading coefficient of a series is not a unit of the coefficient ring.
    #[error("leading coefficient is not invertible: {0}")]
    NotInvertible(String),

    /// `exp` of a series whose constant term is not nilpotent.
    #[error("constant term {0} is not nilpotent; exponential does not terminate")]
    NonNilpotentConstant(String),

    /// A substitution that would silently lose truncated content.
    #[error("unsound substitution: {0}")]
    UnsoundSubstitution(String),

    /// Exponent requested outside of a Laurent window.
    #[error("exponent {exponent} outside window [{lo}, {hi}]")]
    OutsideWindow { exponent: i32, lo: i32, hi: i32 },

    /// Division by beta of a quantity that carries a beta-free term.
    #[error("not divisible by beta: {0}")]
    NotDivisibleByBeta(String),

    /// A computation bound (brute force size, maximal degree) was exceeded.
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
