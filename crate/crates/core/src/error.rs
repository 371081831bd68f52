use alloc::string::String;
use core::fmt;

/// Errors for operations that are genuinely undefined, as opposed to
/// operations that succeed by widening or collapsing the context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two elements from structurally different contexts met in one operation.
    ContextMismatch { left: String, right: String },
    /// The context does not carry this operation at all.
    Unsupported { ctx: String, op: &'static str },
    /// An element payload does not belong to its context (library misuse).
    InvalidElement(String),
    /// The element has no multiplicative inverse in its context.
    NotInvertible { element: String, ctx: String },
    /// A fraction's denominator is not in the inverted set's closure.
    DenominatorNotInverted { den: String, ctx: String },
    /// A dual-number difference had a nonzero real part, so it is not a
    /// multiple of dt and no quotient by dt exists.
    NotDivisibleByDt { real_part: String },
    /// The brute-force oracle was asked about a carrier above its bound.
    OracleBoundExceeded { size: usize, bound: usize },
    /// An enumeration or closure was required but the carrier is infinite
    /// (or too large to materialize).
    NotEnumerable { ctx: String },
    /// A finite operation table failed validation.
    InvalidMonoidTable(String),
    /// Ratio construction from the excluded point (0, 0).
    ZeroPair,
    /// to_fraction on a ratio lying on the vertical axis (a = 0).
    VerticalAxis,
    /// A monodromy loop does not return to its starting ratio.
    OpenLoop,
    /// Consecutive loop stages are perpendicular, so sign transport is
    /// ambiguous at the given stage index.
    AmbiguousTransport { stage: usize },
    /// Quantity addition across different unit monomials.
    DimensionMismatch { left: String, right: String },
    /// Quantity division by a zero-magnitude quantity.
    ZeroMagnitudeDivisor,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch { left, right } => {
                write!(f, "context mismatch: {left} vs {right}")
            }
            Error::Unsupported { ctx, op } => write!(f, "{op} is not supported in {ctx}"),
            Error::InvalidElement(msg) => write!(f, "invalid element: {msg}"),
            Error::NotInvertible { element, ctx } => {
                write!(f, "{element} is not invertible in {ctx}")
            }
            Error::DenominatorNotInverted { den, ctx } => {
                write!(f, "{den} is not in the inverted set of {ctx}")
            }
            Error::NotDivisibleByDt { real_part } => {
                write!(f, "not divisible by dt: real part {real_part} is nonzero")
            }
            Error::OracleBoundExceeded { size, bound } => {
                write!(f, "carrier size {size} exceeds oracle bound {bound}")
            }
            Error::NotEnumerable { ctx } => write!(f, "{ctx} has no finite enumeration"),
            Error::InvalidMonoidTable(msg) => write!(f, "invalid operation table: {msg}"),
            Error::ZeroPair => write!(f, "(0, 0) does not determine a ratio"),
            Error::VerticalAxis => {
                write!(f, "ratio lies on the vertical axis and has no fraction form")
            }
            Error::OpenLoop => write!(f, "loop does not return to its starting ratio"),
            Error::AmbiguousTransport { stage } => {
                write!(f, "consecutive ratios at stage {stage} are perpendicular")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "unit mismatch: {left} vs {right}")
            }
            Error::ZeroMagnitudeDivisor => write!(f, "division by a zero-magnitude quantity"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
