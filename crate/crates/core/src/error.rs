use alloc::string::String;
use core::fmt;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A ring, group or element description violates its invariants.
    InvalidDescriptor(String),
    /// Operands live in different rings, or a payload has the wrong shape.
    ShapeMismatch(String),
    /// The element has no two-sided inverse.
    NotAUnit(String),
    /// An ideal chain fails one of the chain, nilpotency or characteristic conditions.
    InvalidChain(String),
    /// A documented precondition of the called operation does not hold.
    Precondition(String),
    /// The request is well formed but outside what the crate can represent.
    Unsupported(String),
    /// An enumeration or benchmark would exceed its configured cap.
    ResourceLimit(String),
    /// Exact integer arithmetic would overflow the fixed-width representation.
    Overflow(String),
    /// A postcondition failed. Indicates a bug or an invalid chain that slipped through.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDescriptor(m) => write!(f, "invalid descriptor: {m}"),
            Error::ShapeMismatch(m) => write!(f, "shape mismatch: {m}"),
            Error::NotAUnit(m) => write!(f, "not a unit: {m}"),
            Error::InvalidChain(m) => write!(f, "invalid chain: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::ResourceLimit(m) => write!(f, "resource limit exceeded: {m}"),
            Error::Overflow(m) => write!(f, "integer overflow: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
