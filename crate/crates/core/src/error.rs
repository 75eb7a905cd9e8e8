use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operator or domain parameters violate their ordering constraints.
    InvalidConfig(String),
    /// A smooth step was requested with `lo >= hi`.
    InvalidStep { lo: f64, hi: f64 },
    /// A jet oracle was queried outside the closed boundary piece it covers.
    OutsideDomain { point: alloc::vec::Vec<f64> },
    /// Differentiation order above what the object supports.
    OrderTooHigh { requested: usize, max: usize },
    DimensionMismatch { expected: usize, got: usize },
    /// `p > ell` in an index split request.
    InvalidSplit { ell: usize, p: usize },
    /// A function expected to be constant on classes is not.
    ClassConstancy { discrepancy: f64 },
    /// Two cone charts with no common points.
    EmptyOverlap,
    /// A finite-difference stencil would leave the domain of the function.
    StencilOutsideDomain,
    UnknownSuite(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidStep { lo, hi } => {
                write!(f, "smooth step needs lo < hi, got lo = {lo}, hi = {hi}")
            }
            Error::OutsideDomain { point } => write!(f, "point {point:?} is outside the domain"),
            Error::OrderTooHigh { requested, max } => {
                write!(f, "differentiation order {requested} exceeds the supported order {max}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidSplit { ell, p } => {
                write!(f, "cannot split {ell} slots into {p} time slots")
            }
            Error::ClassConstancy { discrepancy } => write!(
                f,
                "function is not constant on the given classes (discrepancy {discrepancy:e})"
            ),
            Error::EmptyOverlap => write!(f, "the cone charts do not overlap"),
            Error::StencilOutsideDomain => {
                write!(f, "finite-difference stencil leaves the domain")
            }
            Error::UnknownSuite(name) => write!(f, "unknown verification suite `{name}`"),
        }
    }
}

impl core::error::Error for Error {}
