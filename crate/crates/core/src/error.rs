use core::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// Gamma evaluated at a non-positive integer.
    Pole { at: f64 },
    /// A Bessel order `μ_i ≤ −1/2`.
    InvalidOrder { index: usize, value: f64 },
    /// Dimensions of two objects disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// A function is not sampled on the grid the operation expects.
    GridMismatch,
    /// An axis is malformed (non-positive, unsorted, or mismatched weights).
    InvalidAxis(&'static str),
    /// Too few nodes on an axis for a finite-difference stencil.
    TooFewNodes {
        axis: usize,
        nodes: usize,
        needed: usize,
    },
    /// A derivative order beyond what the stencils support.
    UnsupportedOrder { order: usize, max: usize },
    /// Problem size beyond what the dense path is allowed to allocate.
    TooLarge { nodes: usize, max: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Pole { at } => write!(f, "gamma has a pole at {at}"),
            Error::InvalidOrder { index, value } => {
                write!(f, "order mu[{index}] = {value} must exceed -1/2")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::GridMismatch => write!(f, "function is not sampled on the expected grid"),
            Error::InvalidAxis(why) => write!(f, "invalid axis: {why}"),
            Error::TooFewNodes {
                axis,
                nodes,
                needed,
            } => {
                write!(f, "axis {axis} has {nodes} nodes, at least {needed} needed")
            }
            Error::UnsupportedOrder { order, max } => {
                write!(
                    f,
                    "derivative order {order} exceeds supported maximum {max}"
                )
            }
            Error::TooLarge { nodes, max } => {
                write!(f, "{nodes} nodes per axis exceeds the dense limit of {max}")
            }
        }
    }
}

impl core::error::Error for Error {}
