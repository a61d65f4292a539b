use core::fmt;

/// Errors raised by the core solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A geometry input violated its constraints.
    InvalidGeometry(&'static str),
    /// A physical or numerical parameter is out of range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// Array shapes disagree with the geometry.
    ShapeMismatch(&'static str),
    /// A zero (or non-finite) pivot was met while factoring a tridiagonal system.
    SingularPivot { row: usize },
    /// The integrated fields became non-finite or exceeded the divergence bound.
    Divergence { time: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGeometry(msg) => write!(f, "invalid geometry: {msg}"),
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::SingularPivot { row } => write!(f, "singular pivot at row {row}"),
            Error::Divergence { time } => write!(f, "arithmetic divergence at t = {time}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
