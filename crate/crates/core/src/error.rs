use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A parameter violates its type invariant. `name` is the field name.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// Two points that must be separated coincide (zero link distance).
    DegenerateGeometry(&'static str),
    /// An intermediate value left the domain of the formula (NaN, infinity).
    Domain(&'static str),
}

impl Error {
    pub(crate) const fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::DegenerateGeometry(what) => write!(f, "degenerate geometry: {what}"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
        }
    }
}

impl core::error::Error for Error {}
