use core::fmt;

use crate::utility::UeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the allocation core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// Model parameters violate their invariants.
    InvalidParameter { what: &'static str, value: f64 },
    /// A UE was built without any application carrying positive usage.
    NoActiveApplication(UeId),
    /// An operation that needs at least one item received none.
    Empty(&'static str),
    /// A bracketed root search did not terminate.
    NoConvergence { what: &'static str, iterations: usize },
    /// A scenario or overhead case is internally inconsistent.
    InvalidScenario(&'static str),
    /// An event refers to a UE that is not in the cell.
    UnknownUe(UeId),
    /// A join event reuses the identifier of a UE already in the cell.
    DuplicateUe(UeId),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidParameter { what, value } => {
                write!(f, "invalid parameter {what}: {value}")
            }
            Error::NoActiveApplication(id) => {
                write!(f, "UE {id} has no application with positive usage")
            }
            Error::Empty(what) => write!(f, "empty {what}"),
            Error::NoConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::InvalidScenario(why) => write!(f, "invalid scenario: {why}"),
            Error::UnknownUe(id) => write!(f, "unknown UE {id}"),
            Error::DuplicateUe(id) => write!(f, "UE {id} already present"),
        }
    }
}

impl core::error::Error for Error {}
