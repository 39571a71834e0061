use thiserror::Error;

use crate::model::Well;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside {domain}")]
    Domain {
        quantity: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("the {0} well does not exist at k = {k}, s = {s}", k = .1, s = .2)]
    MissingWell(Well, f64, f64),

    #[error("energy {energy} is at or above the barrier top {top}")]
    AboveBarrier { energy: f64, top: f64 },

    #[error("energy {energy} lies below the {well} well bottom {bottom}")]
    BelowWell { energy: f64, bottom: f64, well: Well },

    #[error("no quantum phase transition: the right well never becomes the ground state")]
    NoTransition,

    #[error("no finite critical temperature at s = {s} (s_QPT = {s_qpt})")]
    BelowTransition { s: f64, s_qpt: f64 },

    #[error("the metastable well is the ground state at s = {0}")]
    NotMetastable(f64),

    #[error("{0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T: crate::Real>(quantity: &'static str, value: T, domain: &'static str) -> Error {
    Error::Domain {
        quantity,
        value: value.to_f64_lossy(),
        domain,
    }
}
