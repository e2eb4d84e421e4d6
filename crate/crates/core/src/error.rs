use thiserror::Error;

/// Errors raised by the pricers and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the model or routine.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// The requested size exceeds what the chosen evaluation path supports.
    #[error("capacity exceeded: n = {n} is above the limit {limit} for {what}")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    /// The fixed-strike lattice starts exactly on an integer level.
    #[error(
        "starting level j0 = {j0} is an integer; perturb n to move the strike off the lattice"
    )]
    IntegerBarrier { j0: f64 },

    /// A fit or extrapolation received inputs it cannot work with.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
