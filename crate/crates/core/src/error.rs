use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds the limit of {limit} (got {got})")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("degenerate state: normalization {0:e} is not positive")]
    DegenerateState(f64),

    #[error("witness undefined: {0}")]
    UndefinedWitness(String),

    #[error("order {order} exceeds the provider bound {bound}")]
    OrderLimit { order: usize, bound: usize },

    #[error("no adequate Fock cutoff below {0}")]
    CutoffInfeasible(usize),

    #[error("inconsistent moment provider: {0}")]
    InconsistentProvider(String),

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::SizeLimit { .. } | Error::OrderLimit { .. } => 2,
            Error::DegenerateState(_)
            | Error::UndefinedWitness(_)
            | Error::DegenerateDenominator(_) => 3,
            Error::Overflow(_)
            | Error::CutoffInfeasible(_)
            | Error::InconsistentProvider(_)
            | Error::Numerical(_) => 4,
            Error::Io(_) => 5,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            other => Error::Numerical(format!("csv: {other:?}")),
        }
    }
}
