use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("point {index} is not finite ({re}, {im})")]
    NonFinitePoint { index: usize, re: f64, im: f64 },

    #[error("degenerate configuration: points {i} and {j} coincide")]
    Degenerate { i: usize, j: usize },

    #[error("configuration has zero diameter")]
    ZeroDiameter,

    #[error("point {index} is at the origin, where the vector field is undefined")]
    FieldUndefined { index: usize },

    #[error("n must be even and at least 4, got {0}")]
    NotEvenN(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("profile is not admissible: {0}")]
    BadProfile(String),

    #[error("Taylor expansion invalid: |rho * t| = {value} >= 1 for pair ({i}, {j})")]
    ExpansionDiverges { i: usize, j: usize, value: f64 },

    #[error("bisection bracket failure on [{lo}, {hi}]: {reason}")]
    Bracket { lo: f64, hi: f64, reason: String },

    #[error("no feasible push: predicate already fails at {0}")]
    NoFeasiblePush(f64),

    #[error("sweep aborted at n = {n} after {} records: {source}", partial.len())]
    SweepAborted {
        n: usize,
        partial: Vec<crate::experiments::SweepRecord>,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics (degenerate input, solver brackets,
    /// divergent expansions) as opposed to malformed input or I/O.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Degenerate { .. }
            | Error::ZeroDiameter
            | Error::FieldUndefined { .. }
            | Error::ExpansionDiverges { .. }
            | Error::Bracket { .. }
            | Error::NoFeasiblePush(_)
            | Error::SweepAborted { .. } => true,
            Error::TooFewPoints(_)
            | Error::NonFinitePoint { .. }
            | Error::NotEvenN(_)
            | Error::InvalidArgument(_)
            | Error::BadProfile(_)
            | Error::Parse { .. }
            | Error::Io(_)
            | Error::Csv(_) => false,
        }
    }
}
