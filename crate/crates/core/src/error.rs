use std::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the estimators, samplers and loaders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("observation #{index} is {value}; all observations must be strictly positive")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("observation #{index} is not a finite number ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("need at least 3 observations, got {n}")]
    TooFewObservations { n: usize },

    #[error("invalid trimming r={r}, k={k} for n={n}: need 1 <= r < k < n")]
    InvalidTrim { r: usize, k: usize, n: usize },

    #[error("invalid threshold index k={k} for n={n}: need 1 <= k < n")]
    InvalidThreshold { k: usize, n: usize },

    #[error("no positive tail index solves the estimating equation (H={h}, R={ratio})")]
    NoSolution { h: f64, ratio: f64 },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("ratio of order statistics equals 1; the truncation odds are undefined")]
    DegenerateRatio,

    #[error("log-excess moments are degenerate (M1={m1}, M2={m2})")]
    DegenerateMoments { m1: f64, m2: f64 },

    #[error("moment estimate of the extreme value index is exactly zero")]
    ZeroXi,

    #[error("tail probability must lie in (0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("odds value {0} is outside the domain of this estimator")]
    InvalidOdds(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{x} lies outside the support of the distribution")]
    OutOfSupport { x: f64 },

    #[error("distribution has no truncation point")]
    NotTruncated,

    #[error("no admissible candidate threshold for k* selection")]
    NoCandidate,

    #[error("line {line}: {kind}")]
    Input { line: u64, kind: InputError },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What went wrong on a specific line of a data file.
#[derive(Debug, Clone, PartialEq)]
pub enum InputError {
    Unparseable(String),
    NonPositive(f64),
    NonFinite(f64),
    MissingColumn(String),
    AmbiguousColumns(usize),
    Csv(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Unparseable(s) => write!(f, "cannot parse {s:?} as a number"),
            InputError::NonPositive(v) => write!(f, "value {v} is not strictly positive"),
            InputError::NonFinite(v) => write!(f, "value {v} is not finite"),
            InputError::MissingColumn(c) => write!(f, "header has no column named {c:?}"),
            InputError::AmbiguousColumns(n) => {
                write!(f, "found {n} columns; name the one to use")
            }
            InputError::Csv(msg) => write!(f, "malformed CSV: {msg}"),
        }
    }
}

impl Error {
    /// True for outcomes that a threshold sweep records and moves past.
    pub fn is_per_threshold(&self) -> bool {
        matches!(
            self,
            Error::NoSolution { .. }
                | Error::NonConvergence { .. }
                | Error::DegenerateRatio
                | Error::DegenerateMoments { .. }
                | Error::ZeroXi
                | Error::InvalidOdds(_)
        )
    }
}
