use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported ambient dimension {0} (supported: 2..=5)")]
    UnsupportedDimension(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("hyperplane has an all-zero normal vector")]
    ZeroNormal,

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("duplicate hyperplane at index {0}")]
    DuplicateHyperplane(usize),

    #[error("index {index} out of range for {what} (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle cap exceeded: {needed} subsets requested, cap is {cap}")]
    OracleCapExceeded { needed: u128, cap: u128 },

    #[error("generic map retry cap of {0} exhausted")]
    RetryCapExceeded(u32),

    #[error("unknown bound name `{0}`")]
    UnknownBound(String),

    #[error("bound `{bound}` requires argument `{arg}`")]
    MissingArgument {
        bound: &'static str,
        arg: &'static str,
    },

    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for the errors that signal a configured work cap was hit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::OracleCapExceeded { .. } | Error::RetryCapExceeded(_)
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
