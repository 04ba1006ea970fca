use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pseudo-remainder: divisor constant in variable")]
    DivisorConstant,
    #[error("resultant needs positive degree")]
    ResultantDegree,
    #[error("discriminant needs degree ≥ 2")]
    DiscriminantDegree,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("ordering enumeration too large: {n} variables means {count} orderings (cap is {cap} variables)")]
    EnumerationTooLarge { n: usize, count: String, cap: usize },
    #[error("every candidate ordering hit the projection step time limit")]
    AllCandidatesTimedOut,
    #[error("logmods score undefined: degree sum {degree_sum} + offset {offset} is not positive")]
    LogDomain { degree_sum: u64, offset: u64 },
    #[error("problem `{0}` has no timing data")]
    NoTimingData(String),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("{0}")]
    Smt(#[from] crate::ingest::SmtError),
    #[error("{context}: line {line}: {message}")]
    Table { context: String, line: u64, message: String },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Data,
    /// Enumeration cap or time limit exhausted.
    Limit,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EnumerationTooLarge { .. } | Error::AllCandidatesTimedOut => ErrorKind::Limit,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn table(context: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Table { context: context.to_string(), line, message: message.into() }
    }
}
