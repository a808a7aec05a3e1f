use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table or graph whose shape is inconsistent (wrong dimensions,
    /// out-of-range indices). Distinct from an axiom failure.
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },

    #[error("unknown element `{name}` in algebra {algebra}")]
    UnknownElement { algebra: String, name: String },

    #[error("dangling {kind} id {id}")]
    Dangling { kind: &'static str, id: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} exceeds the limit of {limit}")]
    GuardExceeded { what: &'static str, limit: u64 },

    #[error("algebra mismatch: expected {expected}, found {found}")]
    AlgebraMismatch { expected: String, found: String },

    #[error("algebra {0} is not commutative")]
    NotCommutative(String),

    #[error("foot mismatch: {0}")]
    FootMismatch(String),

    #[error("leg {0} is not injective")]
    NotMonic(&'static str),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
}

impl Error {
    pub(crate) fn malformed(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Malformed { what, detail: detail.into() }
    }

    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid { what, detail: detail.into() }
    }
}
