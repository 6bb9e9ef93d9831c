use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument {arg} outside domain ({detail})")]
    Domain {
        op: &'static str,
        arg: f64,
        detail: &'static str,
    },
    #[error("{op}: unsupported order {order}")]
    UnsupportedOrder { op: &'static str, order: f64 },
    #[error("{op}: pole at {arg}")]
    Pole { op: &'static str, arg: f64 },
    #[error("{op}: integral diverges at {arg}")]
    Divergence { op: &'static str, arg: f64 },
    #[error("{op}: no convergence after {terms} terms ({detail})")]
    NoConvergence {
        op: &'static str,
        terms: usize,
        detail: String,
    },
    #[error("{op}: precondition violated: {detail}")]
    Precondition { op: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn no_convergence(op: &'static str, terms: usize, detail: impl Into<String>) -> Self {
        Error::NoConvergence {
            op,
            terms,
            detail: detail.into(),
        }
    }
}
