use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration. The message is anchored at
    /// `path:line:column`.
    #[error("{0}")]
    Config(String),
    #[error("numeric failure in {context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: xdlab_core::Error,
    },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    pub(crate) fn numeric(context: impl Into<String>) -> impl FnOnce(xdlab_core::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numeric { context, source }
    }

    pub fn io(what: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
        CliError::Io(format!("{what}: {e}"))
    }
}
