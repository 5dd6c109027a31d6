use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("numeric failure at {context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: losmimo_core::Error,
    },

    #[error("{0} invariant(s) failed")]
    Invariant(usize),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn numeric(context: impl Into<String>) -> impl FnOnce(losmimo_core::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numeric { context, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}
