use thiserror::Error;

/// Failures of a CLI run. Each maps to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration is unreadable, malformed or does not match the
    /// scenario schema.
    #[error("config: {0}")]
    Config(String),

    /// A library call failed; `module` names the library module.
    #[error("{module}: {source}")]
    Numerical {
        module: &'static str,
        #[source]
        source: propertime::Error,
    },

    /// The invariant suite ran but some checks exceeded their bounds.
    #[error("verify: {0} check(s) outside tolerance")]
    VerifyFailed(usize),

    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

/// Attaches the library module name to a library error.
pub trait InModule<T> {
    fn in_module(self, module: &'static str) -> Result<T, CliError>;
}

impl<T> InModule<T> for propertime::Result<T> {
    fn in_module(self, module: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerical { module, source })
    }
}
