use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: qstab_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 for config and I/O problems, 3 for solver failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Io { .. } => 2,
            Self::Solver { .. } => 3,
        }
    }

    pub fn solver(context: impl Into<String>, source: qstab_core::Error) -> Self {
        Self::Solver { context: context.into(), source }
    }
}

/// Attaches a context string to core errors.
pub trait SolverContext<T> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> SolverContext<T> for qstab_core::Result<T> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| HarnessError::solver(context(), e))
    }
}
