use baba::graph::GraphError;
use baba::pipeline::PipelineError;
use baba::solver::SolverError;
use baba::verification::VerificationError;
use baba::FrameworkError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;
pub const EXIT_CLIENT: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, missing or malformed inputs.
    #[error("{0}")]
    Usage(String),
    #[error("solver timed out; partial result written to {0}")]
    Timeout(String),
    /// Extractor or classifier failure.
    #[error("{0}")]
    Client(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Timeout(_) => EXIT_TIMEOUT,
            CliError::Client(_) => EXIT_CLIENT,
            CliError::Other(_) => 1,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Extractor { .. } => CliError::Client(e.to_string()),
            PipelineError::Graph(_)
            | PipelineError::EmptyDocument
            | PipelineError::InvalidConfig { .. }
            | PipelineError::Io { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(format!("invalid graph file: {e}"))
    }
}

impl From<VerificationError> for CliError {
    fn from(e: VerificationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidConfig(_) | SolverError::Framework(_) => {
                CliError::Usage(e.to_string())
            }
            SolverError::UnsupportedSemantics(_) | SolverError::Backend(_) => {
                CliError::Other(e.into())
            }
        }
    }
}

impl From<FrameworkError> for CliError {
    fn from(e: FrameworkError) -> Self {
        CliError::usage(format!("graph is not a valid framework: {e}"))
    }
}
