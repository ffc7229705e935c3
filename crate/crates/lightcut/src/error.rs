use thiserror::Error;

/// Errors produced by graph parsing, orientation, simulation and optimization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("rejection-sampling retry cap exceeded ({cap} attempts)")]
    RetryCapExceeded { cap: usize },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is not biconnected: {0}")]
    NotBiconnected(String),

    #[error("qubit count {n} exceeds the statevector cap {cap}")]
    QubitCapExceeded { n: usize, cap: usize },

    #[error("Pauli term count exceeded the cap {cap}")]
    TermCapExceeded { cap: usize },

    #[error("problem size {n} exceeds the cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

impl Error {
    /// True for failures caused by configured resource limits rather than
    /// invalid input (the CLI maps these to a distinct exit code).
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::RetryCapExceeded { .. }
                | Error::QubitCapExceeded { .. }
                | Error::TermCapExceeded { .. }
                | Error::SizeCapExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
