use std::path::{Path, PathBuf};

use lattice_multiscale::lattice_sg::SgError;
use lattice_multiscale::multiscale::MultiscaleError;
use lattice_multiscale::nls::NlsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("singularity: {message}")]
    Singular { message: String, location: Option<(i64, i64)> },
    #[error("convergence: {0}")]
    Convergence(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Singular { .. } => 3,
            CliError::Convergence(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Internal(_) => 1,
        }
    }

    /// `(n, m)` of the failing quad step, when known.
    pub fn location(&self) -> Option<(i64, i64)> {
        match self {
            CliError::Singular { location, .. } => *location,
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Singular { .. } => "singularity",
            CliError::Convergence(_) => "convergence",
            CliError::Io { .. } => "io",
            CliError::Internal(_) => "internal",
        }
    }
}

impl From<SgError> for CliError {
    fn from(e: SgError) -> Self {
        match e {
            SgError::Singular { location, .. } | SgError::NonFinite { location } => {
                CliError::Singular { message: e.to_string(), location }
            }
            SgError::Pole { .. } => CliError::Singular { message: e.to_string(), location: None },
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<NlsError> for CliError {
    fn from(e: NlsError) -> Self {
        match e {
            NlsError::Sg(inner) => inner.into(),
            NlsError::NonFinite => CliError::Singular { message: e.to_string(), location: None },
            NlsError::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<MultiscaleError> for CliError {
    fn from(e: MultiscaleError) -> Self {
        CliError::Config(e.to_string())
    }
}
