use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cohomsol_core::Error),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cohomsol_core::Error as E;
        match self {
            CliError::Io { .. }
            | CliError::Toml { .. }
            | CliError::Config(_)
            | CliError::Csv(_) => EXIT_VALIDATION,
            CliError::Certificate(_) => EXIT_CERTIFICATE,
            CliError::Core(e) => match e {
                E::Structure(_)
                | E::NonDiagonalRicci { .. }
                | E::NonScalarCasimir { .. }
                | E::InvalidData(_)
                | E::InitialConditionViolated { .. } => EXIT_VALIDATION,
                E::ConsistencyViolated { .. } | E::ParityViolated { .. } => EXIT_CERTIFICATE,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}
