//! File formats, census drivers and the `charvar` command line on top of
//! `charvar-core`.

pub mod census;
pub mod cli;
pub mod commands;
pub mod config;
pub mod formats;
pub mod report;

use thiserror::Error;

pub use config::{OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Domain(#[from] charvar_core::Error),
}

impl CliError {
    /// 2 for unreadable or malformed input, 1 for a failed mathematical invariant.
    pub fn exit_code(&self) -> i32 {
        use charvar_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Domain(e) => match e {
                E::InvalidPresentation(_)
                | E::ParseWord(_)
                | E::ImageCount { .. }
                | E::GeneratorOutOfRange { .. }
                | E::ShapeMismatch(_)
                | E::InvalidHeegaard(_)
                | E::InvalidInput(_)
                | E::DegenerateQuaternion => EXIT_INPUT,
                _ => EXIT_DOMAIN,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
