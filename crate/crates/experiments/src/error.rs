use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    /// Invalid or incomplete configuration.
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Simulation(#[from] dissgrover::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ExperimentError::Config(msg.into()))
}
