use std::path::PathBuf;

use platoon_core::network::NetworkError;
use platoon_core::simulator::{ScenarioError, SimError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: {message}", path.display())]
    InvalidRecord { path: PathBuf, message: String },
    #[error("network: {0}")]
    Network(#[from] NetworkError),
    #[error("scenario violates an invariant: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] SimError),
    #[error("incomplete log in {}: {message}", path.display())]
    IncompleteLog { path: PathBuf, message: String },
    #[error("scenario generation failed: {0}")]
    Generate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
