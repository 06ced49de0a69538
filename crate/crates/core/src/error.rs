use std::path::PathBuf;

/// Errors surfaced to callers. Contract violations inside the hot paths
/// (out-of-range qubit indices, mismatched frame lengths) panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        message: String,
    },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("unknown protocol {0:?}")]
    UnknownProtocol(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
