use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown scenario `{0}` (try `wva-lab list`)")]
    UnknownScenario(String),
    #[error("config: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(#[from] wva_core::Error),
    #[error("table schema: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl LabError {
    /// 2 for anything the caller can fix by changing the invocation, 3 for
    /// failures inside the computation.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::UnknownScenario(_) | LabError::Config(_) | LabError::Io { .. } => 2,
            LabError::Numeric(wva_core::Error::Domain { .. }) => 2,
            LabError::Numeric(_) | LabError::Schema(_) => 3,
        }
    }
}
