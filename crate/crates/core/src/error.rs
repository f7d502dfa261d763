use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A chain was asked to step from a state outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("corrupt state: {0}")]
    CorruptState(String),
    #[error("parameter {name} = {value} outside its legal range [{min}, {max}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("expected {expected} parameter coordinates, got {got}")]
    ParameterDim { expected: usize, got: usize },
}

/// Invalid or inconsistent configuration. `key` is the dotted path of the
/// offending entry.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("quantile estimation needs at least {min} replications, got {got}")]
    TooFewReplications { min: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::TooFewReplications { .. })
    }
}
