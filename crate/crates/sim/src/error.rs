use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Error)]
pub enum SimError {
    /// The scenario document could not be parsed.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    /// A scenario value violates an invariant. `field` is the dotted key.
    #[error("config error: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error(transparent)]
    Numeric(#[from] irs_hetnet::Error),
    #[error("step {step} (x = {x_value}): {source}")]
    Step {
        step: usize,
        x_value: f64,
        #[source]
        source: irs_hetnet::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SimError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        SimError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code: 1 config, 2 numeric/domain, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Parse { .. } | SimError::Config { .. } => 1,
            SimError::Numeric(_) | SimError::Step { .. } => 2,
            SimError::Io { .. } => 3,
        }
    }
}

/// Attaches the config section to an invariant violation from the core.
pub(crate) fn in_section(section: &str, err: irs_hetnet::Error) -> SimError {
    match err {
        irs_hetnet::Error::InvalidParameter { name, reason } => {
            SimError::config(format!("{section}.{name}"), reason)
        }
        other => SimError::config(section, other.to_string()),
    }
}
