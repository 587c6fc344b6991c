use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}: {msg}", key.as_ref().map(|k| format!(" in key '{k}'")).unwrap_or_default())]
    Config { key: Option<String>, msg: String },

    #[error("{context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: infogeom::Error,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(key: Option<&str>, msg: impl Into<String>) -> Self {
        Self::Config {
            key: key.map(str::to_string),
            msg: msg.into(),
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures, 1 for file system errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Numerical { .. } => 3,
            Self::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn context(self, what: &str) -> Result<T>;
}

impl<T> Context<T> for infogeom::Result<T> {
    fn context(self, what: &str) -> Result<T> {
        self.map_err(|source| CliError::Numerical {
            context: what.to_string(),
            source,
        })
    }
}
