use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration failed to parse or validate; `path` locates the field.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Lab(#[from] signlab::error::LabError),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            // Parameter errors from the library are configuration problems too.
            CliError::Lab(signlab::error::LabError::Parameter { .. }) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ACCEPTANCE: i32 = 3;

pub type Result<T, E = CliError> = std::result::Result<T, E>;
