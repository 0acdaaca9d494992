use anick_core::Error as CoreError;
use thiserror::Error;

/// Exit codes: 0 ok, 2 parse or input error, 3 cap violation, 4 non-Morse
/// matching, 5 failed verification.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_NOT_MORSE: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {line}:{column}: {message}")]
    File { line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::BeyondCap { .. } | CoreError::CapRequired(_) => EXIT_CAP,
                CoreError::InvalidMatching(_) | CoreError::NotMorse(_) | CoreError::DepthExceeded(_) => EXIT_NOT_MORSE,
                CoreError::NotGroebner(_)
                | CoreError::NotReduced(_)
                | CoreError::Verification(_)
                | CoreError::NotSmall(_)
                | CoreError::Singular(_) => EXIT_VERIFICATION,
                _ => EXIT_PARSE,
            },
            CliError::Io { .. } | CliError::File { .. } | CliError::Usage(_) => EXIT_PARSE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
