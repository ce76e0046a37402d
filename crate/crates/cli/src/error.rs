use omegamodal_core::formats::FormatError;
use omegamodal_core::semantics::ValidityError;
use omegamodal_core::syntax::ParseError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_BOUNDED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_FORMAT: u8 = 65;
pub const EXIT_RESOURCE: u8 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error in `{text}` at {source}")]
    Parse {
        text: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Format(_) | CliError::Input(_) => EXIT_FORMAT,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl From<ValidityError> for CliError {
    fn from(e: ValidityError) -> Self {
        match e {
            ValidityError::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
