use thiserror::Error;

/// Failures of a command, split by exit status: usage and parse problems
/// exit with 2, domain failures with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Domain(troplin::Error),

    #[error("verification failed:\n{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Domain(_) | CliError::Verification(_) => 1,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, reason: impl ToString) -> CliError {
        CliError::Parse { what: what.into(), reason: reason.to_string() }
    }
}

impl From<troplin::Error> for CliError {
    fn from(e: troplin::Error) -> CliError {
        match e {
            troplin::Error::InvalidRange { .. } | troplin::Error::InvalidColumns { .. } => CliError::Usage(e.to_string()),
            troplin::Error::ParseScalar(_) => CliError::parse("number", e),
            other => CliError::Domain(other),
        }
    }
}
