use thiserror::Error;

/// Failures surfaced by the command line, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Domain(_) => 3,
            Self::Resource(_) => 4,
            Self::Io(_) => 1,
        }
    }
}

impl From<qwalk_core::Error> for CliError {
    fn from(e: qwalk_core::Error) -> Self {
        use qwalk_core::Error as E;
        match e {
            E::Shape(m) => Self::Usage(format!("shape mismatch: {m}")),
            E::Usage(m) => Self::Usage(m.to_string()),
            E::Domain(m) => Self::Domain(m.to_string()),
            E::Numeric(m) => Self::Domain(format!("numeric: {m}")),
            E::Resource {
                what,
                requested,
                limit,
            } => Self::Resource(format!("{what} ({requested} > {limit})")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
