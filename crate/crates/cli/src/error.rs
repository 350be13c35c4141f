use std::fmt;
use std::path::Path;

use greenband::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const SINGULAR: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input file, shape mismatch or invalid argument.
    Parse(String),
    /// Singular matrix or zero pivot.
    Singular(String),
    /// `verify` measured an error above its threshold.
    VerifyFailed(String),
    /// I/O or any other failure.
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Singular(_) => exit::SINGULAR,
            CliError::VerifyFailed(_) => exit::VERIFY_FAILED,
            CliError::Other(_) => exit::OTHER,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Other(format!("{}: {e}", path.display()))
    }

    /// Wraps a library error, prefixing the file or step it came from.
    pub fn from_lib(context: &str, e: Error) -> Self {
        let msg = format!("{context}: {e}");
        match e {
            Error::Singular { .. } | Error::ZeroPivot { .. } => CliError::Singular(msg),
            Error::Parse { .. }
            | Error::Shape(_)
            | Error::InvalidBandwidth { .. }
            | Error::OutsideBand { .. }
            | Error::NonFinite { .. }
            | Error::InvalidArgument(_) => CliError::Parse(msg),
            _ => CliError::Other(msg),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Singular(m) | CliError::VerifyFailed(m) | CliError::Other(m) => {
                f.write_str(m)
            }
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;
