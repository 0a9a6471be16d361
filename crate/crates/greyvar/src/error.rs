use std::io;
use std::path::PathBuf;

/// Failure of a CLI run, grouped by process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

impl From<greyvar_core::Error> for CliError {
    fn from(e: greyvar_core::Error) -> Self {
        if e.is_usage() {
            Self::Usage(e.to_string())
        } else {
            Self::Numerical(e.to_string())
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_kind() {
        assert_eq!(CliError::usage("x").exit_code(), 2);
        assert_eq!(CliError::io("f", io::Error::other("x")).exit_code(), 4);
        let numerical = CliError::from(greyvar_core::Error::Numerical("no convergence".into()));
        assert_eq!(numerical.exit_code(), 3);
        let input = CliError::from(greyvar_core::Error::Input("bad".into()));
        assert_eq!(input.exit_code(), 2);
    }
}
