use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// A physical or structural invariant of the model was violated.
pub const EXIT_INVARIANT: u8 = 1;
/// Reading or writing a file failed, or an input file was malformed.
pub const EXIT_IO: u8 = 2;
/// A numerical routine failed.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("malformed sweep CSV {}: {message}", path.display())]
    Csv { path: PathBuf, message: String },

    #[error("sweep point [{point}] failed: {source}")]
    SweepPoint { point: String, source: wellqfi::Error },

    #[error(transparent)]
    Model(#[from] wellqfi::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let model_code = |e: &wellqfi::Error| {
            if e.is_constraint() {
                EXIT_INVARIANT
            } else {
                EXIT_NUMERICAL
            }
        };
        match self {
            CliError::Io { .. } | CliError::Config { .. } | CliError::Csv { .. } | CliError::Invalid(_) => {
                EXIT_IO
            }
            CliError::SweepPoint { source, .. } => model_code(source),
            CliError::Model(e) => model_code(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let constraint = CliError::Model(wellqfi::Error::Constraint("x".into()));
        let numerical = CliError::Model(wellqfi::Error::Numerical("x".into()));
        let point = CliError::SweepPoint { point: "g = 1".into(), source: wellqfi::Error::Numerical("x".into()) };
        let io = CliError::Io { path: "a".into(), source: std::io::Error::other("x") };
        assert_eq!(constraint.exit_code(), EXIT_INVARIANT);
        assert_eq!(numerical.exit_code(), EXIT_NUMERICAL);
        assert_eq!(point.exit_code(), EXIT_NUMERICAL);
        assert_eq!(io.exit_code(), EXIT_IO);
        assert_eq!(CliError::Invalid("x".into()).exit_code(), EXIT_IO);
    }
}
