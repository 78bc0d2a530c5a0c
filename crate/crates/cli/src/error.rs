use lfda::LfdaError;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable files, schema problems. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// The numerical routines failed on valid input. Exit code 3.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Wraps a library error with a short context prefix.
    pub fn from_lfda(context: &str, err: LfdaError) -> Self {
        let msg = format!("{context}: {err}");
        if err.is_numerical() {
            CliError::Numerical(msg)
        } else {
            CliError::Input(msg)
        }
    }
}
