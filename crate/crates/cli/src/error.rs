use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

fn classify(err: &homonym::Error) -> fn(String) -> CliError {
    use homonym::Error as E;
    match err {
        E::InvalidParameter(_) => CliError::Usage,
        E::Numerical(_) | E::ZeroDegree(_) => CliError::Numerical,
        E::InFile { source, .. } => classify(source),
        _ => CliError::Data,
    }
}

impl From<homonym::Error> for CliError {
    fn from(err: homonym::Error) -> Self {
        classify(&err)(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
