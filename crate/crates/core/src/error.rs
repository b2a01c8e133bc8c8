use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("mention grouping for {name:?} references unknown paper {paper_id:?}")]
    UnknownPaper { name: String, paper_id: String },

    #[error("author {name:?} of paper {paper_id:?} is not registered")]
    Unresolved { name: String, paper_id: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical contract violated: {0}")]
    Numerical(String),

    #[error("need at least 2 ambiguous nodes to cluster, found {0}")]
    TooFewAmbiguous(usize),

    #[error("requested {k} particles but the network has only {nodes} nodes")]
    TooManyParticles { k: usize, nodes: usize },

    #[error("node {0} has no outgoing weight")]
    ZeroDegree(usize),

    #[error("partitions cover different node sets")]
    MismatchedPartitions,

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_file(path: impl Into<PathBuf>, source: Error) -> Self {
        match source {
            e @ Error::Io { .. } => e,
            e => Error::InFile {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
