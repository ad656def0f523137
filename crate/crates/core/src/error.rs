use std::path::PathBuf;

use crate::lattice::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    /// A computation would exceed a configured size limit.
    #[error("resource limit: {what} needs {requested}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("inner radius {m} out of range for box of radius {n}")]
    RadiusOutOfRange { m: u32, n: u32 },

    #[error("cannot splice: path ends at {left} but next path starts at {right}")]
    EndpointMismatch { left: String, right: String },

    #[error("index {index} out of range for path of length {len}")]
    Range { index: usize, len: usize },

    #[error("subgraph is not a spanning tree")]
    NotATree,

    /// A walk ran past its step budget before its stopping rule fired.
    #[error("step budget of {0} exhausted")]
    StepBudget(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot fit power law: {0}")]
    Fit(String),

    /// Experiment spec failed validation. `path` names the offending field.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// Spec asks for more than its budgets allow.
    #[error("budget error: {0}")]
    Budget(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through [`Error::Context`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Schema { .. } | Error::Json(_) => 2,
            Error::Budget(_) | Error::ResourceLimit { .. } => 3,
            Error::StepBudget(_) => 4,
            _ => 1,
        }
    }
}
