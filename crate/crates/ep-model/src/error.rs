use std::fmt;

use graph_core::GraphError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One violated condition, naming the offending cell when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: &str, cell: Option<&str>, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            cell: cell.map(str::to_string),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cell {
            Some(c) => write!(f, "{} [{}]: {}", self.code, c, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpError {
    #[error("invalid presentation: {}", join(.0))]
    InvalidPresentation(Vec<Diagnostic>),
    #[error("image of `{0}` leaves the truncation; unroll deeper")]
    OutOfTruncation(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
