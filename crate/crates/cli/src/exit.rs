//! Exit codes and the JSON diagnostic printed on failure.

use std::fmt;

use boundary::BoundaryError;
use coupling::CouplingError;
use ep_model::{Diagnostic, EpError};
use folding::FoldError;
use graph_core::GraphError;
use homotopy::HomotopyError;
use serde::Serialize;

pub const VALIDATION: u8 = 2;
pub const NOT_HE: u8 = 3;
pub const INCOMPATIBLE: u8 = 4;
pub const ORACLE_MISMATCH: u8 = 5;
const OTHER: u8 = 1;

#[derive(Debug, Serialize)]
pub struct Exit {
    pub stage: &'static str,
    pub exit: u8,
    pub error: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl Exit {
    pub fn new(stage: &'static str, exit: u8, error: impl fmt::Display) -> Self {
        Exit {
            stage,
            exit,
            error: error.to_string(),
            diagnostics: Vec::new(),
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}

/// Which exit code an error maps to, and any diagnostics it carries.
pub trait Classify: fmt::Display {
    fn code(&self) -> u8 {
        OTHER
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        Vec::new()
    }
}

impl Classify for std::io::Error {}

impl Classify for serde_json::Error {
    fn code(&self) -> u8 {
        VALIDATION
    }
}

impl Classify for GraphError {
    fn code(&self) -> u8 {
        VALIDATION
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        let cell = match self {
            GraphError::DanglingEdge { edge, .. }
            | GraphError::DuplicateEdge(edge)
            | GraphError::UnknownEdge(edge)
            | GraphError::IncompatibleImage { edge, .. } => Some(edge.as_str()),
            GraphError::DuplicateVertex(v) | GraphError::UnknownVertex(v) => Some(v.as_str()),
            _ => None,
        };
        vec![Diagnostic::new("graph", cell, self.to_string())]
    }
}

impl Classify for EpError {
    fn code(&self) -> u8 {
        match self {
            EpError::InvalidPresentation(_) => VALIDATION,
            EpError::Graph(e) => e.code(),
            _ => OTHER,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            EpError::InvalidPresentation(d) => d.clone(),
            EpError::Graph(e) => e.diagnostics(),
            _ => Vec::new(),
        }
    }
}

impl Classify for FoldError {
    fn code(&self) -> u8 {
        match self {
            FoldError::CollapsedEdge(_) | FoldError::Valence1Vertex(_) => VALIDATION,
            FoldError::Model(e) => e.code(),
            _ => OTHER,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            FoldError::CollapsedEdge(e) => vec![Diagnostic::new("collapsed", Some(e), self.to_string())],
            FoldError::Valence1Vertex(vs) => vs
                .iter()
                .map(|v| Diagnostic::new("valence-1", Some(v), "vertex of valence one"))
                .collect(),
            FoldError::Model(e) => e.diagnostics(),
            _ => Vec::new(),
        }
    }
}

impl Classify for BoundaryError {
    fn code(&self) -> u8 {
        match self {
            BoundaryError::Model(e) => e.code(),
            _ => OTHER,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            BoundaryError::Model(e) => e.diagnostics(),
            _ => Vec::new(),
        }
    }
}

impl Classify for HomotopyError {
    fn code(&self) -> u8 {
        match self {
            HomotopyError::NotHomotopyEquivalence => NOT_HE,
            HomotopyError::Model(e) => e.code(),
            HomotopyError::Fold(e) => e.code(),
            _ => OTHER,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            HomotopyError::Model(e) => e.diagnostics(),
            HomotopyError::Fold(e) => e.diagnostics(),
            HomotopyError::Invalid(d) => d.clone(),
            _ => Vec::new(),
        }
    }
}

impl Classify for CouplingError {
    fn code(&self) -> u8 {
        match self {
            CouplingError::IncompatibleDecoration(_)
            | CouplingError::CutoffTooSmall { .. }
            | CouplingError::NotBoundaryCollapsed(_) => INCOMPATIBLE,
            CouplingError::NotHomotopyEquivalence => NOT_HE,
            CouplingError::Parse(_) => VALIDATION,
            CouplingError::Model(e) => e.code(),
            CouplingError::Boundary(e) => e.code(),
            CouplingError::Fold(e) => e.code(),
            CouplingError::Homotopy(e) => e.code(),
            _ => OTHER,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            CouplingError::Model(e) => e.diagnostics(),
            CouplingError::Boundary(e) => e.diagnostics(),
            CouplingError::Fold(e) => e.diagnostics(),
            CouplingError::Homotopy(e) => e.diagnostics(),
            _ => Vec::new(),
        }
    }
}

pub trait Stage<T> {
    fn stage(self, name: &'static str) -> Result<T, Exit>;
}

impl<T, E: Classify> Stage<T> for Result<T, E> {
    fn stage(self, name: &'static str) -> Result<T, Exit> {
        self.map_err(|e| Exit {
            stage: name,
            exit: e.code(),
            error: e.to_string(),
            diagnostics: e.diagnostics(),
        })
    }
}
