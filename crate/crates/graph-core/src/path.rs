use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{FiniteGraph, Id};

/// An edge with a chosen direction. Written `e` or `-e` (reversed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignedEdge {
    pub edge: Id,
    pub forward: bool,
}

impl SignedEdge {
    pub fn new(edge: impl Into<Id>, forward: bool) -> Self {
        SignedEdge {
            edge: edge.into(),
            forward,
        }
    }

    pub fn forward(edge: impl Into<Id>) -> Self {
        Self::new(edge, true)
    }

    pub fn backward(edge: impl Into<Id>) -> Self {
        Self::new(edge, false)
    }

    pub fn reversed(&self) -> Self {
        SignedEdge {
            edge: self.edge.clone(),
            forward: !self.forward,
        }
    }

    pub fn is_inverse_of(&self, other: &SignedEdge) -> bool {
        self.edge == other.edge && self.forward != other.forward
    }
}

impl fmt::Display for SignedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forward {
            write!(f, "{}", self.edge)
        } else {
            write!(f, "-{}", self.edge)
        }
    }
}

impl FromStr for SignedEdge {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let (forward, name) = match s.strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, s),
        };
        if name.is_empty() || name.starts_with('-') {
            return Err(GraphError::BadSignedEdge(s.to_string()));
        }
        Ok(SignedEdge::new(name, forward))
    }
}

impl TryFrom<String> for SignedEdge {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, GraphError> {
        s.parse()
    }
}

impl From<SignedEdge> for String {
    fn from(s: SignedEdge) -> String {
        s.to_string()
    }
}

/// An edge path with explicit endpoints, so that the empty path still
/// knows where it sits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePath {
    pub start: Id,
    pub end: Id,
    pub steps: Vec<SignedEdge>,
}

impl EdgePath {
    pub fn trivial(v: impl Into<Id>) -> Self {
        let v = v.into();
        EdgePath {
            start: v.clone(),
            end: v,
            steps: Vec::new(),
        }
    }

    pub fn single(g: &FiniteGraph, s: SignedEdge) -> Result<Self, GraphError> {
        let start = g.signed_tail(&s)?.clone();
        let end = g.signed_head(&s)?.clone();
        Ok(EdgePath {
            start,
            end,
            steps: vec![s],
        })
    }

    /// Checks contiguity of `steps` in `g` starting at `start`.
    pub fn from_steps(
        g: &FiniteGraph,
        start: impl Into<Id>,
        steps: Vec<SignedEdge>,
    ) -> Result<Self, GraphError> {
        let start = start.into();
        if !g.has_vertex(&start) {
            return Err(GraphError::UnknownVertex(start));
        }
        let mut at = start.clone();
        for (i, s) in steps.iter().enumerate() {
            let tail = g.signed_tail(s)?;
            if *tail != at {
                return Err(GraphError::BrokenPath {
                    step: i,
                    expected: at,
                    found: tail.clone(),
                });
            }
            at = g.signed_head(s)?.clone();
        }
        Ok(EdgePath {
            start,
            end: at,
            steps,
        })
    }

    /// Path from a nonempty step list; the start is the first step's tail.
    pub fn from_nonempty(g: &FiniteGraph, steps: Vec<SignedEdge>) -> Result<Self, GraphError> {
        let start = match steps.first() {
            Some(s) => g.signed_tail(s)?.clone(),
            None => return Err(GraphError::EmptyPath),
        };
        Self::from_steps(g, start, steps)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.start == self.end
    }

    pub fn inverse(&self) -> Self {
        EdgePath {
            start: self.end.clone(),
            end: self.start.clone(),
            steps: self.steps.iter().rev().map(SignedEdge::reversed).collect(),
        }
    }

    /// Concatenation; `None` when the endpoints do not meet.
    pub fn concat(&self, other: &EdgePath) -> Option<EdgePath> {
        if self.end != other.start {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Some(EdgePath {
            start: self.start.clone(),
            end: other.end.clone(),
            steps,
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !w[0].is_inverse_of(&w[1]))
    }

    pub fn reduced(&self) -> EdgePath {
        reduce_path(self)
    }

    /// Verifies contiguity and endpoints against `g`.
    pub fn validate(&self, g: &FiniteGraph) -> Result<(), GraphError> {
        let checked = EdgePath::from_steps(g, self.start.clone(), self.steps.clone())?;
        if checked.end != self.end {
            return Err(GraphError::BrokenPath {
                step: self.steps.len(),
                expected: self.end.clone(),
                found: checked.end,
            });
        }
        Ok(())
    }

    /// Vertices visited, including both endpoints.
    pub fn vertices(&self, g: &FiniteGraph) -> Result<Vec<Id>, GraphError> {
        let mut out = vec![self.start.clone()];
        for s in &self.steps {
            out.push(g.signed_head(s)?.clone());
        }
        Ok(out)
    }

    pub fn step_strings(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "<{}>", self.start);
        }
        let parts: Vec<String> = self.step_strings();
        write!(f, "{}", parts.join(" "))
    }
}

/// Free reduction by a single stack pass, which already reaches the fixpoint.
pub fn reduce_path(p: &EdgePath) -> EdgePath {
    let mut stack: Vec<SignedEdge> = Vec::with_capacity(p.steps.len());
    for s in &p.steps {
        if stack.last().is_some_and(|top| top.is_inverse_of(s)) {
            stack.pop();
        } else {
            stack.push(s.clone());
        }
    }
    EdgePath {
        start: p.start.clone(),
        end: p.end.clone(),
        steps: stack,
    }
}
