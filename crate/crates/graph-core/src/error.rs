use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` has endpoint `{vertex}` which is not a vertex")]
    DanglingEdge { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("path is not contiguous at step {step}: expected tail `{expected}`, found `{found}`")]
    BrokenPath {
        step: usize,
        expected: String,
        found: String,
    },
    #[error("image of edge `{edge}` runs {found_start}->{found_end}, expected {want_start}->{want_end}")]
    IncompatibleImage {
        edge: String,
        want_start: String,
        want_end: String,
        found_start: String,
        found_end: String,
    },
    #[error("map does not assign an image to `{0}`")]
    Unmapped(String),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("edge set is not a spanning tree: {0}")]
    NotATree(String),
    #[error("basepoint `{0}` cannot be joined to the codomain basepoint")]
    BasepointNotMapped(String),
    #[error("edge `{0}` is collapsed by the map")]
    CollapsedEdge(String),
    #[error("isomorphism search exceeded {0} backtracking nodes")]
    Overflow(usize),
    #[error("an empty path needs an explicit basepoint")]
    EmptyPath,
    #[error("malformed signed edge `{0}`")]
    BadSignedEdge(String),
}
