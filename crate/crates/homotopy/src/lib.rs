//! End-invariant maximal trees, explicit homotopy inverses of end-periodic
//! homotopy equivalences, and boundary-collapsed representatives.

mod collapse;
mod inverse;
mod named;
mod tree;

use ep_model::{Diagnostic, EpError};
use folding::FoldError;
use graph_core::GraphError;

pub use collapse::{boundary_collapse, CollapsedRepresentative};
pub use inverse::{homotopy_inverse, HomotopyInverseResult, InverseChecks};
pub use named::Named;
pub use tree::{build_end_invariant_tree, inverse_ready, EndInvariantTree, Preimages};

#[derive(Debug, thiserror::Error)]
pub enum HomotopyError {
    #[error("the map is not a homotopy equivalence")]
    NotHomotopyEquivalence,
    #[error("block 1 is not covered cellularly even after enlarging the core")]
    NotCellular,
    #[error("forced tree edges contain a cycle through `{0}`")]
    ForcedCycle(String),
    #[error("constructed presentation is invalid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("constructed inverse fails its check: {0}")]
    Check(String),
    #[error(transparent)]
    Model(EpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fold(#[from] FoldError),
}

impl From<EpError> for HomotopyError {
    fn from(e: EpError) -> Self {
        match e {
            EpError::InvalidPresentation(d) => HomotopyError::Invalid(d),
            e => HomotopyError::Model(e),
        }
    }
}
