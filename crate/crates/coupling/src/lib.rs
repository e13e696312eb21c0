//! Coupling two end-periodic maps along their compactified boundaries: the
//! principal subgraph `Θ` with its first return map `f`, an independent
//! semiflow check of `f`, and the free-by-cyclic group `π₁` of the mapping
//! torus of `f`.

mod injectivity;
mod oracle;
mod present;
mod theta;

use boundary::BoundaryError;
use ep_model::EpError;
use folding::FoldError;
use graph_core::GraphError;
use homotopy::HomotopyError;

pub use injectivity::{boundary_injectivity_check, lift_loop, BoundaryInjectivityReport, LoopReport};
pub use oracle::{first_return_oracle, EdgeAgreement, OracleReport, DEFAULT_DEPTH};
pub use present::{
    certify_f, present_free_by_cyclic, Certificates, FreeByCyclicPresentation,
    HomotopyEquivalenceCertificate, DEFAULT_K_MAX,
};
pub use theta::{canonical_h, couple, CouplingConfig, Gluing, Origin, Side, ThetaComplex};

#[derive(Debug, thiserror::Error)]
pub enum CouplingError {
    #[error("decorations do not match: {0}")]
    IncompatibleDecoration(String),
    #[error("cutoff {cutoff} is below the minimum {minimum}")]
    CutoffTooSmall { cutoff: u32, minimum: u32 },
    #[error("boundary component `{0}` has more than one vertex")]
    NotBoundaryCollapsed(String),
    #[error("the glued truncation is too shallow: {0}")]
    TruncationTooShallow(String),
    #[error("the first return map is not a homotopy equivalence")]
    NotHomotopyEquivalence,
    #[error("no boundary component led by `{0}`")]
    InvalidComponent(String),
    #[error("malformed coupling file: {0}")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] EpError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}
