//! Finite presentations of end-periodic maps of graphs with finitely many
//! ends: validation, block decomposition, truncations and core enlargement.

mod core;
mod error;
pub mod fixtures;
mod model;
pub mod random;
mod schema;
mod truncation;
mod validate;

pub use crate::core::{block_components, block_end_labels, enlarge, is_proper, proper_core, rebase, BlockComponent};
pub use error::{Diagnostic, EpError};
pub use model::{Block, Cell, CellStep, EndPeriodic, Joining, Orbit};
pub use schema::{BlockEdge, BlockJson, BlockVertex, EdgeKind, EndRecord, MapJson, Naming, Presentation, Sign};
pub use truncation::{evaluate_map, unroll, CellGraph, Image, Truncation};
pub use validate::{validate, ValidationReport};
