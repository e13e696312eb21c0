//! Combinatorial substrate: finite graphs with oriented edges, edge paths,
//! graph maps, spanning trees, free group words and labeled isomorphism search.

mod dot;
mod error;
mod graph;
mod iso;
mod map;
mod path;
mod subdivide;
mod tree;
mod word;

pub use dot::{to_dot, DotEdgeStyle};
pub use error::GraphError;
pub use graph::{EdgeEnds, FiniteGraph, Id};
pub use iso::{graph_isomorphisms, EdgeLabel, Isomorphism, Labels, DEFAULT_NODE_BUDGET};
pub use map::GraphMap;
pub use path::{reduce_path, EdgePath, SignedEdge};
pub use subdivide::{subdivide_for, Subdivision};
pub use tree::{induced_pi1_map, pi1_basis, spanning_tree, SpanningTree};
pub use word::{Word, WordMap};
