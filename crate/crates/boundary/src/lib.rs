//! Decorated boundary graphs of the compactified mapping torus.
//!
//! Each orbit of ends on one side contributes a component `Σ_E`: the block
//! component of that orbit, plus one ideal edge per joining edge, running
//! from the block vertex the juncture flows into after `|E|` steps to the
//! joining edge's head.

mod decoration;

use std::collections::BTreeMap;

use ep_model::{block_components, Cell, EdgeKind, EndPeriodic, EpError, Sign};
use graph_core::{to_dot, DotEdgeStyle, FiniteGraph, GraphError, Id};
use serde::Serialize;

pub use decoration::{decorated_isomorphisms, find_decoration_maps, ComponentMatch, DecorationMap};

#[derive(Debug, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Model(#[from] EpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("juncture `{0}` does not flow into its block component")]
    Juncture(Id),
}

/// How the derived orientation of an ideal joining edge compares with the
/// stored one (block anchor towards head).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Stored,
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub leader: Id,
    pub graph: FiniteGraph,
    pub edge_class: BTreeMap<Id, EdgeKind>,
    /// Joining edges only.
    pub subdivision: BTreeMap<Id, u64>,
    /// Joining edges only.
    pub orientation: BTreeMap<Id, Orientation>,
}

impl BoundaryComponent {
    pub fn joining_edges(&self) -> impl Iterator<Item = &Id> + '_ {
        self.subdivision.keys()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.graph.euler_characteristic()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecoratedBoundary {
    pub sign: Sign,
    /// Sorted by leading end.
    pub components: Vec<BoundaryComponent>,
}

impl DecoratedBoundary {
    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.euler_characteristic()).sum()
    }

    pub fn component(&self, leader: &str) -> Option<&BoundaryComponent> {
        self.components.iter().find(|c| c.leader == leader)
    }

    /// One line per component, e.g. `1 component; 1 joining edge; subdivision 2`.
    pub fn summary(&self) -> String {
        let n = self.components.len();
        let joining: Vec<u64> = self
            .components
            .iter()
            .flat_map(|c| c.subdivision.values().copied())
            .collect();
        let subdivisions: Vec<String> = joining.iter().map(u64::to_string).collect();
        format!(
            "{n} component{}; {} joining edge{}; subdivision {}",
            plural(n),
            joining.len(),
            plural(joining.len()),
            subdivisions.join(",")
        )
    }

    /// Joining edges colored, arrowheads along the derived orientation and
    /// subdivision counts as labels. Components are prefixed by leader.
    pub fn to_dot(&self, name: &str) -> String {
        let mut g = FiniteGraph::new();
        let mut styles = BTreeMap::new();
        for c in &self.components {
            let rename = |x: &str| format!("{}:{x}", c.leader);
            for v in c.graph.vertices() {
                let _ = g.add_vertex(rename(v));
            }
            for (e, ends) in c.graph.edges() {
                let id = rename(e);
                let _ = g.add_edge(id.clone(), rename(&ends.tail), rename(&ends.head));
                if let Some(q) = c.subdivision.get(e) {
                    styles.insert(
                        id,
                        DotEdgeStyle {
                            label: Some(format!("{e} ({q})")),
                            color: Some("red".into()),
                            reversed: c.orientation[e] == Orientation::Reversed,
                        },
                    );
                } else {
                    styles.insert(
                        id,
                        DotEdgeStyle {
                            label: Some(e.clone()),
                            ..Default::default()
                        },
                    );
                }
            }
        }
        to_dot(&g, name, &styles)
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

/// `∂₊W` (attracting side) or `∂₋W` (repelling side).
pub fn compute_boundary(p: &EndPeriodic, sign: Sign) -> Result<DecoratedBoundary, BoundaryError> {
    let side: i64 = match sign {
        Sign::Attracting => 1,
        Sign::Repelling => -1,
    };
    let block = p.block(sign);
    let mut components = Vec::new();
    for comp in block_components(p, sign) {
        let mut graph = comp.graph.clone();
        let mut edge_class: BTreeMap<Id, EdgeKind> = graph
            .edge_ids()
            .map(|e| (e.clone(), EdgeKind::Subgraph))
            .collect();
        let mut subdivision = BTreeMap::new();
        let mut orientation = BTreeMap::new();
        for j in &comp.joining {
            let joining = &block.joining[j];
            let q = joining.period;
            let anchor = flow_target(p, side, j, q)?;
            graph.add_edge(j.clone(), anchor, joining.head.clone())?;
            edge_class.insert(j.clone(), EdgeKind::Joining);
            subdivision.insert(j.clone(), q);
            orientation.insert(
                j.clone(),
                match sign {
                    Sign::Attracting => Orientation::Reversed,
                    Sign::Repelling => Orientation::Stored,
                },
            );
        }
        components.push(BoundaryComponent {
            leader: comp.leader,
            graph,
            edge_class,
            subdivision,
            orientation,
        });
    }
    Ok(DecoratedBoundary { sign, components })
}

/// The block `±1` vertex identified with the tail of joining edge `j`.
///
/// On the attracting side the tail of `j@1` flows forward `q` steps into
/// block 1. On the repelling side some block `−1` vertex flows onto the
/// tail of `j@−1` in `q` steps; it is the tail of `j@−(q+1)`.
fn flow_target(p: &EndPeriodic, side: i64, j: &str, q: u64) -> Result<Id, BoundaryError> {
    let (tail, _) = p.edge_ends(&Cell::new(side, j))?;
    if side > 0 {
        let mut at = tail.clone();
        for _ in 0..q {
            at = p.vertex_image(&at)?;
        }
        if at.block != 1 {
            return Err(BoundaryError::Juncture(p.name(&tail)));
        }
        return Ok(at.id);
    }
    let (start, _) = p.edge_ends(&Cell::new(-(q as i64) - 1, j))?;
    let mut at = start.clone();
    for _ in 0..q {
        at = p.vertex_image(&at)?;
    }
    if start.block != -1 || at != tail {
        return Err(BoundaryError::Juncture(p.name(&tail)));
    }
    Ok(start.id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub positive: i64,
    pub negative: i64,
    pub equal: bool,
}

pub fn check_euler(p: &EndPeriodic) -> Result<EulerCheck, BoundaryError> {
    let positive = compute_boundary(p, Sign::Attracting)?.euler_characteristic();
    let negative = compute_boundary(p, Sign::Repelling)?.euler_characteristic();
    Ok(EulerCheck {
        positive,
        negative,
        equal: positive == negative,
    })
}
