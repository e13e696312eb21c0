use std::collections::BTreeMap;

use crate::error::GraphError;
use crate::graph::{FiniteGraph, Id};
use crate::map::GraphMap;
use crate::path::{EdgePath, SignedEdge};

/// A domain subdivided so that a map becomes combinatorial.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: FiniteGraph,
    /// Combinatorial map from the subdivided domain.
    pub map: GraphMap,
    /// Original edge → its pieces in order from tail to head.
    pub pieces: BTreeMap<Id, Vec<Id>>,
}

impl Subdivision {
    /// The original image of `e`, spelled by the images of its pieces.
    pub fn spelled(&self, e: &str) -> Option<Vec<SignedEdge>> {
        let pieces = self.pieces.get(e)?;
        let mut out = Vec::new();
        for p in pieces {
            out.extend(self.map.on_edges.get(p)?.steps.iter().cloned());
        }
        Some(out)
    }
}

/// Splits every edge whose image has length `k > 1` into `k` pieces named
/// `e/1..e/k`, with interior vertices `e/1..e/(k-1)`.
pub fn subdivide_for(m: &GraphMap) -> Result<Subdivision, GraphError> {
    if let Some(e) = m.collapsed_edges().first() {
        return Err(GraphError::CollapsedEdge((*e).clone()));
    }
    let mut graph = FiniteGraph::new();
    for v in m.domain.vertices() {
        graph.add_vertex(v.clone())?;
    }
    let mut on_vertices = m.on_vertices.clone();
    let mut on_edges = BTreeMap::new();
    let mut pieces = BTreeMap::new();
    for (e, ends) in m.domain.edges() {
        let image = &m.on_edges[e];
        let k = image.len();
        if k == 1 {
            graph.add_edge(e.clone(), ends.tail.clone(), ends.head.clone())?;
            on_edges.insert(e.clone(), image.clone());
            pieces.insert(e.clone(), vec![e.clone()]);
            continue;
        }
        let mut at = ends.tail.clone();
        let mut image_at = image.start.clone();
        let mut names = Vec::with_capacity(k);
        for (i, step) in image.steps.iter().enumerate() {
            let name = format!("{e}/{}", i + 1);
            let next = if i + 1 == k {
                ends.head.clone()
            } else {
                graph.add_vertex(name.clone())?;
                name.clone()
            };
            graph.add_edge(name.clone(), at.clone(), next.clone())?;
            let image_next = m.codomain.signed_head(step)?.clone();
            if i + 1 < k {
                on_vertices.insert(next.clone(), image_next.clone());
            }
            on_edges.insert(
                name.clone(),
                EdgePath {
                    start: image_at.clone(),
                    end: image_next.clone(),
                    steps: vec![step.clone()],
                },
            );
            names.push(name);
            at = next;
            image_at = image_next;
        }
        pieces.insert(e.clone(), names);
    }
    let map = GraphMap::new(graph.clone(), m.codomain.clone(), on_vertices, on_edges)?;
    Ok(Subdivision { graph, map, pieces })
}
