use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{FiniteGraph, Id};
use crate::path::{EdgePath, SignedEdge};

/// A map of finite graphs sending vertices to vertices and edges to edge
/// paths with matching endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMap {
    pub domain: FiniteGraph,
    pub codomain: FiniteGraph,
    pub on_vertices: BTreeMap<Id, Id>,
    pub on_edges: BTreeMap<Id, EdgePath>,
}

impl GraphMap {
    /// Builds and validates a map.
    pub fn new(
        domain: FiniteGraph,
        codomain: FiniteGraph,
        on_vertices: BTreeMap<Id, Id>,
        on_edges: BTreeMap<Id, EdgePath>,
    ) -> Result<Self, GraphError> {
        let m = GraphMap {
            domain,
            codomain,
            on_vertices,
            on_edges,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a map from vertex images and edge images given as signed
    /// step lists; path endpoints come from the vertex images.
    pub fn from_steps(
        domain: FiniteGraph,
        codomain: FiniteGraph,
        on_vertices: BTreeMap<Id, Id>,
        edge_steps: BTreeMap<Id, Vec<SignedEdge>>,
    ) -> Result<Self, GraphError> {
        let mut on_edges = BTreeMap::new();
        for (e, ends) in domain.edges() {
            let steps = edge_steps
                .get(e)
                .ok_or_else(|| GraphError::Unmapped(e.clone()))?;
            let start = on_vertices
                .get(&ends.tail)
                .ok_or_else(|| GraphError::Unmapped(ends.tail.clone()))?;
            let path = EdgePath::from_steps(&codomain, start.clone(), steps.clone())?;
            on_edges.insert(e.clone(), path);
        }
        GraphMap::new(domain, codomain, on_vertices, on_edges)
    }

    pub fn identity(g: &FiniteGraph) -> Self {
        let on_vertices = g.vertices().map(|v| (v.clone(), v.clone())).collect();
        let on_edges = g
            .edges()
            .map(|(e, ends)| {
                (
                    e.clone(),
                    EdgePath {
                        start: ends.tail.clone(),
                        end: ends.head.clone(),
                        steps: vec![SignedEdge::forward(e.clone())],
                    },
                )
            })
            .collect();
        GraphMap {
            domain: g.clone(),
            codomain: g.clone(),
            on_vertices,
            on_edges,
        }
    }

    /// Checks totality and endpoint compatibility.
    pub fn validate(&self) -> Result<(), GraphError> {
        for v in self.domain.vertices() {
            let image = self
                .on_vertices
                .get(v)
                .ok_or_else(|| GraphError::Unmapped(v.clone()))?;
            if !self.codomain.has_vertex(image) {
                return Err(GraphError::UnknownVertex(image.clone()));
            }
        }
        for (e, ends) in self.domain.edges() {
            let path = self
                .on_edges
                .get(e)
                .ok_or_else(|| GraphError::Unmapped(e.clone()))?;
            path.validate(&self.codomain)?;
            let want_start = &self.on_vertices[&ends.tail];
            let want_end = &self.on_vertices[&ends.head];
            if &path.start != want_start || &path.end != want_end {
                return Err(GraphError::IncompatibleImage {
                    edge: e.clone(),
                    want_start: want_start.clone(),
                    want_end: want_end.clone(),
                    found_start: path.start.clone(),
                    found_end: path.end.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn vertex(&self, v: &str) -> Result<&Id, GraphError> {
        self.on_vertices
            .get(v)
            .ok_or_else(|| GraphError::Unmapped(v.to_string()))
    }

    pub fn edge(&self, e: &str) -> Result<&EdgePath, GraphError> {
        self.on_edges
            .get(e)
            .ok_or_else(|| GraphError::Unmapped(e.to_string()))
    }

    /// Image of a signed edge as a path.
    pub fn signed(&self, s: &SignedEdge) -> Result<EdgePath, GraphError> {
        let p = self.edge(&s.edge)?;
        Ok(if s.forward { p.clone() } else { p.inverse() })
    }

    /// Image of a path (not reduced).
    pub fn image_of_path(&self, p: &EdgePath) -> Result<EdgePath, GraphError> {
        let mut out = EdgePath::trivial(self.vertex(&p.start)?.clone());
        for s in &p.steps {
            let piece = self.signed(s)?;
            out = out.concat(&piece).ok_or_else(|| GraphError::BrokenPath {
                step: 0,
                expected: out.end.clone(),
                found: piece.start.clone(),
            })?;
        }
        Ok(out)
    }

    /// `next ∘ self`, with unreduced image paths.
    pub fn then(&self, next: &GraphMap) -> Result<GraphMap, GraphError> {
        let mut on_vertices = BTreeMap::new();
        for (v, w) in &self.on_vertices {
            on_vertices.insert(v.clone(), next.vertex(w)?.clone());
        }
        let mut on_edges = BTreeMap::new();
        for (e, p) in &self.on_edges {
            on_edges.insert(e.clone(), next.image_of_path(p)?);
        }
        Ok(GraphMap {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            on_vertices,
            on_edges,
        })
    }

    /// Same map with every edge image freely reduced.
    pub fn reduced(&self) -> GraphMap {
        let mut m = self.clone();
        for p in m.on_edges.values_mut() {
            *p = p.reduced();
        }
        m
    }

    /// Every edge image has length exactly one.
    pub fn is_combinatorial(&self) -> bool {
        self.on_edges.values().all(|p| p.len() == 1)
    }

    pub fn collapses(&self, e: &str) -> bool {
        self.on_edges.get(e).is_some_and(|p| p.is_empty())
    }

    /// Edges with empty image, in ascending order.
    pub fn collapsed_edges(&self) -> Vec<&Id> {
        self.on_edges
            .iter()
            .filter(|(_, p)| p.is_empty())
            .map(|(e, _)| e)
            .collect()
    }

    /// For a combinatorial map, the image of each edge as a single signed edge.
    pub fn edge_images(&self) -> Option<BTreeMap<&Id, &SignedEdge>> {
        self.on_edges
            .iter()
            .map(|(e, p)| (p.len() == 1).then(|| (e, &p.steps[0])))
            .collect()
    }

    /// Combinatorial and bijective on vertices and edges.
    pub fn is_isomorphism(&self) -> bool {
        let Some(images) = self.edge_images() else {
            return false;
        };
        let mut vs: Vec<&Id> = self.on_vertices.values().collect();
        vs.sort();
        vs.dedup();
        let mut es: Vec<&Id> = images.values().map(|s| &s.edge).collect();
        es.sort();
        es.dedup();
        vs.len() == self.domain.vertex_count()
            && vs.len() == self.codomain.vertex_count()
            && es.len() == self.domain.edge_count()
            && es.len() == self.codomain.edge_count()
    }
}
