use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::path::SignedEdge;

/// Vertex and edge identifiers are opaque strings ordered lexicographically.
pub type Id = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnds {
    pub tail: Id,
    pub head: Id,
}

impl EdgeEnds {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite graph with oriented edges. Loops and multi-edges are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct FiniteGraph {
    vertices: BTreeSet<Id>,
    edges: BTreeMap<Id, EdgeEnds>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<Id>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: Id,
    tail: Id,
    head: Id,
}

impl TryFrom<GraphJson> for FiniteGraph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, GraphError> {
        let mut g = FiniteGraph::new();
        for v in raw.vertices {
            g.add_vertex(v)?;
        }
        for e in raw.edges {
            g.add_edge(e.id, e.tail, e.head)?;
        }
        Ok(g)
    }
}

impl From<FiniteGraph> for GraphJson {
    fn from(g: FiniteGraph) -> Self {
        GraphJson {
            vertices: g.vertices.into_iter().collect(),
            edges: g
                .edges
                .into_iter()
                .map(|(id, ends)| EdgeJson {
                    id,
                    tail: ends.tail,
                    head: ends.head,
                })
                .collect(),
        }
    }
}

impl FiniteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex and `(id, tail, head)` lists.
    pub fn from_parts<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<Id>,
        E: IntoIterator<Item = (Id, Id, Id)>,
    {
        let mut g = FiniteGraph::new();
        for v in vertices {
            g.add_vertex(v.into())?;
        }
        for (id, tail, head) in edges {
            g.add_edge(id, tail, head)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: impl Into<Id>) -> Result<(), GraphError> {
        let v = v.into();
        if !self.vertices.insert(v.clone()) {
            return Err(GraphError::DuplicateVertex(v));
        }
        Ok(())
    }

    /// Inserts a vertex if absent; returns whether it was new.
    pub fn ensure_vertex(&mut self, v: impl Into<Id>) -> bool {
        self.vertices.insert(v.into())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<Id>,
        tail: impl Into<Id>,
        head: impl Into<Id>,
    ) -> Result<(), GraphError> {
        let (id, tail, head) = (id.into(), tail.into(), head.into());
        for v in [&tail, &head] {
            if !self.vertices.contains(v) {
                return Err(GraphError::DanglingEdge {
                    edge: id,
                    vertex: v.clone(),
                });
            }
        }
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.insert(id, EdgeEnds { tail, head });
        Ok(())
    }

    pub fn remove_edge(&mut self, id: &str) -> Option<EdgeEnds> {
        self.edges.remove(id)
    }

    /// Removes a vertex together with every incident edge.
    pub fn remove_vertex(&mut self, v: &str) -> bool {
        self.edges.retain(|_, ends| ends.tail != v && ends.head != v);
        self.vertices.remove(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Id> + '_ {
        self.vertices.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<Id> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Id, &EdgeEnds)> + '_ {
        self.edges.iter()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &Id> + '_ {
        self.edges.keys()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, e: &str) -> bool {
        self.edges.contains_key(e)
    }

    pub fn ends(&self, e: &str) -> Option<&EdgeEnds> {
        self.edges.get(e)
    }

    pub fn ends_of(&self, e: &str) -> Result<&EdgeEnds, GraphError> {
        self.edges
            .get(e)
            .ok_or_else(|| GraphError::UnknownEdge(e.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// |V| − |E|
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn valence(&self, v: &str) -> usize {
        self.edges
            .values()
            .map(|ends| (ends.tail == v) as usize + (ends.head == v) as usize)
            .sum()
    }

    /// Oriented edges leaving `v`, sorted by edge id then direction.
    /// A loop contributes both of its orientations.
    pub fn star(&self, v: &str) -> Vec<SignedEdge> {
        let mut out = Vec::new();
        for (id, ends) in &self.edges {
            if ends.tail == v {
                out.push(SignedEdge::forward(id.clone()));
            }
            if ends.head == v {
                out.push(SignedEdge::backward(id.clone()));
            }
        }
        out
    }

    /// Edge ids incident to `v` in ascending order, each once.
    pub fn incident_edges(&self, v: &str) -> Vec<&Id> {
        self.edges
            .iter()
            .filter(|(_, ends)| ends.tail == v || ends.head == v)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn signed_tail(&self, s: &SignedEdge) -> Result<&Id, GraphError> {
        let ends = self.ends_of(&s.edge)?;
        Ok(if s.forward { &ends.tail } else { &ends.head })
    }

    pub fn signed_head(&self, s: &SignedEdge) -> Result<&Id, GraphError> {
        let ends = self.ends_of(&s.edge)?;
        Ok(if s.forward { &ends.head } else { &ends.tail })
    }

    /// Connected components as vertex sets, ordered by least vertex.
    pub fn components(&self) -> Vec<BTreeSet<Id>> {
        let mut adjacency: BTreeMap<&Id, Vec<&Id>> = BTreeMap::new();
        for ends in self.edges.values() {
            adjacency.entry(&ends.tail).or_default().push(&ends.head);
            adjacency.entry(&ends.head).or_default().push(&ends.tail);
        }
        let mut seen: BTreeSet<&Id> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for w in adjacency.get(v).into_iter().flatten() {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// The subgraph spanned by a vertex set and the edges with both ends in it.
    pub fn induced(&self, vertices: &BTreeSet<Id>) -> FiniteGraph {
        let mut g = FiniteGraph::new();
        for v in vertices.iter().filter(|v| self.vertices.contains(*v)) {
            g.vertices.insert(v.clone());
        }
        for (id, ends) in &self.edges {
            if g.vertices.contains(&ends.tail) && g.vertices.contains(&ends.head) {
                g.edges.insert(id.clone(), ends.clone());
            }
        }
        g
    }

    /// The subgraph made of the given edges and their endpoints.
    pub fn edge_subgraph<'a>(&self, edges: impl IntoIterator<Item = &'a Id>) -> FiniteGraph {
        let mut g = FiniteGraph::new();
        for id in edges {
            if let Some(ends) = self.edges.get(id) {
                g.vertices.insert(ends.tail.clone());
                g.vertices.insert(ends.head.clone());
                g.edges.insert(id.clone(), ends.clone());
            }
        }
        g
    }

    /// Whether `other` is a subgraph of `self` with identical incidences.
    pub fn contains_graph(&self, other: &FiniteGraph) -> bool {
        other.vertices.is_subset(&self.vertices)
            && other
                .edges
                .iter()
                .all(|(id, ends)| self.edges.get(id) == Some(ends))
    }

    /// Disjoint union; fails on clashing ids unless incidences agree.
    pub fn merge(&mut self, other: &FiniteGraph) -> Result<(), GraphError> {
        for v in &other.vertices {
            self.vertices.insert(v.clone());
        }
        for (id, ends) in &other.edges {
            match self.edges.get(id) {
                Some(existing) if existing != ends => {
                    return Err(GraphError::DuplicateEdge(id.clone()))
                }
                Some(_) => {}
                None => {
                    self.edges.insert(id.clone(), ends.clone());
                }
            }
        }
        Ok(())
    }

    /// Whether the graph has no cycles.
    pub fn is_forest(&self) -> bool {
        self.vertex_count() as i64 - self.edge_count() as i64 == self.components().len() as i64
    }
}
