use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{FiniteGraph, Id};
use crate::path::SignedEdge;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Edge label. An `oriented` edge must be sent forward onto its image.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub class: String,
    pub oriented: bool,
}

impl EdgeLabel {
    pub fn new(class: impl Into<String>, oriented: bool) -> Self {
        EdgeLabel {
            class: class.into(),
            oriented,
        }
    }
}

/// Vertex and edge labels; missing entries read as the empty label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub vertex: BTreeMap<Id, String>,
    pub edge: BTreeMap<Id, EdgeLabel>,
}

impl Labels {
    fn vertex_label(&self, v: &str) -> &str {
        self.vertex.get(v).map(String::as_str).unwrap_or("")
    }

    fn edge_label(&self, e: &str) -> EdgeLabel {
        self.edge.get(e).cloned().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub vertices: BTreeMap<Id, Id>,
    pub edges: BTreeMap<Id, SignedEdge>,
}

struct Side<'a> {
    verts: Vec<&'a Id>,
    /// (id, tail index, head index, label) in ascending id order.
    edges: Vec<(&'a Id, usize, usize, EdgeLabel)>,
    valence: Vec<usize>,
    vlabel: Vec<&'a str>,
    /// Edges between an ordered vertex pair: (edge id, label, tail is first).
    between: HashMap<(usize, usize), Vec<(&'a Id, EdgeLabel, bool)>>,
}

impl<'a> Side<'a> {
    fn new(g: &'a FiniteGraph, labels: &'a Labels) -> Self {
        let verts: Vec<&Id> = g.vertices().collect();
        let index: HashMap<&Id, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let valence = verts.iter().map(|v| g.valence(v)).collect();
        let vlabel = verts.iter().map(|v| labels.vertex_label(v)).collect();
        let mut between: HashMap<(usize, usize), Vec<(&Id, EdgeLabel, bool)>> = HashMap::new();
        let mut edges = Vec::new();
        for (id, ends) in g.edges() {
            let a = index[&ends.tail];
            let b = index[&ends.head];
            let label = labels.edge_label(id);
            edges.push((id, a, b, label.clone()));
            between
                .entry((a, b))
                .or_default()
                .push((id, label.clone(), true));
            if a != b {
                between.entry((b, a)).or_default().push((id, label, false));
            }
        }
        Side {
            verts,
            edges,
            valence,
            vlabel,
            between,
        }
    }

    /// Multiset of (class, oriented, direction) between `a` and `b`, relative to `a`.
    fn signature(&self, a: usize, b: usize) -> Vec<(EdgeLabel, Option<bool>)> {
        let mut sig: Vec<(EdgeLabel, Option<bool>)> = self
            .between
            .get(&(a, b))
            .into_iter()
            .flatten()
            .map(|(_, label, dir)| {
                let d = (label.oriented && a != b).then_some(*dir);
                (label.clone(), d)
            })
            .collect();
        sig.sort();
        sig
    }
}

struct Search<'a> {
    g: Side<'a>,
    h: Side<'a>,
    limit: usize,
    budget: usize,
    nodes: usize,
    out: Vec<Isomorphism>,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(GraphError::Overflow(self.budget));
        }
        Ok(())
    }

    fn assign_vertices(&mut self, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<(), GraphError> {
        if self.out.len() >= self.limit {
            return Ok(());
        }
        self.tick()?;
        let i = phi.len();
        if i == self.g.verts.len() {
            return self.assign_edges(phi);
        }
        for c in 0..self.h.verts.len() {
            if used[c]
                || self.g.vlabel[i] != self.h.vlabel[c]
                || self.g.valence[i] != self.h.valence[c]
            {
                continue;
            }
            phi.push(c);
            let consistent =
                (0..=i).all(|j| self.g.signature(i, j) == self.h.signature(c, phi[j]));
            if consistent {
                used[c] = true;
                self.assign_vertices(phi, used)?;
                used[c] = false;
            }
            phi.pop();
            if self.out.len() >= self.limit {
                break;
            }
        }
        Ok(())
    }

    fn assign_edges(&mut self, phi: &[usize]) -> Result<(), GraphError> {
        // For each g edge, the h edges (with direction) it may be sent to.
        let mut slots: Vec<(&'a Id, Vec<SignedEdge>)> = Vec::new();
        for (id, a, b, label) in &self.g.edges {
            let (ta, tb) = (phi[*a], phi[*b]);
            let mut cands = Vec::new();
            for (hid, ha, hb, hl) in &self.h.edges {
                if hl != label {
                    continue;
                }
                if (*ha, *hb) == (ta, tb) {
                    cands.push(SignedEdge::forward((*hid).clone()));
                }
                if (*ha, *hb) == (tb, ta) && !label.oriented {
                    cands.push(SignedEdge::backward((*hid).clone()));
                }
            }
            slots.push((*id, cands));
        }
        let mut chosen: Vec<SignedEdge> = Vec::new();
        self.edge_step(phi, &slots, &mut chosen)
    }

    fn edge_step(
        &mut self,
        phi: &[usize],
        slots: &[(&'a Id, Vec<SignedEdge>)],
        chosen: &mut Vec<SignedEdge>,
    ) -> Result<(), GraphError> {
        if self.out.len() >= self.limit {
            return Ok(());
        }
        self.tick()?;
        let k = chosen.len();
        if k == slots.len() {
            let vertices = phi
                .iter()
                .enumerate()
                .map(|(i, &c)| (self.g.verts[i].clone(), self.h.verts[c].clone()))
                .collect();
            let edges = slots
                .iter()
                .zip(chosen.iter())
                .map(|(slot, s)| (slot.0.clone(), s.clone()))
                .collect();
            self.out.push(Isomorphism { vertices, edges });
            return Ok(());
        }
        for cand in &slots[k].1 {
            if chosen.iter().any(|c| c.edge == cand.edge) {
                continue;
            }
            chosen.push(cand.clone());
            self.edge_step(phi, slots, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Label-preserving isomorphisms `g → h`, at most `limit`, in a
/// deterministic order (ascending ids, forward before reversed).
/// Unoriented loops may be sent to either orientation of their image;
/// oriented edges must be sent forward.
pub fn graph_isomorphisms(
    g: &FiniteGraph,
    g_labels: &Labels,
    h: &FiniteGraph,
    h_labels: &Labels,
    limit: usize,
    budget: usize,
) -> Result<Vec<Isomorphism>, GraphError> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() || limit == 0 {
        return Ok(Vec::new());
    }
    let mut search = Search {
        g: Side::new(g, g_labels),
        h: Side::new(h, h_labels),
        limit,
        budget,
        nodes: 0,
        out: Vec::new(),
    };
    let mut phi = Vec::new();
    let mut used = vec![false; h.vertex_count()];
    search.assign_vertices(&mut phi, &mut used)?;
    Ok(search.out)
}
