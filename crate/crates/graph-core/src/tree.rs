use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{FiniteGraph, Id};
use crate::map::GraphMap;
use crate::path::{EdgePath, SignedEdge};
use crate::word::{Word, WordMap};

/// A maximal tree of a connected graph, rooted for path computations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: Id,
    pub edges: BTreeSet<Id>,
    /// Non-tree edges in ascending order; position = generator index.
    pub generators: Vec<Id>,
    /// For each non-root vertex: the signed edge from its parent, and the parent.
    parent: BTreeMap<Id, Option<(SignedEdge, Id)>>,
    depth: BTreeMap<Id, usize>,
}

impl SpanningTree {
    /// Wraps a given edge set, checking that it spans and has no cycle.
    pub fn from_edges(
        g: &FiniteGraph,
        root: &str,
        edges: BTreeSet<Id>,
    ) -> Result<Self, GraphError> {
        if !g.has_vertex(root) {
            return Err(GraphError::UnknownVertex(root.to_string()));
        }
        for e in &edges {
            let ends = g.ends_of(e)?;
            if ends.is_loop() {
                return Err(GraphError::NotATree(format!("loop `{e}`")));
            }
        }
        if edges.len() + 1 != g.vertex_count() {
            return Err(GraphError::NotATree(format!(
                "{} edges for {} vertices",
                edges.len(),
                g.vertex_count()
            )));
        }
        let tree = search(g, root, |e| edges.contains(e));
        if tree.parent.len() != g.vertex_count() {
            return Err(GraphError::NotATree("does not span".into()));
        }
        Ok(tree)
    }

    pub fn contains_edge(&self, e: &str) -> bool {
        self.edges.contains(e)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, e: &str) -> Option<usize> {
        self.generators.binary_search_by(|x| x.as_str().cmp(e)).ok()
    }

    fn climb(&self, v: &str) -> Result<Vec<SignedEdge>, GraphError> {
        let mut out = Vec::new();
        let mut at = v.to_string();
        loop {
            match self.parent.get(&at) {
                Some(Some((s, up))) => {
                    out.push(s.reversed());
                    at = up.clone();
                }
                Some(None) => return Ok(out),
                None => return Err(GraphError::UnknownVertex(at)),
            }
        }
    }

    /// The reduced tree path from `u` to `v`.
    pub fn path(&self, u: &str, v: &str) -> Result<EdgePath, GraphError> {
        let mut up = self.climb(u)?;
        let mut down = self.climb(v)?;
        // Strip the common part near the root.
        while let (Some(a), Some(b)) = (up.last(), down.last()) {
            if a == b {
                up.pop();
                down.pop();
            } else {
                break;
            }
        }
        let mut steps = up;
        steps.extend(down.into_iter().rev().map(|s| s.reversed()));
        Ok(EdgePath {
            start: u.to_string(),
            end: v.to_string(),
            steps,
        })
    }

    /// Word of a path: its non-tree letters. This is the class of
    /// `⟨root, start⟩ · p · ⟨end, root⟩`.
    pub fn word_of(&self, p: &EdgePath) -> Word {
        let letters = p
            .steps
            .iter()
            .filter_map(|s| {
                self.generator_index(&s.edge).map(|i| {
                    let x = i as i32 + 1;
                    if s.forward {
                        x
                    } else {
                        -x
                    }
                })
            })
            .collect();
        Word(letters).reduced()
    }

    /// Number of tree edges between the root and `v`.
    pub fn depth(&self, v: &str) -> Option<usize> {
        self.depth.get(v).copied()
    }
}

fn search(g: &FiniteGraph, root: &str, admit: impl Fn(&Id) -> bool) -> SpanningTree {
    let mut parent: BTreeMap<Id, Option<(SignedEdge, Id)>> = BTreeMap::new();
    let mut depth: BTreeMap<Id, usize> = BTreeMap::new();
    let mut edges = BTreeSet::new();
    parent.insert(root.to_string(), None);
    depth.insert(root.to_string(), 0);
    let mut queue = VecDeque::from([root.to_string()]);
    while let Some(v) = queue.pop_front() {
        for e in g.incident_edges(&v) {
            if !admit(e) {
                continue;
            }
            let ends = g.ends(e).expect("incident edge exists");
            let (w, forward) = if ends.tail == v {
                (&ends.head, true)
            } else {
                (&ends.tail, false)
            };
            if parent.contains_key(w) {
                continue;
            }
            parent.insert(
                w.clone(),
                Some((SignedEdge::new(e.clone(), forward), v.clone())),
            );
            depth.insert(w.clone(), depth[&v] + 1);
            edges.insert(e.clone());
            queue.push_back(w.clone());
        }
    }
    let generators = g.edge_ids().filter(|e| !edges.contains(*e)).cloned().collect();
    SpanningTree {
        root: root.to_string(),
        edges,
        generators,
        parent,
        depth,
    }
}

/// Breadth-first maximal tree, visiting incident edges in ascending id order.
pub fn spanning_tree(g: &FiniteGraph, root: &str) -> Result<SpanningTree, GraphError> {
    if !g.has_vertex(root) {
        return Err(GraphError::UnknownVertex(root.to_string()));
    }
    let tree = search(g, root, |_| true);
    if tree.parent.len() != g.vertex_count() {
        return Err(GraphError::DisconnectedGraph);
    }
    Ok(tree)
}

/// One reduced loop `⟨*,∂₀e⟩ e ⟨∂₁e,*⟩` per non-tree edge, ascending.
pub fn pi1_basis(
    g: &FiniteGraph,
    t: &SpanningTree,
    base: &str,
) -> Result<Vec<(Id, EdgePath)>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::DisconnectedGraph);
    }
    let mut out = Vec::with_capacity(t.generators.len());
    for e in &t.generators {
        let ends = g.ends_of(e)?;
        let mut steps = t.path(base, &ends.tail)?.steps;
        steps.push(SignedEdge::forward(e.clone()));
        steps.extend(t.path(&ends.head, base)?.steps);
        let loop_path = EdgePath {
            start: base.to_string(),
            end: base.to_string(),
            steps,
        };
        out.push((e.clone(), loop_path.reduced()));
    }
    Ok(out)
}

/// The map on π₁ induced by `m`, in the bases of `t_dom` (at `base`) and
/// `t_cod` (at its root). When `m(base)` is not the codomain root the
/// image loops are conjugated by the tree path between them.
pub fn induced_pi1_map(
    m: &GraphMap,
    t_dom: &SpanningTree,
    t_cod: &SpanningTree,
    base: &str,
) -> Result<WordMap, GraphError> {
    if !m.domain.has_vertex(base) {
        return Err(GraphError::BasepointNotMapped(base.to_string()));
    }
    let image = m.vertex(base)?;
    if t_cod.depth(image).is_none() {
        return Err(GraphError::BasepointNotMapped(base.to_string()));
    }
    let mut images = Vec::new();
    for (_, loop_path) in pi1_basis(&m.domain, t_dom, base)? {
        let img = m.image_of_path(&loop_path)?;
        images.push(t_cod.word_of(&img));
    }
    Ok(WordMap { images })
}
