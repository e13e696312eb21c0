use std::collections::BTreeMap;

use ep_model::{EdgeKind, Sign};
use graph_core::{
    graph_isomorphisms, EdgeLabel, FiniteGraph, GraphError, Id, Isomorphism, Labels, SignedEdge,
    DEFAULT_NODE_BUDGET,
};
use serde::{Deserialize, Serialize};

use crate::{BoundaryComponent, DecoratedBoundary, Orientation};

/// One pair of matched components and the isomorphism between them, in
/// stored orientations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMatch {
    pub positive: Id,
    pub negative: Id,
    pub iso: Isomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecorationMap {
    pub matches: Vec<ComponentMatch>,
}

impl DecorationMap {
    /// Re-checks every decoration layer edge by edge.
    pub fn respects(&self, a: &DecoratedBoundary, b: &DecoratedBoundary) -> bool {
        if self.matches.len() != a.components.len() || self.matches.len() != b.components.len() {
            return false;
        }
        self.matches.iter().all(|m| {
            match (a.component(&m.positive), b.component(&m.negative)) {
                (Some(x), Some(y)) => preserves(x, y, &m.iso),
                _ => false,
            }
        })
    }
}

fn reversed(c: &BoundaryComponent, e: &str) -> bool {
    c.orientation.get(e) == Some(&Orientation::Reversed)
}

/// Whether `iso` is a graph isomorphism `x → y` keeping classes,
/// subdivision counts and derived orientations.
pub(crate) fn preserves(x: &BoundaryComponent, y: &BoundaryComponent, iso: &Isomorphism) -> bool {
    if iso.edges.len() != x.graph.edge_count() || iso.vertices.len() != x.graph.vertex_count() {
        return false;
    }
    for (e, ends) in x.graph.edges() {
        let Some(img) = iso.edges.get(e) else {
            return false;
        };
        let Some(img_ends) = y.graph.ends(&img.edge) else {
            return false;
        };
        let (t, h) = if img.forward {
            (&img_ends.tail, &img_ends.head)
        } else {
            (&img_ends.head, &img_ends.tail)
        };
        if iso.vertices.get(&ends.tail) != Some(t) || iso.vertices.get(&ends.head) != Some(h) {
            return false;
        }
        if x.edge_class.get(e) != y.edge_class.get(&img.edge)
            || x.subdivision.get(e) != y.subdivision.get(&img.edge)
        {
            return false;
        }
        if x.edge_class.get(e) == Some(&EdgeKind::Joining)
            && img.forward == (reversed(x, e) != reversed(y, &img.edge))
        {
            return false;
        }
    }
    true
}

/// The component with joining edges turned to their derived orientation,
/// and labels forcing those to map forward.
fn derived(c: &BoundaryComponent) -> (FiniteGraph, Labels) {
    let mut g = FiniteGraph::new();
    for v in c.graph.vertices() {
        let _ = g.add_vertex(v.clone());
    }
    let mut labels = Labels::default();
    for (e, ends) in c.graph.edges() {
        let (t, h) = if reversed(c, e) {
            (&ends.head, &ends.tail)
        } else {
            (&ends.tail, &ends.head)
        };
        let _ = g.add_edge(e.clone(), t.clone(), h.clone());
        let label = match c.subdivision.get(e) {
            Some(q) => EdgeLabel::new(format!("joining/{q}"), true),
            None => EdgeLabel::new("subgraph", false),
        };
        labels.edge.insert(e.clone(), label);
    }
    (g, labels)
}

/// Decoration-preserving isomorphisms between two components, at most
/// `limit`, in a deterministic order.
pub fn decorated_isomorphisms(
    x: &BoundaryComponent,
    y: &BoundaryComponent,
    limit: usize,
) -> Result<Vec<Isomorphism>, GraphError> {
    let (gx, lx) = derived(x);
    let (gy, ly) = derived(y);
    let found = graph_isomorphisms(&gx, &lx, &gy, &ly, limit, DEFAULT_NODE_BUDGET)?;
    Ok(found
        .into_iter()
        .map(|iso| Isomorphism {
            vertices: iso.vertices,
            edges: iso
                .edges
                .into_iter()
                .map(|(e, img)| {
                    let flip = reversed(x, &e) != reversed(y, &img.edge);
                    let forward = img.forward != flip;
                    (e, SignedEdge::new(img.edge, forward))
                })
                .collect(),
        })
        .collect())
}

/// Coorientation-reversing decoration maps `a → b`: each positive component
/// of `a` goes to a distinct negative component of `b`. At most `limit`.
pub fn find_decoration_maps(
    a: &DecoratedBoundary,
    b: &DecoratedBoundary,
    limit: usize,
) -> Result<Vec<DecorationMap>, GraphError> {
    if a.sign != Sign::Attracting
        || b.sign != Sign::Repelling
        || a.components.len() != b.components.len()
        || limit == 0
    {
        return Ok(Vec::new());
    }
    let n = a.components.len();
    let mut table: BTreeMap<(usize, usize), Vec<Isomorphism>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let isos = decorated_isomorphisms(&a.components[i], &b.components[j], limit)?;
            table.insert((i, j), isos);
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    let mut chosen = Vec::new();
    extend(a, b, &table, &mut used, &mut chosen, limit, &mut out);
    Ok(out)
}

fn extend(
    a: &DecoratedBoundary,
    b: &DecoratedBoundary,
    table: &BTreeMap<(usize, usize), Vec<Isomorphism>>,
    used: &mut [bool],
    chosen: &mut Vec<ComponentMatch>,
    limit: usize,
    out: &mut Vec<DecorationMap>,
) {
    if out.len() >= limit {
        return;
    }
    let i = chosen.len();
    if i == a.components.len() {
        out.push(DecorationMap {
            matches: chosen.clone(),
        });
        return;
    }
    for j in 0..b.components.len() {
        if used[j] {
            continue;
        }
        for iso in &table[&(i, j)] {
            used[j] = true;
            chosen.push(ComponentMatch {
                positive: a.components[i].leader.clone(),
                negative: b.components[j].leader.clone(),
                iso: iso.clone(),
            });
            extend(a, b, table, used, chosen, limit, out);
            chosen.pop();
            used[j] = false;
            if out.len() >= limit {
                return;
            }
        }
    }
}
