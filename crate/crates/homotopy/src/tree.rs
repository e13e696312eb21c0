use std::collections::{BTreeMap, BTreeSet};

use ep_model::{block_components, rebase, Cell, CellGraph, EndPeriodic, Sign};
use graph_core::{spanning_tree, Id, SignedEdge, SpanningTree};
use serde::Serialize;

use crate::HomotopyError;

/// Where `g⁻¹` sends block 1: each block-1 vertex and edge is the image of
/// exactly one core cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimages {
    pub vertices: BTreeMap<Id, Id>,
    /// `g(e) = x` read forward when the stored sign is forward.
    pub edges: BTreeMap<Id, SignedEdge>,
}

/// Preimages of block 1 when `g` is cellular over it, sends `B₋₁` into the
/// core and keeps `g(B₋₁)` apart from `g⁻¹(B₁)`.
pub fn inverse_ready(p: &EndPeriodic) -> Option<Preimages> {
    let mut vertices: BTreeMap<Id, Vec<Cell>> = BTreeMap::new();
    let mut edges: BTreeMap<Id, Vec<(Cell, bool)>> = BTreeMap::new();
    let mut from_neg: BTreeSet<(bool, Id)> = BTreeSet::new();
    for k in [0, -1] {
        let (vs, es) = p.block_cells(k);
        for v in vs {
            let img = p.vertex_image(&v).ok()?;
            if k == -1 {
                if img.block != 0 {
                    return None;
                }
                from_neg.insert((false, img.id.clone()));
            }
            if img.block == 1 {
                vertices.entry(img.id).or_default().push(v);
            }
        }
        for e in es {
            let img = p.edge_image(&e).ok()?;
            if k == -1 {
                for s in &img {
                    if s.cell.block != 0 {
                        return None;
                    }
                    from_neg.insert((true, s.cell.id.clone()));
                }
            }
            let hits: Vec<_> = img.iter().filter(|s| s.cell.block == 1).collect();
            if hits.is_empty() {
                continue;
            }
            if img.len() != 1 {
                return None;
            }
            edges
                .entry(hits[0].cell.id.clone())
                .or_default()
                .push((e.clone(), hits[0].forward));
        }
    }
    let (vs, es) = p.block_cells(1);
    let mut out = Preimages {
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
    };
    for v in vs {
        match vertices.get(&v.id).map(Vec::as_slice) {
            Some([c]) if c.block == 0 && !from_neg.contains(&(false, c.id.clone())) => {
                out.vertices.insert(v.id, c.id.clone());
            }
            _ => return None,
        }
    }
    for e in es {
        match edges.get(&e.id).map(Vec::as_slice) {
            Some([(c, fwd)]) if c.block == 0 && !from_neg.contains(&(true, c.id.clone())) => {
                out.edges.insert(e.id, SignedEdge::new(c.id.clone(), *fwd));
            }
            _ => return None,
        }
    }
    Some(out)
}

/// BFS maximal forest of a block's subgraph, one tree per component rooted
/// at its least vertex.
pub(crate) struct BlockForest {
    pub edges: BTreeSet<Id>,
    /// Each block vertex to the root of its component.
    pub root: BTreeMap<Id, Id>,
    /// Each block vertex to the tree path from its root.
    pub from_root: BTreeMap<Id, graph_core::EdgePath>,
}

pub(crate) fn block_forest(p: &EndPeriodic, sign: Sign) -> Result<BlockForest, HomotopyError> {
    let mut out = BlockForest {
        edges: BTreeSet::new(),
        root: BTreeMap::new(),
        from_root: BTreeMap::new(),
    };
    for c in block_components(p, sign) {
        let root = c.graph.vertices().next().expect("components are nonempty").clone();
        let t = spanning_tree(&c.graph, &root)?;
        for v in c.graph.vertices() {
            out.root.insert(v.clone(), root.clone());
            out.from_root.insert(v.clone(), t.path(&root, v)?);
        }
        out.edges.extend(t.edges);
    }
    Ok(out)
}

/// A maximal tree of the infinite graph that is carried into itself by the
/// shift on both sides, described by its finitely many pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndInvariantTree {
    /// The presentation the tree is built on, with the core enlarged once
    /// when needed.
    #[serde(skip)]
    pub base: EndPeriodic,
    #[serde(skip)]
    pub preimages: Preimages,
    pub enlarged: bool,
    pub root: Id,
    /// Tree edges in the core.
    pub core_edges: BTreeSet<Id>,
    /// Maximal forests of the block subgraphs, by local id.
    pub forest_pos: BTreeSet<Id>,
    pub forest_neg: BTreeSet<Id>,
    /// Critical joining edge per orbit leader, by local id.
    pub critical_pos: BTreeMap<Id, Id>,
    pub critical_neg: BTreeMap<Id, Id>,
    /// Shift invariance, verified on truncations.
    pub invariant: bool,
}

/// Depth to which invariance is verified.
pub const CHECK_DEPTH: i64 = 4;

pub fn build_end_invariant_tree(p: &EndPeriodic) -> Result<EndInvariantTree, HomotopyError> {
    let (base, enlarged) = match inverse_ready(p) {
        Some(_) => (p.clone(), false),
        None => (rebase(p)?, true),
    };
    let preimages = inverse_ready(&base).ok_or(HomotopyError::NotCellular)?;

    let critical = |sign| -> BTreeMap<Id, Id> {
        block_components(&base, sign)
            .into_iter()
            .map(|c| (c.leader, c.joining.into_iter().min().expect("components are joined")))
            .collect()
    };
    let forest_pos = block_forest(&base, Sign::Attracting)?.edges;
    let forest_neg = block_forest(&base, Sign::Repelling)?.edges;
    let critical_pos = critical(Sign::Attracting);
    let critical_neg = critical(Sign::Repelling);

    // Core tree: the forced edges g⁻¹(F₁ ∪ D₁) ∪ g(F₋₁ ∪ D₋₁), then the rest
    // in ascending order.
    let mut forced = Vec::new();
    for e in forest_pos.iter().chain(critical_pos.values()) {
        forced.push(preimages.edges[e].edge.clone());
    }
    for e in forest_neg.iter().chain(critical_neg.values()) {
        let img = base.edge_image(&Cell::new(-1, e))?;
        forced.push(img[0].cell.id.clone());
    }
    forced.sort();
    forced.dedup();
    let mut uf = UnionFind::new(base.core.vertices());
    let mut core_edges = BTreeSet::new();
    for e in &forced {
        let ends = base.core.ends_of(e)?;
        if !uf.union(&ends.tail, &ends.head) {
            return Err(HomotopyError::ForcedCycle(e.clone()));
        }
        core_edges.insert(e.clone());
    }
    for (e, ends) in base.core.edges() {
        if uf.union(&ends.tail, &ends.head) {
            core_edges.insert(e.clone());
        }
    }

    let fixed = base
        .core
        .vertices()
        .find(|v| base.vertex_image(&Cell::core(*v)).is_ok_and(|c| c == Cell::core(*v)));
    let root = fixed
        .or_else(|| base.core.vertices().next())
        .expect("the core is nonempty")
        .clone();

    let mut tree = EndInvariantTree {
        base,
        preimages,
        enlarged,
        root,
        core_edges,
        forest_pos,
        forest_neg,
        critical_pos,
        critical_neg,
        invariant: false,
    };
    tree.invariant = tree.check_invariance(CHECK_DEPTH)?;
    Ok(tree)
}

impl EndInvariantTree {
    /// Local ids of tree edges in every block on one side.
    pub fn block_edges(&self, sign: Sign) -> BTreeSet<Id> {
        let (f, d) = match sign {
            Sign::Attracting => (&self.forest_pos, &self.critical_pos),
            Sign::Repelling => (&self.forest_neg, &self.critical_neg),
        };
        f.iter().chain(d.values()).cloned().collect()
    }

    /// Tree edge names in blocks `−n..=n`.
    pub fn edges_at(&self, n: i64) -> BTreeSet<Id> {
        let mut out = self.core_edges.clone();
        for sign in [Sign::Attracting, Sign::Repelling] {
            let local = self.block_edges(sign);
            for k in 1..=n {
                let b = if sign == Sign::Attracting { k } else { -k };
                out.extend(local.iter().map(|e| self.base.name(&Cell::new(b, e))));
            }
        }
        out
    }

    pub fn is_tree_cell(&self, c: &Cell) -> bool {
        match c.block.signum() {
            0 => self.core_edges.contains(&c.id),
            1 => self.block_edges(Sign::Attracting).contains(&c.id),
            _ => self.block_edges(Sign::Repelling).contains(&c.id),
        }
    }

    /// `Γₙ` of the base presentation with the tree restricted to it.
    pub fn spanning(&self, n: i64) -> Result<(CellGraph, SpanningTree), HomotopyError> {
        let cells = CellGraph::blocks(&self.base, -n, n)?;
        let t = SpanningTree::from_edges(&cells.graph, &self.root, self.edges_at(n))?;
        Ok((cells, t))
    }

    /// Names of the critical edges in blocks ±1.
    pub fn critical_edges(&self) -> Vec<String> {
        let pos = self.critical_pos.values().map(|e| Cell::new(1, e));
        let neg = self.critical_neg.values().map(|e| Cell::new(-1, e));
        pos.chain(neg).map(|c| self.base.name(&c)).collect()
    }

    /// `g^{±1}(T − Γ₀) ⊆ T`, checked cell by cell on blocks up to `depth`:
    /// the outward shift of every tree cell in blocks `1..depth` is a tree
    /// cell, and `g⁻¹(T ∩ B₁)` and `g(T ∩ B₋₁)` lie in the core tree.
    pub fn check_invariance(&self, depth: i64) -> Result<bool, HomotopyError> {
        let (cells, _) = self.spanning(depth)?;
        let tree = self.edges_at(depth);
        if !cells.graph.is_connected() || tree.len() + 1 != cells.graph.vertex_count() {
            return Ok(false);
        }
        let in_tree = |c: &Cell| cells.edge_name(c).is_some_and(|n| tree.contains(n));
        for (name, c) in &cells.edge_cells {
            if !tree.contains(name) || c.block == 0 {
                continue;
            }
            let out = c.shifted(c.block.signum());
            if c.block.abs() < depth && !in_tree(&out) {
                return Ok(false);
            }
            let inward = match c.block {
                1 => Cell::core(&self.preimages.edges[&c.id].edge),
                -1 => self.base.edge_image(c)?[0].cell.clone(),
                _ => continue,
            };
            if !self.core_edges.contains(&inward.id) || inward.block != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct UnionFind(BTreeMap<Id, Id>);

impl UnionFind {
    fn new<'a>(vs: impl Iterator<Item = &'a Id>) -> Self {
        UnionFind(vs.map(|v| (v.clone(), v.clone())).collect())
    }

    fn find(&mut self, v: &Id) -> Id {
        let mut r = v.clone();
        while self.0[&r] != r {
            r = self.0[&r].clone();
        }
        self.0.insert(v.clone(), r.clone());
        r
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: &Id, b: &Id) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0.insert(ra, rb);
        true
    }
}
