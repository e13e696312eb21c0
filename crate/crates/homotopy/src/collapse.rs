use std::collections::{BTreeMap, BTreeSet};

use ep_model::{
    BlockEdge, BlockJson, BlockVertex, Cell, CellGraph, CellStep, EdgeKind, EndPeriodic, EndRecord,
    MapJson, Presentation, Sign,
};
use graph_core::{reduce_path, spanning_tree, EdgePath, GraphMap, Id, SignedEdge};
use serde::Serialize;

use crate::named::{join, Named};
use crate::tree::{block_forest, BlockForest};
use crate::HomotopyError;

/// A boundary-collapsed representative `g†` of an end-periodic map, with
/// the collapse `π` that relates it to the original.
#[derive(Debug, Clone)]
pub struct CollapsedRepresentative {
    pub source: EndPeriodic,
    pub collapsed: EndPeriodic,
    /// Collapsed block-subgraph edges, by local id.
    pub forest_pos: BTreeSet<Id>,
    pub forest_neg: BTreeSet<Id>,
    /// Block vertex to the vertex its component collapses to.
    pub root_pos: BTreeMap<Id, Id>,
    pub root_neg: BTreeMap<Id, Id>,
    /// Valence-one removals in order.
    pub removed: Vec<Removal>,
    /// `π∘g` and `g†∘π` agree on the `Γ₂` basis.
    pub square_commutes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub vertex: Id,
    pub edge: Id,
    /// The other end of `edge`, which absorbs `vertex`.
    pub onto: Id,
}

struct Collapse<'a> {
    p: &'a EndPeriodic,
    pos: BlockForest,
    neg: BlockForest,
}

impl Collapse<'_> {
    fn forest(&self, block: i64) -> &BlockForest {
        if block > 0 {
            &self.pos
        } else {
            &self.neg
        }
    }

    fn vertex(&self, c: &Cell) -> Cell {
        if c.block == 0 {
            return c.clone();
        }
        Cell::new(c.block, &self.forest(c.block).root[&c.id])
    }

    fn collapses(&self, c: &Cell) -> bool {
        c.block != 0 && self.forest(c.block).edges.contains(&c.id)
    }

    fn steps(&self, steps: &[CellStep]) -> Vec<CellStep> {
        steps.iter().filter(|s| !self.collapses(&s.cell)).cloned().collect()
    }

    /// `g` on the cells of the forest path from the root to `v` in block −1.
    fn image_of_root_path(&self, v: &Id) -> Result<Vec<CellStep>, HomotopyError> {
        let mut out = Vec::new();
        for s in &self.neg.from_root[v].steps {
            let img = self.p.edge_image(&Cell::new(-1, &s.edge))?;
            if s.forward {
                out.extend(img);
            } else {
                out.extend(img.iter().rev().map(CellStep::reversed));
            }
        }
        Ok(out)
    }
}

pub fn boundary_collapse(p: &EndPeriodic) -> Result<CollapsedRepresentative, HomotopyError> {
    let cx = Collapse {
        p,
        pos: block_forest(p, Sign::Attracting)?,
        neg: block_forest(p, Sign::Repelling)?,
    };
    // Already collapsed: keep the core rather than absorbing block −1.
    if cx.pos.edges.is_empty() && cx.neg.edges.is_empty() && p.valence_one_vertices().is_empty() {
        return Ok(CollapsedRepresentative {
            source: p.clone(),
            collapsed: p.clone(),
            forest_pos: BTreeSet::new(),
            forest_neg: BTreeSet::new(),
            root_pos: cx.pos.root,
            root_neg: cx.neg.root,
            removed: Vec::new(),
            square_commutes: true,
        });
    }
    // Names in the collapsed presentation: block 1 by local id, the old
    // block −1 (now core) by printed name.
    let vname = |c: &Cell| -> Id {
        let r = cx.vertex(c);
        if r.block == 1 {
            r.id
        } else {
            p.name(&r)
        }
    };
    let ename = |s: &CellStep| -> SignedEdge {
        let id = if s.cell.block == 1 { s.cell.id.clone() } else { p.name(&s.cell) };
        SignedEdge::new(id, s.forward)
    };
    let tight = |steps: Vec<CellStep>| -> Vec<SignedEdge> {
        let named: Vec<SignedEdge> = cx.steps(&steps).iter().map(&ename).collect();
        reduce_path(&EdgePath {
            start: String::new(),
            end: String::new(),
            steps: named,
        })
        .steps
    };

    let new_leader = |old: &Id| -> Id {
        let o = p.orbit(old).expect("validated orbit");
        match o.sign {
            Sign::Attracting => old.clone(),
            Sign::Repelling => o.end_at(-2).clone(),
        }
    };

    // Core: Γ₀ together with the collapsed block −1.
    let mut core = p.core.clone();
    let mut map = MapJson::default();
    for v in p.core.vertices() {
        map.vertices
            .insert(v.clone(), vname(&p.vertex_image(&Cell::core(v))?));
    }
    for e in p.core.edge_ids() {
        map.edges.insert(e.clone(), tight(p.edge_image(&Cell::core(e))?));
    }
    let roots_neg: BTreeSet<&Id> = cx.neg.root.values().collect();
    for r in &roots_neg {
        let c = Cell::new(-1, *r);
        core.add_vertex(p.name(&c))?;
        map.vertices.insert(p.name(&c), vname(&p.vertex_image(&c)?));
    }
    let (_, neg_edges) = p.block_cells(-1);
    for c in neg_edges.iter().filter(|c| !cx.collapses(c)) {
        let (t, h) = p.edge_ends(c)?;
        core.add_edge(p.name(c), p.name(&cx.vertex(&t)), p.name(&cx.vertex(&h)))?;
        let mut steps = Vec::new();
        if t.block == -1 {
            steps.extend(cx.image_of_root_path(&t.id)?);
        }
        steps.extend(p.edge_image(c)?);
        steps.extend(
            cx.image_of_root_path(&h.id)?
                .iter()
                .rev()
                .map(CellStep::reversed),
        );
        map.edges.insert(p.name(c), tight(steps));
    }

    // Blocks: one vertex per component, surviving edges reattached.
    let block = |sign: Sign, k: i64| -> Result<BlockJson, HomotopyError> {
        let b = p.block(sign);
        let f = cx.forest(k);
        let mut json = BlockJson::default();
        let roots: BTreeSet<&Id> = f.root.values().collect();
        for r in roots {
            json.vertices.push(BlockVertex {
                id: r.clone(),
                end: new_leader(&b.vertex_leader[r]),
            });
        }
        for e in b.edge_ids().into_iter().filter(|e| !f.edges.contains(e)) {
            let (t, h) = p.edge_ends(&Cell::new(k, &e))?;
            let joining = b.joining.contains_key(&e);
            let t = cx.vertex(&t);
            json.edges.push(BlockEdge {
                id: e.clone(),
                tail: if joining { p.name(&t) } else { t.id },
                head: cx.vertex(&h).id,
                end: new_leader(b.leader_of_edge(&e).expect("block edge has a leader")),
                kind: if joining { EdgeKind::Joining } else { EdgeKind::Subgraph },
            });
        }
        Ok(json)
    };
    let block_pos = block(Sign::Attracting, 1)?;
    let block_neg = block(Sign::Repelling, -2)?;
    for v in &block_neg.vertices {
        map.vertices.insert(v.id.clone(), p.name(&Cell::new(-1, &v.id)));
    }
    for e in &block_neg.edges {
        map.edges
            .insert(e.id.clone(), vec![SignedEdge::forward(p.name(&Cell::new(-1, &e.id)))]);
    }

    let ends = p
        .presentation()
        .ends
        .iter()
        .map(|e| EndRecord {
            orbit_leader: new_leader(&e.orbit_leader),
            ..e.clone()
        })
        .collect();
    let mut naming = p.naming();
    naming.offset_neg += 1;
    let mut pres = Presentation {
        reconstructed: p.is_reconstructed(),
        core,
        ends,
        block_pos,
        block_neg,
        map,
        naming,
    };
    let mut collapsed = EndPeriodic::new(pres.clone())?;

    // Valence-one removal: each step deletes a core vertex and its edge.
    let mut removed = Vec::new();
    while let Some(v) = collapsed
        .valence_one_vertices()
        .into_iter()
        .find(|v| pres.core.has_vertex(v))
    {
        let e = pres.core.incident_edges(&v)[0].clone();
        let ends = pres.core.ends_of(&e)?.clone();
        let onto = if ends.tail == v { ends.head } else { ends.tail };
        pres = remove_leaf(pres, &v, &e, &onto);
        collapsed = EndPeriodic::new(pres.clone())?;
        removed.push(Removal {
            vertex: v,
            edge: e,
            onto,
        });
    }

    let mut out = CollapsedRepresentative {
        source: p.clone(),
        collapsed,
        forest_pos: cx.pos.edges.clone(),
        forest_neg: cx.neg.edges.clone(),
        root_pos: cx.pos.root.clone(),
        root_neg: cx.neg.root.clone(),
        removed,
        square_commutes: false,
    };
    out.square_commutes = out.check_square(2)?;
    Ok(out)
}

/// Deletes a valence-one core vertex and its edge, retracting onto the
/// other end.
fn remove_leaf(mut p: Presentation, v: &Id, e: &Id, onto: &Id) -> Presentation {
    p.core.remove_edge(e);
    p.core.remove_vertex(v);
    p.map.vertices.remove(v);
    p.map.edges.remove(e);
    for img in p.map.vertices.values_mut() {
        if img == v {
            *img = onto.clone();
        }
    }
    for img in p.map.edges.values_mut() {
        img.retain(|s| &s.edge != e);
        *img = reduce_path(&EdgePath {
            start: String::new(),
            end: String::new(),
            steps: std::mem::take(img),
        })
        .steps;
    }
    p
}

impl CollapsedRepresentative {
    /// `π` on a vertex of the source, by printed name.
    fn project_vertex(&self, c: &Cell) -> Id {
        let r = match c.block.signum() {
            0 => c.clone(),
            1 => Cell::new(c.block, &self.root_pos[&c.id]),
            _ => Cell::new(c.block, &self.root_neg[&c.id]),
        };
        let name = self.source.name(&r);
        self.retract(&name)
    }

    fn retract(&self, v: &Id) -> Id {
        let mut v = v.clone();
        for r in &self.removed {
            if r.vertex == v {
                v = r.onto.clone();
            }
        }
        v
    }

    fn collapses(&self, c: &Cell) -> bool {
        match c.block.signum() {
            0 => self.removed.iter().any(|r| r.edge == c.id),
            1 => self.forest_pos.contains(&c.id),
            _ => self.forest_neg.contains(&c.id),
        }
    }

    /// The collapse `π: Γₙ → Γ†ₙ` of the source truncation onto the
    /// collapsed one.
    pub fn collapse_map(&self, n: i64) -> Result<GraphMap, HomotopyError> {
        let from = CellGraph::blocks(&self.source, -n, n)?;
        let to = CellGraph::blocks(&self.collapsed, -n, n)?;
        let mut vertices = BTreeMap::new();
        for (name, c) in &from.vertex_cells {
            vertices.insert(name.clone(), self.project_vertex(c));
        }
        let mut edges = BTreeMap::new();
        for (name, c) in &from.edge_cells {
            let steps = if self.collapses(c) {
                Vec::new()
            } else {
                vec![SignedEdge::forward(name.clone())]
            };
            edges.insert(name.clone(), steps);
        }
        Ok(GraphMap::from_steps(from.graph, to.graph, vertices, edges)?)
    }

    /// Compares `π∘g` with `g†∘π` on the loops of a basis of `Γₙ`, as
    /// reduced loops in the collapsed graph.
    pub fn check_square(&self, n: i64) -> Result<bool, HomotopyError> {
        let pi = self.collapse_map(n + 1)?;
        let g = Named::new(&self.source, n)?;
        let gd = Named::new(&self.collapsed, n + 1)?;
        let cells = CellGraph::blocks(&self.source, -n, n)?;
        let root = cells
            .graph
            .vertices()
            .next()
            .expect("truncations are nonempty")
            .clone();
        let t = spanning_tree(&cells.graph, &root)?;
        for x in &t.generators {
            let ends = cells.graph.ends_of(x)?;
            let gamma = join(&[
                &t.path(&root, &ends.tail)?,
                &EdgePath {
                    start: ends.tail.clone(),
                    end: ends.head.clone(),
                    steps: vec![SignedEdge::forward(x.clone())],
                },
                &t.path(&ends.head, &root)?,
            ]);
            let a = pi.image_of_path(&g.path(&gamma)?)?.reduced();
            let b = gd.path(&pi.image_of_path(&gamma)?)?.reduced();
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
