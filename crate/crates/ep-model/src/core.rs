use std::collections::BTreeMap;

use graph_core::{FiniteGraph, Id, SignedEdge};

use crate::error::EpError;
use crate::model::{Cell, CellStep, EndPeriodic};
use crate::schema::{BlockEdge, BlockJson, BlockVertex, EdgeKind, EndRecord, MapJson, Presentation, Sign};
use crate::truncation::CellGraph;

/// Smallest `N` such that `Γ_N` holds every non-combinatorial edge image,
/// and the presentation rebased on `Γ_N`.
///
/// Images of `core ∪ B₋₁` lie in `Γ₀ ∪ B₁`, and after one rebase the new core
/// is `Γ₁`, so `N` is 0 or 1.
pub fn proper_core(p: &EndPeriodic) -> Result<(usize, EndPeriodic), EpError> {
    if is_proper(p) {
        Ok((0, p.clone()))
    } else {
        Ok((1, rebase(p)?))
    }
}

pub fn is_proper(p: &EndPeriodic) -> bool {
    p.emap
        .values()
        .filter(|img| img.len() != 1)
        .all(|img| img.iter().all(|s| s.cell.block == 0))
}

/// The same map presented with `Γ₁` as its core. Blocks keep their local
/// ids, and names of all cells are unchanged.
pub fn rebase(p: &EndPeriodic) -> Result<EndPeriodic, EpError> {
    let core_cells = CellGraph::blocks(p, -1, 1)?;
    // Where the new blocks ±1 (old ±2) see their images.
    let to_new = |c: &Cell| -> Id {
        if c.block == 2 {
            c.id.clone()
        } else {
            p.name(c)
        }
    };

    let new_leader = |old: &Id| -> Id {
        let o = p.orbit(old).expect("validated orbit");
        match o.sign {
            Sign::Attracting => o.end_at(2).clone(),
            Sign::Repelling => o.end_at(-2).clone(),
        }
    };

    let ends = p
        .presentation()
        .ends
        .iter()
        .map(|e| EndRecord {
            orbit_leader: new_leader(&e.orbit_leader),
            ..e.clone()
        })
        .collect::<Vec<_>>();
    let mut blocks = Vec::new();
    for (sign, k) in [(Sign::Attracting, 2i64), (Sign::Repelling, -2i64)] {
        let b = p.block(sign);
        let mut json = BlockJson::default();
        for v in b.graph.vertices() {
            json.vertices.push(BlockVertex {
                id: v.clone(),
                end: new_leader(&b.vertex_leader[v]),
            });
        }
        for e in b.edge_ids() {
            let c = Cell::new(k, &e);
            let (t, h) = p.edge_ends(&c)?;
            let joining = b.joining.contains_key(&e);
            json.edges.push(BlockEdge {
                id: e.clone(),
                tail: if joining { p.name(&t) } else { t.id.clone() },
                head: h.id.clone(),
                end: new_leader(b.leader_of_edge(&e).expect("block edge has a leader")),
                kind: if joining {
                    EdgeKind::Joining
                } else {
                    EdgeKind::Subgraph
                },
            });
        }
        blocks.push(json);
    }
    let block_neg = blocks.pop().unwrap();
    let block_pos = blocks.pop().unwrap();

    let mut map = MapJson::default();
    let img_steps = |c: &Cell| -> Result<Vec<SignedEdge>, EpError> {
        Ok(p.edge_image(c)?
            .iter()
            .map(|s: &CellStep| SignedEdge::new(to_new(&s.cell), s.forward))
            .collect())
    };
    for (name, c) in &core_cells.vertex_cells {
        map.vertices.insert(name.clone(), to_new(&p.vertex_image(c)?));
    }
    for (name, c) in &core_cells.edge_cells {
        map.edges.insert(name.clone(), img_steps(c)?);
    }
    let (vs, es) = p.block_cells(-2);
    for c in vs {
        map.vertices.insert(c.id.clone(), to_new(&p.vertex_image(&c)?));
    }
    for c in es {
        map.edges.insert(c.id.clone(), img_steps(&c)?);
    }

    let mut naming = p.naming();
    naming.offset_pos += 1;
    naming.offset_neg += 1;
    let core: FiniteGraph = core_cells.graph;
    let out = Presentation {
        reconstructed: p.is_reconstructed(),
        core,
        ends,
        block_pos,
        block_neg,
        map,
        naming,
    };
    EndPeriodic::new(out)
}

/// Rebases `times` times.
pub fn enlarge(p: &EndPeriodic, times: usize) -> Result<EndPeriodic, EpError> {
    let mut out = p.clone();
    for _ in 0..times {
        out = rebase(&out)?;
    }
    Ok(out)
}

/// One `(leading end, component)` per orbit on the given side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockComponent {
    pub leader: Id,
    /// Block vertices and subgraph edges of the component.
    pub graph: FiniteGraph,
    pub joining: Vec<Id>,
}

pub fn block_components(p: &EndPeriodic, sign: Sign) -> Vec<BlockComponent> {
    let b = p.block(sign);
    let mut out: Vec<BlockComponent> = b
        .graph
        .components()
        .into_iter()
        .map(|vs| {
            let any = vs.iter().next().expect("components are nonempty");
            let leader = b.vertex_leader[any].clone();
            let joining = b
                .joining
                .values()
                .filter(|j| vs.contains(&j.head))
                .map(|j| j.id.clone())
                .collect();
            BlockComponent {
                leader,
                graph: b.graph.induced(&vs),
                joining,
            }
        })
        .collect();
    out.sort_by(|a, b| a.leader.cmp(&b.leader));
    out
}

/// Per-end labels of a block's cells, for reporting.
pub fn block_end_labels(p: &EndPeriodic, k: i64) -> BTreeMap<String, Id> {
    let (vs, es) = p.block_cells(k);
    vs.iter()
        .chain(es.iter())
        .filter_map(|c| p.end_of(c).map(|e| (p.name(c), e.clone())))
        .collect()
}
