use std::collections::BTreeMap;

use ep_model::{
    BlockEdge, BlockJson, BlockVertex, Cell, CellStep, EdgeKind, EndPeriodic, EndRecord, MapJson,
    Naming, Presentation, Sign,
};
use folding::{fold_decompose, fold_decompose_end_periodic, window_map, TerminalKind};
use graph_core::{EdgePath, Id, SignedEdge};
use serde::Serialize;

use crate::named::{join, Named};
use crate::tree::{build_end_invariant_tree, EndInvariantTree};
use crate::HomotopyError;

/// Outcome of the three checks run on every constructed inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InverseChecks {
    /// `(g′∘g)_* = id` on the `Γ₃` basis, after sliding the basepoint back.
    pub left_identity: bool,
    /// `(g∘g′)_* = id` on the `Γ₃` basis.
    pub right_identity: bool,
    /// `g′` is the inverse shift on block edges off the core, to depth 4.
    pub inverse_shift: bool,
}

impl InverseChecks {
    pub fn all(&self) -> bool {
        self.left_identity && self.right_identity && self.inverse_shift
    }
}

#[derive(Debug, Clone)]
pub struct HomotopyInverseResult {
    /// `g′`, presented on the same graph with the ends' roles exchanged.
    /// Cell names agree with those of `g`.
    pub inverse: EndPeriodic,
    pub tree: EndInvariantTree,
    pub basepoint: Id,
    /// Tree path from the basepoint to its image, when `g` moves it.
    /// Fundamental groups are compared through the automorphism
    /// `γ ↦ δ·g(γ)·δ⁻¹`.
    pub slide: Option<EdgePath>,
    /// Blocks of the base presentation forming the core of `g′`.
    pub level: i64,
    /// Per end: the reduced correction loop at the basepoint carried by
    /// the critical edge of that end.
    pub corrections: BTreeMap<Id, EdgePath>,
    /// Per non-tree edge with core tail: the reduced loop `η_e`.
    pub eta: BTreeMap<Id, EdgePath>,
    pub checks: InverseChecks,
}

fn single(tail: &Id, head: &Id, e: &Id) -> EdgePath {
    EdgePath {
        start: tail.clone(),
        end: head.clone(),
        steps: vec![SignedEdge::forward(e.clone())],
    }
}

/// `g⁻¹` on a vertex off the core.
fn back_vertex(tree: &EndInvariantTree, c: &Cell) -> Cell {
    match c.block {
        1 => Cell::core(&tree.preimages.vertices[&c.id]),
        _ => c.shifted(-1),
    }
}

/// `g⁻¹` on an edge with both ends off the core.
fn back_edge(tree: &EndInvariantTree, c: &Cell) -> CellStep {
    match c.block {
        1 => {
            let s = &tree.preimages.edges[&c.id];
            CellStep::new(Cell::core(&s.edge), s.forward)
        }
        _ => CellStep::new(c.shifted(-1), true),
    }
}

pub fn homotopy_inverse(p: &EndPeriodic) -> Result<HomotopyInverseResult, HomotopyError> {
    if !fold_decompose_end_periodic(p)?.certificate.verdict {
        return Err(HomotopyError::NotHomotopyEquivalence);
    }
    if let Some(back) = automorphism_inverse(p)? {
        return exact_inverse(p, &back);
    }
    let tree = build_end_invariant_tree(p)?;
    let base = &tree.base;
    // Loops handled below stay within `max period` blocks of the core, so
    // a window of that level lifts them; the inverse's core has one more.
    let n = base.max_period() as i64;
    let level = n + 1;
    let seq = fold_decompose(&window_map(base, n as usize)?)?;
    if !seq.all_type1() || seq.terminal_kind != TerminalKind::Homeomorphism {
        return Err(HomotopyError::NotHomotopyEquivalence);
    }

    let depth = level + 4;
    let (big, t) = tree.spanning(depth)?;
    let g = Named::new(base, depth - 1)?;
    let star = tree.root.clone();
    let delta = t.path(&star, &g.vertex(&star)?)?;
    let lift = |lambda: &EdgePath| -> Result<EdgePath, HomotopyError> {
        let conj = join(&[&delta.inverse(), lambda, &delta]).reduced();
        Ok(seq.lift(&conj, &star, &star)?)
    };

    // g′ on vertices and edges of blocks within `level + 2`.
    let reach = level + 2;
    let mut on_vertices: BTreeMap<Id, Id> = BTreeMap::new();
    for (name, c) in &big.vertex_cells {
        if c.block.abs() <= reach {
            let img = if c.block == 0 { name.clone() } else { base.name(&back_vertex(&tree, c)) };
            on_vertices.insert(name.clone(), img);
        }
    }
    let mut on_edges: BTreeMap<Id, EdgePath> = BTreeMap::new();
    let mut pending: Vec<(Id, Cell)> = Vec::new();
    for (name, c) in &big.edge_cells {
        if c.block.abs() > reach {
            continue;
        }
        let (tail, head) = base.edge_ends(c)?;
        let (tn, hn) = (base.name(&tail), base.name(&head));
        if tail.block != 0 {
            let s = back_edge(&tree, c);
            let (a, b) = (&on_vertices[&tn], &on_vertices[&hn]);
            on_edges.insert(
                name.clone(),
                EdgePath {
                    start: a.clone(),
                    end: b.clone(),
                    steps: vec![SignedEdge::new(base.name(&s.cell), s.forward)],
                },
            );
        } else if c.block == 0 && t.contains_edge(name) {
            on_edges.insert(name.clone(), single(&tn, &hn, name));
        } else {
            pending.push((name.clone(), c.clone()));
        }
    }

    // Critical edges: ⟨∂₀e,*⟩ · X · ⟨*, g⁻¹∂₁e⟩ with X the lift of
    // ⟨*,∂₁e⟩ · (δ · g⟨*, g⁻¹∂₁e⟩)⁻¹.
    let mut corrections = BTreeMap::new();
    for (name, c) in pending.iter().filter(|(n, _)| t.contains_edge(n)) {
        let (tail, head) = base.edge_ends(c)?;
        let (tn, hn) = (base.name(&tail), base.name(&head));
        let w = &on_vertices[&hn];
        let to_w = t.path(&star, w)?;
        let back = join(&[&delta, &g.path(&to_w)?]);
        let x = lift(&join(&[&t.path(&star, &hn)?, &back.inverse()]))?;
        let img = join(&[&t.path(&tn, &star)?, &x, &to_w]).reduced();
        let end = base.end_of(c).expect("block cells lie in ends").clone();
        corrections.insert(end, x);
        on_edges.insert(name.clone(), img);
    }

    let apply = |path: &EdgePath, on_edges: &BTreeMap<Id, EdgePath>| -> EdgePath {
        let mut out = EdgePath::trivial(on_vertices[&path.start].clone());
        for s in &path.steps {
            let img = &on_edges[&s.edge];
            out = join(&[&out, &if s.forward { img.clone() } else { img.inverse() }]);
        }
        out
    };

    // Remaining edges with core tail: g′⟨*,∂₀e⟩⁻¹ · η_e · g′⟨*,∂₁e⟩.
    let mut eta = BTreeMap::new();
    for (name, c) in pending.iter().filter(|(n, _)| !t.contains_edge(n)) {
        let (tail, head) = base.edge_ends(c)?;
        let (tn, hn) = (base.name(&tail), base.name(&head));
        let (to_tail, to_head) = (t.path(&star, &tn)?, t.path(&star, &hn)?);
        let gamma = join(&[&to_tail, &single(&tn, &hn, name), &to_head.inverse()]);
        let e = lift(&gamma)?;
        let img = join(&[
            &apply(&to_tail, &on_edges).inverse(),
            &e,
            &apply(&to_head, &on_edges),
        ])
        .reduced();
        eta.insert(name.clone(), e);
        on_edges.insert(name.clone(), img);
    }

    let inverse = present(base, level, &big, &on_vertices, &on_edges)?;
    let checks = run_checks(&tree, &inverse, &g, &delta, &star)?;
    if !checks.all() {
        return Err(HomotopyError::Check(format!("{checks:?}")));
    }
    let slide = (delta.start != delta.end).then_some(delta);
    Ok(HomotopyInverseResult {
        inverse,
        basepoint: star,
        slide,
        level,
        corrections,
        eta,
        checks,
        tree,
    })
}

/// `g⁻¹` on the cells of the core and block 1, when `g` permutes the cells
/// of the graph, i.e. sends `core ∪ B₋₁` bijectively onto `core ∪ B₁` with
/// single-edge images.
fn automorphism_inverse(p: &EndPeriodic) -> Result<Option<BTreeMap<Cell, CellStep>>, HomotopyError> {
    let mut back = BTreeMap::new();
    let mut targets = 0;
    for k in [0, -1] {
        let (vs, es) = p.block_cells(k);
        for v in vs {
            let img = p.vertex_image(&v)?;
            if back.insert(img, CellStep::new(v, true)).is_some() {
                return Ok(None);
            }
        }
        for e in es {
            let img = p.edge_image(&e)?;
            let [s] = img.as_slice() else {
                return Ok(None);
            };
            if back.insert(s.cell.clone(), CellStep::new(e, s.forward)).is_some() {
                return Ok(None);
            }
        }
    }
    for k in [0, 1] {
        let (vs, es) = p.block_cells(k);
        targets += vs.len() + es.len();
        if !vs.iter().chain(&es).all(|c| back.contains_key(c)) {
            return Ok(None);
        }
    }
    Ok((back.len() == targets).then_some(back))
}

/// `g⁻¹` itself, over the same core.
fn exact_inverse(
    p: &EndPeriodic,
    back: &BTreeMap<Cell, CellStep>,
) -> Result<HomotopyInverseResult, HomotopyError> {
    let inv = |c: &Cell| -> CellStep {
        match c.block {
            0 | 1 => back[c].clone(),
            _ => CellStep::new(c.shifted(-1), true),
        }
    };
    let big = ep_model::CellGraph::blocks(p, -1, 1)?;
    let mut on_vertices = BTreeMap::new();
    let mut on_edges = BTreeMap::new();
    for (name, c) in &big.vertex_cells {
        if c.block >= 0 {
            on_vertices.insert(name.clone(), p.name(&inv(c).cell));
        }
    }
    for (name, c) in &big.edge_cells {
        if c.block >= 0 {
            let s = inv(c);
            let (t, h) = p.step_ends(&s)?;
            on_edges.insert(
                name.clone(),
                EdgePath {
                    start: p.name(&t),
                    end: p.name(&h),
                    steps: vec![SignedEdge::new(p.name(&s.cell), s.forward)],
                },
            );
        }
    }
    let inverse = present(p, 0, &big, &on_vertices, &on_edges)?;

    let g = Named::new(p, 3)?;
    let gp = Named::new(&inverse, 4)?;
    let (mut left, mut right, mut shift) = (true, true, true);
    for (name, c) in &g.cells.edge_cells {
        let e = SignedEdge::forward(name.clone());
        let id = vec![e.clone()];
        if c.block < 3 {
            left &= g.step(&e)?.iter().map(|s| gp.step(s)).collect::<Result<Vec<_>, _>>()?.concat() == id;
        }
        if c.block > -3 {
            right &= gp.step(&e)?.iter().map(|s| g.step(s)).collect::<Result<Vec<_>, _>>()?.concat() == id;
        }
    }
    for (name, c) in &g.cells.edge_cells {
        if c.block != 0 && c.block != 1 {
            shift &= gp.step(&SignedEdge::forward(name.clone()))?
                == vec![SignedEdge::forward(p.name(&c.shifted(-1)))];
        }
    }
    let checks = InverseChecks {
        left_identity: left,
        right_identity: right,
        inverse_shift: shift,
    };
    if !checks.all() {
        return Err(HomotopyError::Check(format!("{checks:?}")));
    }

    let tree = build_end_invariant_tree(p)?;
    Ok(HomotopyInverseResult {
        inverse,
        basepoint: tree.root.clone(),
        slide: None,
        level: 0,
        corrections: BTreeMap::new(),
        eta: BTreeMap::new(),
        checks,
        tree,
    })
}

/// Writes `g′` as a presentation whose core is blocks `−level..=level` of
/// the base. Its positive blocks are the base's negative ones from
/// `−(level+1)` outward and vice versa.
fn present(
    base: &EndPeriodic,
    level: i64,
    big: &ep_model::CellGraph,
    on_vertices: &BTreeMap<Id, Id>,
    on_edges: &BTreeMap<Id, EdgePath>,
) -> Result<EndPeriodic, HomotopyError> {
    let core = ep_model::CellGraph::blocks(base, -level, level)?;
    // Cells of the new block 1 are written by local id.
    let local = |name: &Id, cell: Option<&Cell>| -> Id {
        match cell {
            Some(c) if c.block == -(level + 1) => c.id.clone(),
            _ => name.clone(),
        }
    };
    let vname = |v: &Id| local(v, big.vertex_cells.get(v));
    let ename = |s: &SignedEdge| SignedEdge::new(local(&s.edge, big.edge_cells.get(&s.edge)), s.forward);

    let mut map = MapJson::default();
    let outer = base.block_cells(level + 1);
    for (name, c) in &big.vertex_cells {
        let key = if c.block.abs() <= level {
            name.clone()
        } else if c.block == level + 1 {
            c.id.clone()
        } else {
            continue;
        };
        map.vertices.insert(key, vname(&on_vertices[name]));
    }
    for (name, c) in &big.edge_cells {
        let key = if c.block.abs() <= level {
            name.clone()
        } else if c.block == level + 1 {
            c.id.clone()
        } else {
            continue;
        };
        map.edges
            .insert(key, on_edges[name].steps.iter().map(&ename).collect());
    }
    debug_assert!(outer.0.iter().all(|c| map.vertices.contains_key(&c.id)));

    let mut leader_of = BTreeMap::new();
    let mut ends = Vec::new();
    for o in &base.orbits {
        let k = match o.sign {
            Sign::Attracting => level + 1,
            Sign::Repelling => -(level + 1),
        };
        let leader = o.end_at(k).clone();
        leader_of.insert(o.leader.clone(), leader.clone());
        let q = o.members.len();
        let i = o.members.iter().position(|m| *m == leader).expect("leader is a member");
        for t in 0..q {
            ends.push(EndRecord {
                id: o.members[(i + q - t) % q].clone(),
                sign: o.sign.opposite(),
                period: q as u64,
                orbit_leader: leader.clone(),
            });
        }
    }

    let block = |sign: Sign, k: i64| -> Result<BlockJson, HomotopyError> {
        let b = base.block(sign);
        let mut json = BlockJson::default();
        for v in b.graph.vertices() {
            json.vertices.push(BlockVertex {
                id: v.clone(),
                end: leader_of[&b.vertex_leader[v]].clone(),
            });
        }
        for e in b.edge_ids() {
            let (t, h) = base.edge_ends(&Cell::new(k, &e))?;
            let joining = b.joining.contains_key(&e);
            json.edges.push(BlockEdge {
                id: e.clone(),
                tail: if joining { base.name(&t) } else { t.id.clone() },
                head: h.id.clone(),
                end: leader_of[b.leader_of_edge(&e).expect("block edge has a leader")].clone(),
                kind: if joining { EdgeKind::Joining } else { EdgeKind::Subgraph },
            });
        }
        Ok(json)
    };

    let naming = base.naming();
    let pres = Presentation {
        reconstructed: base.is_reconstructed(),
        core: core.graph,
        ends,
        block_pos: block(Sign::Repelling, -(level + 1))?,
        block_neg: block(Sign::Attracting, level + 1)?,
        map,
        naming: Naming {
            flip: !naming.flip,
            offset_pos: level as u32 + naming.offset_neg,
            offset_neg: level as u32 + naming.offset_pos,
        },
    };
    Ok(EndPeriodic::new(pres)?)
}

fn run_checks(
    tree: &EndInvariantTree,
    inverse: &EndPeriodic,
    g: &Named,
    delta: &EdgePath,
    star: &Id,
) -> Result<InverseChecks, HomotopyError> {
    let base = &tree.base;
    let gp = Named::new(inverse, 4)?;
    let (cells, t3) = tree.spanning(3)?;
    let gd = gp.path(delta)?;
    let mut left = true;
    let mut right = true;
    for x in &t3.generators {
        let ends = cells.graph.ends_of(x)?;
        let gamma = join(&[
            &t3.path(star, &ends.tail)?,
            &single(&ends.tail, &ends.head, x),
            &t3.path(&ends.head, star)?,
        ])
        .reduced();
        let l = gp.path(&g.path(&gamma)?)?;
        left &= join(&[&gd, &l, &gd.inverse()]).reduced() == gamma;
        let r = g.path(&gp.path(&gamma)?)?;
        right &= join(&[delta, &r, &delta.inverse()]).reduced() == gamma;
    }

    let (cells, _) = tree.spanning(4)?;
    let mut shift = true;
    for (name, c) in &cells.edge_cells {
        if c.block == 0 || base.edge_ends(c)?.0.block == 0 {
            continue;
        }
        let want = back_edge(tree, c);
        shift &= gp.step(&SignedEdge::forward(name.clone()))?
            == vec![SignedEdge::new(base.name(&want.cell), want.forward)];
    }
    for (name, c) in &cells.vertex_cells {
        if c.block != 0 {
            shift &= gp.vertex(name)? == base.name(&back_vertex(tree, c));
        }
    }
    Ok(InverseChecks {
        left_identity: left,
        right_identity: right,
        inverse_shift: shift,
    })
}
