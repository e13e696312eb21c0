use std::collections::BTreeMap;

use boundary::{compute_boundary, BoundaryComponent};
use ep_model::{Cell, CellGraph, CellStep, EdgeKind, EndPeriodic, Sign};
use graph_core::{pi1_basis, spanning_tree, EdgePath, Id, SignedEdge};
use serde::Serialize;

use crate::CouplingError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopReport {
    /// The loop in the boundary component.
    pub path: Vec<SignedEdge>,
    pub lambda: i64,
    /// The loop is already trivial in the boundary.
    pub trivial_input: bool,
    /// Reduced lift into the graph, for `λ = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<Vec<SignedEdge>>,
    /// Whether `g^k` of the lift is nontrivial, for `k = 1..=k_max`.
    pub powers: Vec<bool>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryInjectivityReport {
    pub leader: Id,
    pub sign: Sign,
    /// `λ` on each ideal edge in its stored orientation.
    pub lambda: BTreeMap<Id, i64>,
    pub loops: Vec<LoopReport>,
    pub k_max: usize,
    pub certified: bool,
    /// Some loop has `λ = 0`, so its certificate only covers `k ≤ k_max`.
    pub partial: bool,
}

/// `λ` on an ideal edge: 0 on subgraph edges, `∓|E|` on joining edges of
/// a positive or negative component.
fn lambda_of(c: &BoundaryComponent, sign: Sign, e: &str) -> i64 {
    match c.subdivision.get(e) {
        None => 0,
        Some(&q) => match sign {
            Sign::Attracting => -(q as i64),
            Sign::Repelling => q as i64,
        },
    }
}

/// Freely reduces a path of cells.
fn reduce(steps: Vec<CellStep>) -> Vec<CellStep> {
    let mut out: Vec<CellStep> = Vec::with_capacity(steps.len());
    for s in steps {
        match out.last() {
            Some(t) if t.cell == s.cell && t.forward != s.forward => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

/// Lifts a loop of the boundary component led by `c` into the blocks of
/// its side. Each vertex at depth `n` lifts to its translate in block
/// `±n`; a joining edge lifts to the translate starting at the current
/// depth, moving `|E|` blocks outward when traversed forward and inward
/// when traversed backward. The start depth keeps the whole lift off the
/// core.
pub fn lift_loop(
    p: &EndPeriodic,
    c: &BoundaryComponent,
    sign: Sign,
    path: &EdgePath,
    k_max: usize,
) -> Result<LoopReport, CouplingError> {
    let side: i64 = if sign == Sign::Attracting { 1 } else { -1 };
    let mut depth = 0i64;
    let mut lowest = 0i64;
    let mut lambda = 0;
    for s in &path.steps {
        lambda += lambda_of(c, sign, &s.edge) * if s.forward { 1 } else { -1 };
        if let Some(&q) = c.subdivision.get(&s.edge) {
            depth += if s.forward { q as i64 } else { -(q as i64) };
            lowest = lowest.min(depth);
        }
    }
    let trivial_input = path.reduced().is_empty();
    let mut report = LoopReport {
        path: path.steps.clone(),
        lambda,
        trivial_input,
        lift: None,
        powers: Vec::new(),
        certified: lambda != 0 && !trivial_input,
    };
    if lambda != 0 {
        return Ok(report);
    }

    let start = 1 - lowest;
    let mut depth = start;
    let mut highest = start;
    let mut steps = Vec::new();
    for s in &path.steps {
        let joining = c.edge_class.get(&s.edge) == Some(&EdgeKind::Joining);
        let q = c.subdivision.get(&s.edge).copied().unwrap_or(0) as i64;
        let at = match (joining, s.forward) {
            (false, _) => depth,
            (true, true) => depth + q,
            (true, false) => depth,
        };
        steps.push(CellStep::new(Cell::new(side * at, &s.edge), s.forward));
        if joining {
            depth += if s.forward { q } else { -q };
        }
        highest = highest.max(depth);
    }
    let (lo, hi) = if side > 0 { (0, highest) } else { (-highest, 0) };
    let cells = CellGraph::blocks(p, lo, hi)?;
    let first = Cell::new(side * start, &path.start);
    let lifted = cells.path_of(&first, &steps)?;
    if lifted.start != lifted.end {
        return Err(CouplingError::InvalidComponent(format!(
            "lift of a λ = 0 loop of `{}` does not close up",
            c.leader
        )));
    }
    let reduced = lifted.reduced();
    report.lift = Some(reduced.steps.clone());

    let mut image = reduce(steps);
    for _ in 0..k_max {
        let mut next = Vec::new();
        for s in &image {
            let img = p.edge_image(&s.cell)?;
            if s.forward {
                next.extend(img);
            } else {
                next.extend(img.iter().rev().map(CellStep::reversed));
            }
        }
        image = reduce(next);
        report.powers.push(!image.is_empty());
    }
    report.certified = !trivial_input && !reduced.is_empty() && report.powers.iter().all(|&b| b);
    Ok(report)
}

/// `λ` on every ideal edge of the component led by `leader`, and lifts of
/// its `λ = 0` basis loops checked up to `g^{k_max}`.
pub fn boundary_injectivity_check(
    p: &EndPeriodic,
    leader: &str,
    k_max: usize,
) -> Result<BoundaryInjectivityReport, CouplingError> {
    for sign in [Sign::Attracting, Sign::Repelling] {
        let b = compute_boundary(p, sign)?;
        let Some(c) = b.component(leader) else { continue };
        let lambda = c.graph.edge_ids().map(|e| (e.clone(), lambda_of(c, sign, e))).collect();
        let root = c.graph.vertices().next().expect("components are nonempty").clone();
        let tree = spanning_tree(&c.graph, &root)?;
        let mut loops = Vec::new();
        for (_, path) in pi1_basis(&c.graph, &tree, &root)? {
            loops.push(lift_loop(p, c, sign, &path, k_max)?);
        }
        return Ok(BoundaryInjectivityReport {
            leader: leader.to_string(),
            sign,
            lambda,
            certified: loops.iter().all(|l| l.certified),
            partial: loops.iter().any(|l| l.lambda == 0),
            loops,
            k_max,
        });
    }
    Err(CouplingError::InvalidComponent(leader.to_string()))
}
