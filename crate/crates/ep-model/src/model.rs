use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use graph_core::{FiniteGraph, Id, SignedEdge};
use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, EpError};
use crate::schema::{EdgeKind, Naming, Presentation, Sign};

/// A cell of the infinite graph: a local id inside block `block`
/// (block 0 is the core).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub block: i64,
    pub id: Id,
}

impl Cell {
    pub fn new(block: i64, id: impl Into<Id>) -> Self {
        Cell {
            block,
            id: id.into(),
        }
    }

    pub fn core(id: impl Into<Id>) -> Self {
        Cell::new(0, id)
    }

    /// The same local cell `by` blocks further out on its side.
    pub fn shifted(&self, by: i64) -> Cell {
        Cell::new(self.block + by, self.id.clone())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.id, self.block)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellStep {
    pub cell: Cell,
    pub forward: bool,
}

impl CellStep {
    pub fn new(cell: Cell, forward: bool) -> Self {
        CellStep { cell, forward }
    }

    pub fn reversed(&self) -> Self {
        CellStep::new(self.cell.clone(), !self.forward)
    }
}

/// A joining edge together with the data fixing where its translates attach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joining {
    pub id: Id,
    /// Core vertex: tail of the block ±1 copy.
    pub tail: Id,
    pub head: Id,
    pub leader: Id,
    pub period: u64,
    /// Block vertex that the translate `period` blocks further out hangs
    /// from (block ±1 local id).
    pub anchor: Id,
    /// Core tails of the first `period` translates. Positive side: tails of
    /// blocks 1..=q in order. Negative side: `x_1..x_q` with `x_q = tail`,
    /// so block `-k` uses `chain[q - k]`.
    pub chain: Vec<Id>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub sign: Sign,
    /// Block vertices and subgraph edges.
    pub graph: FiniteGraph,
    pub vertex_leader: BTreeMap<Id, Id>,
    pub joining: BTreeMap<Id, Joining>,
}

impl Block {
    pub fn has_edge(&self, e: &str) -> bool {
        self.graph.has_edge(e) || self.joining.contains_key(e)
    }

    pub fn leader_of_edge(&self, e: &str) -> Option<&Id> {
        if let Some(j) = self.joining.get(e) {
            return Some(&j.leader);
        }
        let ends = self.graph.ends(e)?;
        self.vertex_leader.get(&ends.tail)
    }

    pub fn edge_ids(&self) -> Vec<Id> {
        let mut out: Vec<Id> = self.graph.edge_ids().cloned().collect();
        out.extend(self.joining.keys().cloned());
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub leader: Id,
    pub sign: Sign,
    /// `E, g(E), g²(E), …`
    pub members: Vec<Id>,
}

impl Orbit {
    pub fn period(&self) -> u64 {
        self.members.len() as u64
    }

    /// End containing block `k` of this orbit's component (`k ≠ 0`).
    pub fn end_at(&self, k: i64) -> &Id {
        let q = self.members.len() as i64;
        let i = if k > 0 {
            (k - 1).rem_euclid(q)
        } else {
            (-(-k - 1)).rem_euclid(q)
        };
        &self.members[i as usize]
    }
}

/// A validated end-periodic map, presented by its core, one block on each
/// side and the map on `core ∪ block −1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndPeriodic {
    pub(crate) source: Presentation,
    pub core: FiniteGraph,
    pub pos: Block,
    pub neg: Block,
    pub orbits: Vec<Orbit>,
    pub period: u64,
    pub(crate) vmap: BTreeMap<Id, Cell>,
    pub(crate) emap: BTreeMap<Id, Vec<CellStep>>,
}

impl EndPeriodic {
    pub fn new(p: Presentation) -> Result<Self, EpError> {
        crate::validate::build(p).map_err(EpError::InvalidPresentation)
    }

    pub fn from_json(text: &str) -> Result<Self, EpError> {
        let p = Presentation::from_json(text).map_err(|e| {
            EpError::InvalidPresentation(vec![Diagnostic::new("parse", None, e.to_string())])
        })?;
        EndPeriodic::new(p)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.source
    }

    pub fn naming(&self) -> Naming {
        self.source.naming
    }

    pub fn is_reconstructed(&self) -> bool {
        self.source.reconstructed
    }

    pub fn block(&self, sign: Sign) -> &Block {
        match sign {
            Sign::Attracting => &self.pos,
            Sign::Repelling => &self.neg,
        }
    }

    pub fn orbit(&self, leader: &str) -> Option<&Orbit> {
        self.orbits.iter().find(|o| o.leader == leader)
    }

    pub fn orbits_of(&self, sign: Sign) -> impl Iterator<Item = &Orbit> + '_ {
        self.orbits.iter().filter(move |o| o.sign == sign)
    }

    pub fn max_period(&self) -> u64 {
        self.orbits.iter().map(Orbit::period).max().unwrap_or(1)
    }

    fn side(&self, block: i64) -> Option<&Block> {
        match block.signum() {
            1 => Some(&self.pos),
            -1 => Some(&self.neg),
            _ => None,
        }
    }

    /// Printable name of a cell, stable across rebasing.
    pub fn name(&self, c: &Cell) -> String {
        if c.block == 0 {
            c.id.clone()
        } else {
            format!("{}@{}", c.id, self.naming().index(c.block))
        }
    }

    pub fn is_vertex(&self, c: &Cell) -> bool {
        match self.side(c.block) {
            None => self.core.has_vertex(&c.id),
            Some(b) => b.graph.has_vertex(&c.id),
        }
    }

    pub fn is_edge(&self, c: &Cell) -> bool {
        match self.side(c.block) {
            None => self.core.has_edge(&c.id),
            Some(b) => b.has_edge(&c.id),
        }
    }

    pub fn is_joining(&self, c: &Cell) -> bool {
        self.side(c.block)
            .is_some_and(|b| b.joining.contains_key(&c.id))
    }

    /// Leading end of the block component containing a block cell.
    pub fn leader_of(&self, c: &Cell) -> Option<&Id> {
        let b = self.side(c.block)?;
        b.vertex_leader.get(&c.id).or_else(|| b.leader_of_edge(&c.id))
    }

    /// The end a block cell lies in.
    pub fn end_of(&self, c: &Cell) -> Option<&Id> {
        let leader = self.leader_of(c)?;
        Some(self.orbit(leader)?.end_at(c.block))
    }

    pub fn edge_ends(&self, c: &Cell) -> Result<(Cell, Cell), EpError> {
        let unknown = || EpError::UnknownCell(c.to_string());
        let Some(b) = self.side(c.block) else {
            let ends = self.core.ends(&c.id).ok_or_else(unknown)?;
            return Ok((Cell::core(&ends.tail), Cell::core(&ends.head)));
        };
        if let Some(ends) = b.graph.ends(&c.id) {
            return Ok((
                Cell::new(c.block, &ends.tail),
                Cell::new(c.block, &ends.head),
            ));
        }
        let j = b.joining.get(&c.id).ok_or_else(unknown)?;
        let q = j.period as i64;
        let k = c.block.abs();
        let tail = if k <= q {
            if c.block > 0 {
                Cell::core(&j.chain[(k - 1) as usize])
            } else {
                Cell::core(&j.chain[(q - k) as usize])
            }
        } else {
            Cell::new(c.block.signum() * (k - q), &j.anchor)
        };
        Ok((tail, Cell::new(c.block, &j.head)))
    }

    pub fn vertex_image(&self, c: &Cell) -> Result<Cell, EpError> {
        if !self.is_vertex(c) {
            return Err(EpError::UnknownCell(c.to_string()));
        }
        if c.block >= 1 || c.block <= -2 {
            return Ok(c.shifted(1));
        }
        Ok(self.vmap[&c.id].clone())
    }

    pub fn edge_image(&self, c: &Cell) -> Result<Vec<CellStep>, EpError> {
        if !self.is_edge(c) {
            return Err(EpError::UnknownCell(c.to_string()));
        }
        if c.block >= 1 || c.block <= -2 {
            return Ok(vec![CellStep::new(c.shifted(1), true)]);
        }
        Ok(self.emap[&c.id].clone())
    }

    pub fn step_ends(&self, s: &CellStep) -> Result<(Cell, Cell), EpError> {
        let (t, h) = self.edge_ends(&s.cell)?;
        Ok(if s.forward { (t, h) } else { (h, t) })
    }

    /// Vertices and edges of block `k` (the core for `k = 0`).
    pub fn block_cells(&self, k: i64) -> (Vec<Cell>, Vec<Cell>) {
        match self.side(k) {
            None => (
                self.core.vertices().map(|v| Cell::new(0, v)).collect(),
                self.core.edge_ids().map(|e| Cell::new(0, e)).collect(),
            ),
            Some(b) => (
                b.graph.vertices().map(|v| Cell::new(k, v)).collect(),
                b.edge_ids().into_iter().map(|e| Cell::new(k, e)).collect(),
            ),
        }
    }

    /// Core vertices that are tails of joining-edge translates on one side.
    pub fn junctures(&self, sign: Sign) -> BTreeSet<Id> {
        self.block(sign)
            .joining
            .values()
            .flat_map(|j| j.chain.iter().cloned())
            .collect()
    }

    /// Vertices of valence one in the infinite graph, by name. Every vertex
    /// of a block beyond ±(q+1) is a translate of one checked here.
    pub fn valence_one_vertices(&self) -> Vec<String> {
        let depth = self.max_period() as i64 + 1;
        let t = crate::truncation::unroll(self, depth as usize + 1)
            .expect("valid presentations unroll");
        let mut out = Vec::new();
        for (name, cell) in &t.cells.vertex_cells {
            if cell.block.abs() <= depth && t.graph().valence(name) == 1 {
                out.push(name.clone());
            }
        }
        out
    }

    /// The map data as signed edge lists, keyed like the presentation file.
    pub fn edge_image_ids(&self, e: &str) -> Option<Vec<SignedEdge>> {
        self.source.map.edges.get(e).cloned()
    }

    pub(crate) fn kind_of(&self, sign: Sign, e: &str) -> Option<EdgeKind> {
        let b = self.block(sign);
        if b.joining.contains_key(e) {
            Some(EdgeKind::Joining)
        } else if b.graph.has_edge(e) {
            Some(EdgeKind::Subgraph)
        } else {
            None
        }
    }

    pub fn edge_kind(&self, c: &Cell) -> Option<EdgeKind> {
        match c.block.signum() {
            1 => self.kind_of(Sign::Attracting, &c.id),
            -1 => self.kind_of(Sign::Repelling, &c.id),
            _ => None,
        }
    }
}
