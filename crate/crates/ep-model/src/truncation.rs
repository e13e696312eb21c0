use std::collections::BTreeMap;

use graph_core::{EdgePath, FiniteGraph, GraphMap, Id, SignedEdge};

use crate::error::EpError;
use crate::model::{Cell, CellStep, EndPeriodic};

/// A finite union of blocks realized as a graph with named cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGraph {
    pub graph: FiniteGraph,
    pub vertex_cells: BTreeMap<Id, Cell>,
    pub edge_cells: BTreeMap<Id, Cell>,
    vertex_names: BTreeMap<Cell, Id>,
    edge_names: BTreeMap<Cell, Id>,
}

impl CellGraph {
    pub fn empty() -> Self {
        CellGraph {
            graph: FiniteGraph::new(),
            vertex_cells: BTreeMap::new(),
            edge_cells: BTreeMap::new(),
            vertex_names: BTreeMap::new(),
            edge_names: BTreeMap::new(),
        }
    }

    /// Blocks `lo..=hi`. Every edge endpoint must fall inside the range.
    pub fn blocks(p: &EndPeriodic, lo: i64, hi: i64) -> Result<Self, EpError> {
        let mut out = CellGraph::empty();
        for k in lo..=hi {
            let (vs, _) = p.block_cells(k);
            for v in vs {
                out.add_vertex(p, v)?;
            }
        }
        for k in lo..=hi {
            let (_, es) = p.block_cells(k);
            for e in es {
                out.add_edge(p, e)?;
            }
        }
        Ok(out)
    }

    pub fn add_vertex(&mut self, p: &EndPeriodic, c: Cell) -> Result<(), EpError> {
        if self.vertex_names.contains_key(&c) {
            return Ok(());
        }
        let name = p.name(&c);
        self.graph.add_vertex(name.clone())?;
        self.vertex_cells.insert(name.clone(), c.clone());
        self.vertex_names.insert(c, name);
        Ok(())
    }

    /// Adds an edge whose endpoints are already present.
    pub fn add_edge(&mut self, p: &EndPeriodic, c: Cell) -> Result<(), EpError> {
        if self.edge_names.contains_key(&c) {
            return Ok(());
        }
        let (t, h) = p.edge_ends(&c)?;
        let name = p.name(&c);
        let tn = self.vertex_name(&t).ok_or_else(|| EpError::OutOfTruncation(name.clone()))?;
        let hn = self.vertex_name(&h).ok_or_else(|| EpError::OutOfTruncation(name.clone()))?;
        self.graph.add_edge(name.clone(), tn.clone(), hn.clone())?;
        self.edge_cells.insert(name.clone(), c.clone());
        self.edge_names.insert(c, name);
        Ok(())
    }

    pub fn vertex_name(&self, c: &Cell) -> Option<&Id> {
        self.vertex_names.get(c)
    }

    pub fn edge_name(&self, c: &Cell) -> Option<&Id> {
        self.edge_names.get(c)
    }

    pub fn contains_vertex(&self, c: &Cell) -> bool {
        self.vertex_names.contains_key(c)
    }

    pub fn contains_edge(&self, c: &Cell) -> bool {
        self.edge_names.contains_key(c)
    }

    /// Names a path of cells; fails if it leaves this graph.
    pub fn path_of(&self, start: &Cell, steps: &[CellStep]) -> Result<EdgePath, EpError> {
        let start = self
            .vertex_name(start)
            .ok_or_else(|| EpError::OutOfTruncation(start.to_string()))?;
        let mut out = Vec::with_capacity(steps.len());
        for s in steps {
            let name = self
                .edge_name(&s.cell)
                .ok_or_else(|| EpError::OutOfTruncation(s.cell.to_string()))?;
            out.push(SignedEdge::new(name.clone(), s.forward));
        }
        Ok(EdgePath::from_steps(&self.graph, start.clone(), out)?)
    }

    /// The restriction of `g` to `self`, with images in `codomain`.
    pub fn map_into(&self, p: &EndPeriodic, codomain: &CellGraph) -> Result<GraphMap, EpError> {
        let mut on_vertices = BTreeMap::new();
        for (name, c) in &self.vertex_cells {
            let img = p.vertex_image(c)?;
            let img_name = codomain
                .vertex_name(&img)
                .ok_or_else(|| EpError::OutOfTruncation(name.clone()))?;
            on_vertices.insert(name.clone(), img_name.clone());
        }
        let mut on_edges = BTreeMap::new();
        for (name, c) in &self.edge_cells {
            let (t, _) = p.edge_ends(c)?;
            let img = p.edge_image(c)?;
            let path = codomain
                .path_of(&p.vertex_image(&t)?, &img)
                .map_err(|_| EpError::OutOfTruncation(name.clone()))?;
            on_edges.insert(name.clone(), path);
        }
        Ok(GraphMap::new(
            self.graph.clone(),
            codomain.graph.clone(),
            on_vertices,
            on_edges,
        )?)
    }
}

/// `Γₙ` with the part of `g` that stays inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub level: usize,
    pub cells: CellGraph,
    /// `g` on blocks `−n..=n−1`, into `Γₙ`.
    pub map: GraphMap,
    model: EndPeriodic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Vertex(Id),
    Path(EdgePath),
}

impl Truncation {
    pub fn graph(&self) -> &FiniteGraph {
        &self.cells.graph
    }

    pub fn model(&self) -> &EndPeriodic {
        &self.model
    }

    /// Image of a named vertex or edge under `g`, if it stays inside `Γₙ`.
    pub fn evaluate(&self, name: &str) -> Result<Image, EpError> {
        let p = &self.model;
        if let Some(c) = self.cells.vertex_cells.get(name) {
            let img = p.vertex_image(c)?;
            return self
                .cells
                .vertex_name(&img)
                .map(|n| Image::Vertex(n.clone()))
                .ok_or_else(|| EpError::OutOfTruncation(name.to_string()));
        }
        if let Some(c) = self.cells.edge_cells.get(name) {
            let (t, _) = p.edge_ends(c)?;
            let path = self
                .cells
                .path_of(&p.vertex_image(&t)?, &p.edge_image(c)?)
                .map_err(|_| EpError::OutOfTruncation(name.to_string()))?;
            return Ok(Image::Path(path));
        }
        Err(EpError::UnknownCell(name.to_string()))
    }

    /// Names of the vertices and edges of block `k`.
    pub fn block_names(&self, k: i64) -> (Vec<Id>, Vec<Id>) {
        let vs = self
            .cells
            .vertex_cells
            .iter()
            .filter(|(_, c)| c.block == k)
            .map(|(n, _)| n.clone())
            .collect();
        let es = self
            .cells
            .edge_cells
            .iter()
            .filter(|(_, c)| c.block == k)
            .map(|(n, _)| n.clone())
            .collect();
        (vs, es)
    }
}

/// `Γₙ = B₋ₙ ∪ … ∪ Bₙ` with the partial map.
pub fn unroll(p: &EndPeriodic, n: usize) -> Result<Truncation, EpError> {
    let n = n as i64;
    let cells = CellGraph::blocks(p, -n, n)?;
    let domain = CellGraph::blocks(p, -n, n - 1)?;
    let map = domain.map_into(p, &cells)?;
    Ok(Truncation {
        level: n as usize,
        cells,
        map,
        model: p.clone(),
    })
}

/// Image of a named cell of `t` under `g`.
pub fn evaluate_map(t: &Truncation, name: &str) -> Result<Image, EpError> {
    t.evaluate(name)
}
