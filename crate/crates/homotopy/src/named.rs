use ep_model::{CellGraph, EndPeriodic, EpError};
use graph_core::{EdgePath, Id, SignedEdge};

/// Applies a presentation's map to vertices and paths given by printed
/// name, for cells in blocks `−k..=k`.
#[derive(Debug, Clone)]
pub struct Named<'a> {
    pub model: &'a EndPeriodic,
    pub cells: CellGraph,
}

impl<'a> Named<'a> {
    pub fn new(model: &'a EndPeriodic, k: i64) -> Result<Self, EpError> {
        Ok(Named {
            model,
            cells: CellGraph::blocks(model, -k, k)?,
        })
    }

    pub fn vertex(&self, v: &str) -> Result<Id, EpError> {
        let c = self
            .cells
            .vertex_cells
            .get(v)
            .ok_or_else(|| EpError::OutOfTruncation(v.to_string()))?;
        Ok(self.model.name(&self.model.vertex_image(c)?))
    }

    pub fn step(&self, s: &SignedEdge) -> Result<Vec<SignedEdge>, EpError> {
        let c = self
            .cells
            .edge_cells
            .get(&s.edge)
            .ok_or_else(|| EpError::OutOfTruncation(s.edge.clone()))?;
        let img = self.model.edge_image(c)?;
        let named = img
            .iter()
            .map(|x| SignedEdge::new(self.model.name(&x.cell), x.forward));
        Ok(if s.forward {
            named.collect()
        } else {
            named.rev().map(|x| x.reversed()).collect()
        })
    }

    /// Image of a path, unreduced.
    pub fn path(&self, p: &EdgePath) -> Result<EdgePath, EpError> {
        let mut steps = Vec::new();
        for s in &p.steps {
            steps.extend(self.step(s)?);
        }
        Ok(EdgePath {
            start: self.vertex(&p.start)?,
            end: self.vertex(&p.end)?,
            steps,
        })
    }
}

/// Concatenates paths that meet end to start.
pub(crate) fn join(parts: &[&EdgePath]) -> EdgePath {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        debug_assert_eq!(out.end, p.start, "paths must meet");
        out.steps.extend(p.steps.iter().cloned());
        out.end = p.end.clone();
    }
    out
}
