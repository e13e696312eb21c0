//! A discrete semiflow on the glued truncation, used to recompute the first
//! return map of `Θ` without reference to the rules `couple` applies.
//!
//! Every 2-cell the flow crosses is a rectangle whose horizontal layers are
//! stacked bottom to top, each running from the left side to the right
//! side. Interior squares have two layers: an edge and its image. An ideal
//! neighborhood `N(e∞)` has the block-`m` edge at the bottom, the glued
//! ideal edge or the subdividing arcs in the middle, and the block-`−m`
//! edge of the other side on top. Flowing a `Θ` edge one step up moves it
//! to the next layer; its first return is the first layer lying in `Θ`.

use std::collections::BTreeMap;
use std::fmt::Write;

use boundary::{compute_boundary, BoundaryComponent, DecorationMap};
use ep_model::{Cell, CellGraph, EdgeKind, EndPeriodic, Sign};
use graph_core::{Id, Isomorphism, SignedEdge};
use serde::Serialize;

use crate::theta::{theta_name, Origin, Side, ThetaComplex};
use crate::CouplingError;

/// Steps allowed before a flowline must have returned.
pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Layer {
    Theta(Vec<SignedEdge>),
    /// A horizontal cell of the glued complex that is not in `Θ`.
    Ideal,
}

#[derive(Debug, Clone)]
struct Region {
    layers: Vec<Layer>,
}

/// Upward flowline of a vertex, as the sequence of vertices it meets.
#[derive(Debug, Clone)]
enum Point {
    Theta(Id),
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeAgreement {
    pub edge: Id,
    pub expected: Option<Vec<SignedEdge>>,
    pub actual: Vec<SignedEdge>,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub depth: usize,
    pub regions: usize,
    pub edges: Vec<EdgeAgreement>,
    /// Vertices whose flowline returns somewhere other than `f` says.
    pub vertex_mismatches: Vec<Id>,
}

impl OracleReport {
    pub fn agreed(&self) -> usize {
        self.edges.iter().filter(|a| a.agrees).count()
    }

    pub fn total(&self) -> usize {
        self.edges.len()
    }

    pub fn all_agree(&self) -> bool {
        self.agreed() == self.total() && self.vertex_mismatches.is_empty()
    }

    pub fn flagged(&self) -> Vec<&Id> {
        self.edges.iter().filter(|a| !a.agrees).map(|a| &a.edge).collect()
    }

    /// One row per edge: name, status, `f` image, flow image.
    pub fn table(&self) -> String {
        let words = |s: &[SignedEdge]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        for a in &self.edges {
            let status = if a.agrees { "ok" } else { "MISMATCH" };
            let expected = a.expected.as_deref().map_or_else(|| "-".to_string(), words);
            let _ = write!(out, "{}\t{status}\tf: {}\tflow: {expected}", a.edge, words(&a.actual));
            if let Some(n) = &a.note {
                let _ = write!(out, "\t({n})");
            }
            out.push('\n');
        }
        for v in &self.vertex_mismatches {
            let _ = writeln!(out, "{v}\tMISMATCH\tvertex");
        }
        let _ = writeln!(out, "{}/{} edges agree", self.agreed(), self.total());
        out
    }
}

struct Flow<'a> {
    theta: &'a ThetaComplex,
    regions: Vec<Region>,
    columns: BTreeMap<Id, Vec<Point>>,
    /// Subdividing edges whose recorded endpoints disagree with the arcs.
    misplaced: BTreeMap<Id, String>,
}

impl Flow<'_> {
    fn require(&self, name: &Id) -> Result<(), CouplingError> {
        if self.theta.graph.has_edge(name) || self.theta.graph.has_vertex(name) {
            Ok(())
        } else {
            Err(CouplingError::TruncationTooShallow(format!("`{name}` is not in Θ")))
        }
    }

    /// Squares of `Γ_m` below block `m` on one side.
    fn interior(&mut self, side: Side, x: &EndPeriodic) -> Result<(), CouplingError> {
        let m = self.theta.cutoff as i64;
        let cells = CellGraph::blocks(x, -m, m)?;
        for c in cells.edge_cells.values().filter(|c| c.block < m) {
            let top: Vec<SignedEdge> = x
                .edge_image(c)?
                .iter()
                .map(|s| SignedEdge::new(theta_name(side, x, &s.cell), s.forward))
                .collect();
            for s in &top {
                self.require(&s.edge)?;
            }
            self.regions.push(Region {
                layers: vec![
                    Layer::Theta(vec![SignedEdge::forward(theta_name(side, x, c))]),
                    Layer::Theta(top),
                ],
            });
        }
        for c in cells.vertex_cells.values().filter(|c| c.block < m) {
            let up = theta_name(side, x, &x.vertex_image(c)?);
            self.require(&up)?;
            self.columns.insert(
                theta_name(side, x, c),
                vec![Point::Theta(theta_name(side, x, c)), Point::Theta(up)],
            );
        }
        Ok(())
    }

    /// Ideal neighborhoods of the positive boundary of `x`, glued by `h` to
    /// the negative boundary of `y`.
    fn ideal(&mut self, side: Side, x: &EndPeriodic, y: &EndPeriodic, h: &DecorationMap) -> Result<(), CouplingError> {
        let m = self.theta.cutoff as i64;
        let from = compute_boundary(x, Sign::Attracting)?;
        for pair in &h.matches {
            let c = from
                .component(&pair.positive)
                .ok_or_else(|| CouplingError::IncompatibleDecoration(pair.positive.clone()))?;
            for v in c.graph.vertices() {
                let w = glued_vertex(&pair.iso, v)?;
                self.columns.insert(
                    theta_name(side, x, &Cell::new(m, v)),
                    vec![
                        Point::Theta(theta_name(side, x, &Cell::new(m, v))),
                        Point::Ideal,
                        Point::Theta(theta_name(side.other(), y, &Cell::new(-m, w))),
                    ],
                );
            }
            for e in c.graph.edge_ids() {
                let region = self.neighborhood(side, x, y, c, &pair.iso, e)?;
                self.regions.push(region);
            }
        }
        Ok(())
    }

    fn neighborhood(
        &mut self,
        side: Side,
        x: &EndPeriodic,
        y: &EndPeriodic,
        c: &BoundaryComponent,
        iso: &Isomorphism,
        e: &Id,
    ) -> Result<Region, CouplingError> {
        let m = self.theta.cutoff as i64;
        let other = side.other();
        let bottom = Cell::new(m, e);
        let glued = iso
            .edges
            .get(e)
            .ok_or_else(|| CouplingError::IncompatibleDecoration(format!("`{e}` is not glued")))?;
        let top = Cell::new(-m, &glued.edge);
        let base = Layer::Theta(vec![SignedEdge::forward(theta_name(side, x, &bottom))]);
        if c.edge_class.get(e) != Some(&EdgeKind::Joining) {
            let top = SignedEdge::new(theta_name(other, y, &top), glued.forward);
            self.require(&top.edge)?;
            return Ok(Region {
                layers: vec![base, Layer::Ideal, Layer::Theta(vec![top])],
            });
        }

        // Left side: ∂₀e_m, then the q column vertices up to block m, then
        // the ideal vertex. Right side: ∂₁e_m, the ideal vertex, then the
        // column of the other side rising to ∂₀e′₋ₘ.
        let q = c.subdivision[e];
        let ends = c.graph.ends_of(e)?;
        let (tail, _) = x.edge_ends(&bottom)?;
        let mut left = Vec::new();
        let mut at = tail;
        for _ in 0..q {
            at = x.vertex_image(&at)?;
            left.push(at.clone());
        }
        if at != Cell::new(m, &ends.tail) {
            return Err(CouplingError::IncompatibleDecoration(format!(
                "column over `{}` misses its ideal vertex",
                x.name(&bottom)
            )));
        }
        let mut right = Vec::new();
        let mut at = Cell::new(-m, glued_vertex(iso, &ends.head)?);
        for _ in 0..q {
            right.push(at.clone());
            at = y.vertex_image(&at)?;
        }
        let top_left = Cell::new(-m, glued_vertex(iso, &ends.tail)?);
        let (t, h) = y.edge_ends(&top)?;
        let forward = match (t == top_left, h == top_left) {
            (true, false) => true,
            (false, true) => false,
            _ => {
                return Err(CouplingError::IncompatibleDecoration(format!(
                    "top of the neighborhood of `{e}` does not start at its corner"
                )))
            }
        };
        if (if forward { h } else { t }) != at {
            return Err(CouplingError::IncompatibleDecoration(format!(
                "right side of the neighborhood of `{e}` misses its corner"
            )));
        }

        // Disjoint monotone arcs pair the attachment points in order.
        let mut layers = vec![base];
        for (j, (l, r)) in left.iter().zip(&right).enumerate() {
            let index = j as u64 + 1;
            let want = (theta_name(side, x, l), theta_name(other, y, r));
            let arc = self.theta.edge_origin.iter().find_map(|(n, o)| match o {
                Origin::Subdividing { side: s, over, index: i } if *s == side && *over == bottom && *i == index => {
                    Some(n.clone())
                }
                _ => None,
            });
            let Some(arc) = arc else {
                return Err(CouplingError::TruncationTooShallow(format!(
                    "Θ has no arc {index} over `{}`",
                    x.name(&bottom)
                )));
            };
            let ends = self.theta.graph.ends_of(&arc)?;
            if (ends.tail.clone(), ends.head.clone()) != want {
                self.misplaced.insert(
                    arc.clone(),
                    format!("endpoints should be {} -> {}", want.0, want.1),
                );
            }
            layers.push(Layer::Theta(vec![SignedEdge::forward(arc)]));
        }
        let top = SignedEdge::new(theta_name(other, y, &top), forward);
        self.require(&top.edge)?;
        layers.push(Layer::Theta(vec![top]));
        Ok(Region { layers })
    }

    /// First return of one edge: the first `Θ` layer above it.
    fn edge(&self, e: &Id, depth: usize) -> Result<Option<Vec<SignedEdge>>, CouplingError> {
        let mut found = None;
        for r in &self.regions {
            for (i, layer) in r.layers.iter().enumerate().take(r.layers.len() - 1) {
                let Layer::Theta(steps) = layer else { continue };
                let [s] = steps.as_slice() else { continue };
                if &s.edge != e {
                    continue;
                }
                if found.is_some() {
                    return Ok(None);
                }
                found = Some((r, i, s.forward));
            }
        }
        let Some((r, i, forward)) = found else { return Ok(None) };
        for (n, layer) in r.layers[i + 1..].iter().enumerate() {
            if n >= depth {
                break;
            }
            if let Layer::Theta(steps) = layer {
                return Ok(Some(if forward {
                    steps.clone()
                } else {
                    steps.iter().rev().map(SignedEdge::reversed).collect()
                }));
            }
        }
        Err(CouplingError::TruncationTooShallow(format!(
            "`{e}` does not return within {depth} steps"
        )))
    }

    fn vertex(&self, v: &Id, depth: usize) -> Result<Option<Id>, CouplingError> {
        let Some(col) = self.columns.get(v) else { return Ok(None) };
        for (n, p) in col[1..].iter().enumerate() {
            if n >= depth {
                break;
            }
            if let Point::Theta(w) = p {
                return Ok(Some(w.clone()));
            }
        }
        Err(CouplingError::TruncationTooShallow(format!(
            "`{v}` does not return within {depth} steps"
        )))
    }
}

fn glued_vertex<'a>(iso: &'a Isomorphism, v: &Id) -> Result<&'a Id, CouplingError> {
    iso.vertices
        .get(v)
        .ok_or_else(|| CouplingError::IncompatibleDecoration(format!("`{v}` is not glued")))
}

/// Recomputes the first return of every edge and vertex of `Θ` by flowing
/// through the glued truncation, at most `depth` steps per flowline.
pub fn first_return_oracle(theta: &ThetaComplex, depth: usize) -> Result<OracleReport, CouplingError> {
    let mut flow = Flow {
        theta,
        regions: Vec::new(),
        columns: BTreeMap::new(),
        misplaced: BTreeMap::new(),
    };
    flow.interior(Side::Left, &theta.left)?;
    flow.interior(Side::Right, &theta.right)?;
    flow.ideal(Side::Left, &theta.left, &theta.right, &theta.gluing.plus)?;
    flow.ideal(Side::Right, &theta.right, &theta.left, &theta.gluing.minus)?;

    let mut edges = Vec::new();
    for e in theta.graph.edge_ids() {
        let expected = flow.edge(e, depth)?;
        let actual = theta.f.on_edges.get(e).map(|p| p.steps.clone()).unwrap_or_default();
        let note = match (&expected, flow.misplaced.get(e)) {
            (_, Some(n)) => Some(n.clone()),
            (None, None) => Some("not the bottom of exactly one cell".into()),
            _ => None,
        };
        edges.push(EdgeAgreement {
            edge: e.clone(),
            agrees: note.is_none() && expected.as_ref() == Some(&actual),
            expected,
            actual,
            note,
        });
    }
    let mut vertex_mismatches = Vec::new();
    for v in theta.graph.vertices() {
        if flow.vertex(v, depth)?.as_ref() != theta.f.on_vertices.get(v) {
            vertex_mismatches.push(v.clone());
        }
    }
    Ok(OracleReport {
        depth,
        regions: flow.regions.len(),
        edges,
        vertex_mismatches,
    })
}
