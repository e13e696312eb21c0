use std::collections::{BTreeMap, BTreeSet};

use boundary::{compute_boundary, ComponentMatch, DecoratedBoundary, DecorationMap};
use ep_model::{unroll, Cell, CellGraph, EdgeKind, EndPeriodic, Image, Presentation, Sign};
use graph_core::{FiniteGraph, GraphMap, Id, Isomorphism, SignedEdge};
use homotopy::HomotopyInverseResult;
use serde::{Deserialize, Serialize};

use crate::CouplingError;

/// The identification of the two boundaries. Both halves run from a
/// positive boundary to a negative one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    /// `∂₊W → ∂₋W′`.
    pub plus: DecorationMap,
    /// `∂₊W′ → ∂₋W`.
    pub minus: DecorationMap,
}

impl Gluing {
    /// Checks both halves against the decorated boundaries.
    pub fn check(&self, left: &EndPeriodic, right: &EndPeriodic) -> Result<(), CouplingError> {
        let pairs = [
            (&self.plus, left, right, "∂₊W → ∂₋W′"),
            (&self.minus, right, left, "∂₊W′ → ∂₋W"),
        ];
        for (h, x, y, what) in pairs {
            let from = compute_boundary(x, Sign::Attracting)?;
            let to = compute_boundary(y, Sign::Repelling)?;
            if !h.respects(&from, &to) {
                return Err(CouplingError::IncompatibleDecoration(what.into()));
            }
        }
        Ok(())
    }
}

/// Uniform cutoff for every boundary component; `None` picks the least
/// admissible one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub cutoff: Option<u32>,
}

impl CouplingConfig {
    pub fn with_cutoff(m: u32) -> Self {
        CouplingConfig { cutoff: Some(m) }
    }

    /// `max(2, largest end period of either map)`.
    pub fn minimum(left: &EndPeriodic, right: &EndPeriodic) -> u32 {
        2.max(left.max_period() as u32).max(right.max_period() as u32)
    }

    pub fn resolve(&self, left: &EndPeriodic, right: &EndPeriodic) -> Result<u32, CouplingError> {
        let minimum = Self::minimum(left, right);
        match self.cutoff {
            None => Ok(minimum),
            Some(cutoff) if cutoff >= minimum => Ok(cutoff),
            Some(cutoff) => Err(CouplingError::CutoffTooSmall { cutoff, minimum }),
        }
    }
}

/// `Left` is the first map's graph `Δ`, `Right` the second's `Δ′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Left => "A",
            Side::Right => "B",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Where a cell of `Θ` comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// A cell of `Γ_m` on one side.
    Interior { side: Side, cell: Cell },
    /// The `index`-th subdividing edge over the joining edge `over` of
    /// block `m` on `side`: in `S₊` for the left side, `S₋` for the right.
    Subdividing { side: Side, over: Cell, index: u64 },
}

/// `Θ = Δ ⊔ Δ′ ⊔ S₊ ⊔ S₋` with its first return map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaComplex {
    pub left: EndPeriodic,
    pub right: EndPeriodic,
    pub gluing: Gluing,
    pub cutoff: u32,
    pub graph: FiniteGraph,
    pub f: GraphMap,
    pub vertex_origin: BTreeMap<Id, Origin>,
    pub edge_origin: BTreeMap<Id, Origin>,
}

/// Name of a cell of one side inside `Θ`.
pub(crate) fn theta_name(side: Side, x: &EndPeriodic, c: &Cell) -> Id {
    format!("{}:{}", side.tag(), x.name(c))
}

pub(crate) fn subdividing_name(side: Side, x: &EndPeriodic, over: &Cell, j: u64) -> Id {
    let sign = match side {
        Side::Left => '+',
        Side::Right => '-',
    };
    format!("S{sign}{j}:{}", x.name(over))
}

/// All component isomorphisms of a decoration map, merged. Components have
/// disjoint cells, so the union is a function.
pub(crate) fn merged(h: &DecorationMap) -> Isomorphism {
    let mut out = Isomorphism {
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
    };
    for m in &h.matches {
        out.vertices.extend(m.iso.vertices.clone());
        out.edges.extend(m.iso.edges.clone());
    }
    out
}

struct Builder {
    graph: FiniteGraph,
    on_vertices: BTreeMap<Id, Id>,
    on_edges: BTreeMap<Id, Vec<SignedEdge>>,
    vertex_origin: BTreeMap<Id, Origin>,
    edge_origin: BTreeMap<Id, Origin>,
}

impl Builder {
    fn interior(&mut self, side: Side, x: &EndPeriodic, m: i64) -> Result<(), CouplingError> {
        let cells = CellGraph::blocks(x, -m, m)?;
        let tag = |n: &Id| format!("{}:{n}", side.tag());
        for (n, c) in &cells.vertex_cells {
            self.graph.add_vertex(tag(n))?;
            self.vertex_origin
                .insert(tag(n), Origin::Interior { side, cell: c.clone() });
        }
        for (n, ends) in cells.graph.edges() {
            self.graph.add_edge(tag(n), tag(&ends.tail), tag(&ends.head))?;
            let cell = cells.edge_cells[n].clone();
            self.edge_origin.insert(tag(n), Origin::Interior { side, cell });
        }
        // f = g away from block m.
        let shallow = |n: &Id| CouplingError::TruncationTooShallow(format!("image of `{n}` leaves Γ_{m}"));
        for (n, c) in &cells.vertex_cells {
            if c.block < m {
                let img = cells.vertex_name(&x.vertex_image(c)?).ok_or_else(|| shallow(n))?;
                self.on_vertices.insert(tag(n), tag(img));
            }
        }
        for (n, c) in &cells.edge_cells {
            if c.block < m {
                let (t, _) = x.edge_ends(c)?;
                let img = cells
                    .path_of(&x.vertex_image(&t)?, &x.edge_image(c)?)
                    .map_err(|_| shallow(n))?;
                let steps = img.steps.iter().map(|s| SignedEdge::new(tag(&s.edge), s.forward));
                self.on_edges.insert(tag(n), steps.collect());
            }
        }
        Ok(())
    }

    /// Block `m` of `x` flowing through the ideal neighborhoods into block
    /// `−m` of `y`, where `h` glues `∂₊` of `x` to `∂₋` of `y`.
    fn ideal(
        &mut self,
        side: Side,
        x: &EndPeriodic,
        y: &EndPeriodic,
        h: &DecorationMap,
        m: i64,
    ) -> Result<(), CouplingError> {
        let iso = merged(h);
        let other = side.other();
        let missing = |what: &str| CouplingError::IncompatibleDecoration(format!("`{what}` is not glued"));
        let kappa = |v: &Id| -> Result<Cell, CouplingError> {
            Ok(Cell::new(-m, iso.vertices.get(v).ok_or_else(|| missing(v))?))
        };
        let across = |e: &Id| -> Result<SignedEdge, CouplingError> {
            let s = iso.edges.get(e).ok_or_else(|| missing(e))?;
            Ok(SignedEdge::new(theta_name(other, y, &Cell::new(-m, &s.edge)), s.forward))
        };

        let (vs, es) = x.block_cells(m);
        for v in &vs {
            let img = theta_name(other, y, &kappa(&v.id)?);
            self.on_vertices.insert(theta_name(side, x, v), img);
        }
        for e in &es {
            let name = theta_name(side, x, e);
            if x.edge_kind(e) != Some(EdgeKind::Joining) {
                self.on_edges.insert(name, vec![across(&e.id)?]);
                continue;
            }
            let q = x.pos.joining[&e.id].period;
            let (tail, head) = x.edge_ends(e)?;
            // Column above ∂₀e_m on the left, g′-translates of κ(∂₁e_m) on
            // the right.
            let mut bottom = tail;
            let mut top = kappa(&head.id)?;
            let mut prev = name;
            for j in 1..=q {
                bottom = x.vertex_image(&bottom)?;
                if j > 1 {
                    top = y.vertex_image(&top)?;
                }
                let s = subdividing_name(side, x, e, j);
                self.graph.add_edge(
                    s.clone(),
                    theta_name(side, x, &bottom),
                    theta_name(other, y, &top),
                )?;
                self.edge_origin.insert(
                    s.clone(),
                    Origin::Subdividing {
                        side,
                        over: e.clone(),
                        index: j,
                    },
                );
                self.on_edges.insert(prev, vec![SignedEdge::forward(s.clone())]);
                prev = s;
            }
            self.on_edges.insert(prev, vec![across(&e.id)?]);
        }
        Ok(())
    }
}

/// The principal subgraph of the `h`-couple of `left` and `right`, cut off
/// at `m` on every boundary component, with its first return map.
pub fn couple(
    left: &EndPeriodic,
    right: &EndPeriodic,
    h: &Gluing,
    cfg: &CouplingConfig,
) -> Result<ThetaComplex, CouplingError> {
    let cutoff = cfg.resolve(left, right)?;
    h.check(left, right)?;
    let m = cutoff as i64;
    let mut b = Builder {
        graph: FiniteGraph::new(),
        on_vertices: BTreeMap::new(),
        on_edges: BTreeMap::new(),
        vertex_origin: BTreeMap::new(),
        edge_origin: BTreeMap::new(),
    };
    b.interior(Side::Left, left, m)?;
    b.interior(Side::Right, right, m)?;
    b.ideal(Side::Left, left, right, &h.plus, m)?;
    b.ideal(Side::Right, right, left, &h.minus, m)?;
    let f = GraphMap::from_steps(b.graph.clone(), b.graph.clone(), b.on_vertices, b.on_edges)?;
    Ok(ThetaComplex {
        left: left.clone(),
        right: right.clone(),
        gluing: h.clone(),
        cutoff,
        graph: b.graph,
        f,
        vertex_origin: b.vertex_origin,
        edge_origin: b.edge_origin,
    })
}

/// `φ∘σ` for a boundary-collapsed map and the inverse built over it: every
/// boundary component is a rose, identified with the component of the
/// inverse carried by the same block, with every joining petal reversed.
pub fn canonical_h(p: &EndPeriodic, inv: &HomotopyInverseResult) -> Result<Gluing, CouplingError> {
    let q = &inv.inverse;
    let half = |x: &EndPeriodic, y: &EndPeriodic| -> Result<DecorationMap, CouplingError> {
        let from = compute_boundary(x, Sign::Attracting)?;
        let to = compute_boundary(y, Sign::Repelling)?;
        collapsed(&from)?;
        collapsed(&to)?;
        let mut matches = Vec::new();
        for c in &from.components {
            let v = c.graph.vertices().next().expect("components are nonempty");
            let d = to
                .components
                .iter()
                .find(|d| d.graph.has_vertex(v))
                .ok_or_else(|| CouplingError::IncompatibleDecoration(format!("no partner for `{}`", c.leader)))?;
            let w = d.graph.vertices().next().expect("components are nonempty");
            let edges = c
                .graph
                .edge_ids()
                .map(|e| {
                    let joining = c.edge_class.get(e) == Some(&EdgeKind::Joining);
                    (e.clone(), SignedEdge::new(e.clone(), !joining))
                })
                .collect();
            matches.push(ComponentMatch {
                positive: c.leader.clone(),
                negative: d.leader.clone(),
                iso: Isomorphism {
                    vertices: BTreeMap::from([(v.clone(), w.clone())]),
                    edges,
                },
            });
        }
        Ok(DecorationMap { matches })
    };
    let h = Gluing {
        plus: half(p, q)?,
        minus: half(q, p)?,
    };
    h.check(p, q)?;
    Ok(h)
}

fn collapsed(b: &DecoratedBoundary) -> Result<(), CouplingError> {
    match b.components.iter().find(|c| c.graph.vertex_count() != 1) {
        Some(c) => Err(CouplingError::NotBoundaryCollapsed(c.leader.clone())),
        None => Ok(()),
    }
}

impl ThetaComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.euler_characteristic()
    }

    /// `1 − χ(Θ)`.
    pub fn rank(&self) -> i64 {
        1 - self.euler_characteristic()
    }

    pub fn model(&self, side: Side) -> &EndPeriodic {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// `S₊` for the left side, `S₋` for the right.
    pub fn subdividing(&self, side: Side) -> Vec<&Id> {
        self.edge_origin
            .iter()
            .filter(|(_, o)| matches!(o, Origin::Subdividing { side: s, .. } if *s == side))
            .map(|(n, _)| n)
            .collect()
    }

    /// Edges of `Θ` that are cells of block `k` on one side.
    pub fn block_edges(&self, side: Side, k: i64) -> Vec<&Id> {
        self.edge_origin
            .iter()
            .filter(|(_, o)| matches!(o, Origin::Interior { side: s, cell } if *s == side && cell.block == k))
            .map(|(n, _)| n)
            .collect()
    }

    /// Whether `f` agrees with `g` on `Δ − B_m` and with `g′` on
    /// `Δ′ − B′_m`, comparing against each map's own truncation.
    pub fn matches_constituents(&self) -> Result<bool, CouplingError> {
        let m = self.cutoff as usize;
        for side in [Side::Left, Side::Right] {
            let x = self.model(side);
            let t = unroll(x, m)?;
            let tag = |n: &str| format!("{}:{n}", side.tag());
            for (n, c) in &t.cells.vertex_cells {
                if c.block < m as i64 {
                    let Image::Vertex(img) = t.evaluate(n)? else { return Ok(false) };
                    if self.f.vertex(&tag(n))? != &tag(&img) {
                        return Ok(false);
                    }
                }
            }
            for (n, c) in &t.cells.edge_cells {
                if c.block < m as i64 {
                    let Image::Path(img) = t.evaluate(n)? else { return Ok(false) };
                    let got = self.f.edge(&tag(n))?;
                    let want: Vec<SignedEdge> = img
                        .steps
                        .iter()
                        .map(|s| SignedEdge::new(tag(&s.edge), s.forward))
                        .collect();
                    if got.steps != want {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Whether `f` restricts to an isomorphism `cl(B_m ∪ S₊) → cl(B′₋ₘ ∪ S₊)`
    /// (for `Left`) or `cl(B′_m ∪ S₋) → cl(B₋ₘ ∪ S₋)` (for `Right`).
    pub fn restricts_to_isomorphism(&self, side: Side) -> bool {
        let m = self.cutoff as i64;
        let s: BTreeSet<&Id> = self.subdividing(side).into_iter().collect();
        let domain: BTreeSet<&Id> = self.block_edges(side, m).into_iter().chain(s.iter().copied()).collect();
        let codomain: BTreeSet<&Id> = self
            .block_edges(side.other(), -m)
            .into_iter()
            .chain(s.iter().copied())
            .collect();
        let closure = |es: &BTreeSet<&Id>| -> BTreeSet<Id> {
            es.iter()
                .flat_map(|e| {
                    let ends = self.graph.ends(e).expect("edges of Θ");
                    [ends.tail.clone(), ends.head.clone()]
                })
                .collect()
        };
        let mut hit = BTreeSet::new();
        for e in &domain {
            match self.f.on_edges[*e].steps.as_slice() {
                [s] if codomain.contains(&s.edge) && hit.insert(s.edge.clone()) => {}
                _ => return false,
            }
        }
        let (vd, vc) = (closure(&domain), closure(&codomain));
        let images: BTreeSet<&Id> = vd.iter().map(|v| &self.f.on_vertices[v]).collect();
        hit.len() == codomain.len() && images.len() == vd.len() && images.into_iter().eq(vc.iter())
    }

    pub fn to_json(&self) -> String {
        let file = ThetaFile {
            cutoff: self.cutoff,
            left: self.left.presentation().clone(),
            right: self.right.presentation().clone(),
            gluing: self.gluing.clone(),
            graph: self.graph.clone(),
            on_vertices: self.f.on_vertices.clone(),
            on_edges: self
                .f
                .on_edges
                .iter()
                .map(|(e, p)| (e.clone(), p.steps.clone()))
                .collect(),
            vertex_origin: self.vertex_origin.clone(),
            edge_origin: self.edge_origin.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable") + "\n"
    }

    /// Reads a stored complex as is. The stored `f` is kept, not rebuilt,
    /// so that it can be checked against the oracle.
    pub fn from_json(text: &str) -> Result<Self, CouplingError> {
        let file: ThetaFile = serde_json::from_str(text).map_err(|e| CouplingError::Parse(e.to_string()))?;
        let left = EndPeriodic::new(file.left)?;
        let right = EndPeriodic::new(file.right)?;
        let f = GraphMap::from_steps(file.graph.clone(), file.graph.clone(), file.on_vertices, file.on_edges)?;
        Ok(ThetaComplex {
            left,
            right,
            gluing: file.gluing,
            cutoff: file.cutoff,
            graph: file.graph,
            f,
            vertex_origin: file.vertex_origin,
            edge_origin: file.edge_origin,
        })
    }

    /// `Θ` as DOT, subdividing edges in red.
    pub fn to_dot(&self, name: &str) -> String {
        let styles = self
            .edge_origin
            .iter()
            .filter(|(_, o)| matches!(o, Origin::Subdividing { .. }))
            .map(|(e, _)| {
                (
                    e.clone(),
                    graph_core::DotEdgeStyle {
                        color: Some("red".into()),
                        ..Default::default()
                    },
                )
            })
            .collect();
        graph_core::to_dot(&self.graph, name, &styles)
    }
}

#[derive(Serialize, Deserialize)]
struct ThetaFile {
    cutoff: u32,
    left: Presentation,
    right: Presentation,
    gluing: Gluing,
    graph: FiniteGraph,
    on_vertices: BTreeMap<Id, Id>,
    on_edges: BTreeMap<Id, Vec<SignedEdge>>,
    vertex_origin: BTreeMap<Id, Origin>,
    edge_origin: BTreeMap<Id, Origin>,
}
