//! Stallings folding of graph maps, and homotopy-equivalence certificates
//! for finite maps and for end-periodic maps.

mod contract;
mod periodic;

use std::collections::BTreeMap;
use std::fmt;

use graph_core::{
    reduce_path, subdivide_for, EdgePath, FiniteGraph, GraphError, GraphMap, Id, SignedEdge,
};
use rand::Rng;
use serde::Serialize;

pub use contract::{certify_contracting, contract_collapsed, ContractedCertificate, Contraction};
pub use periodic::{
    certify_end_periodic_contracting, fold_decompose_end_periodic, fold_end_periodic_shuffled,
    fold_window, window_map, EndPeriodicFolds,
};

#[derive(Debug, thiserror::Error)]
pub enum FoldError {
    #[error("edge `{0}` is collapsed by the map")]
    CollapsedEdge(Id),
    #[error("vertices of valence one: {}", .0.join(", "))]
    Valence1Vertex(Vec<Id>),
    #[error("cannot lift through a fold sequence that is not a homotopy equivalence")]
    NotInvertible,
    #[error("path cannot be lifted: {0}")]
    Lift(String),
    #[error(transparent)]
    Model(#[from] ep_model::EpError),
    #[error(transparent)]
    Graph(GraphError),
}

impl From<GraphError> for FoldError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CollapsedEdge(e) => FoldError::CollapsedEdge(e),
            other => FoldError::Graph(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldKind {
    /// The two heads differ and are identified.
    Type1,
    /// The heads already agree; a loop dies.
    Type2,
}

impl fmt::Display for FoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldKind::Type1 => "type1",
            FoldKind::Type2 => "type2",
        })
    }
}

/// One fold: `second` is identified with `kept`, which shares its tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldStep {
    pub kept: SignedEdge,
    pub second: SignedEdge,
    pub kind: FoldKind,
    pub quotient: GraphMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalKind {
    Immersion,
    Homeomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldSequence {
    /// The input map made combinatorial by subdivision.
    pub start: GraphMap,
    /// Original edge → pieces of the subdivided domain.
    pub pieces: BTreeMap<Id, Vec<Id>>,
    pub steps: Vec<FoldStep>,
    /// An immersion from the last quotient.
    pub terminal: GraphMap,
    pub terminal_kind: TerminalKind,
}

impl FoldSequence {
    /// The quotients followed by the terminal map, which must equal `start`.
    pub fn compose(&self) -> Result<GraphMap, GraphError> {
        let mut acc = GraphMap::identity(&self.start.domain);
        for s in &self.steps {
            acc = acc.then(&s.quotient)?;
        }
        acc.then(&self.terminal)
    }

    /// A path of the domain mapping to `path` up to homotopy rel
    /// endpoints, from `start` to `end` (vertices of the unsubdivided domain
    /// over the ends of `path`). Each type-1 fold is undone by routing
    /// through its two identified edges where the merged vertex splits.
    pub fn lift(&self, path: &EdgePath, start: &Id, end: &Id) -> Result<EdgePath, FoldError> {
        if !self.all_type1() || self.terminal_kind != TerminalKind::Homeomorphism {
            return Err(FoldError::NotInvertible);
        }
        // Where the requested endpoints sit at every stage.
        let mut starts = vec![start.clone()];
        let mut ends = vec![end.clone()];
        for s in &self.steps {
            starts.push(s.quotient.vertex(starts.last().unwrap())?.clone());
            ends.push(s.quotient.vertex(ends.last().unwrap())?.clone());
        }
        let k = self.steps.len();
        let t = &self.terminal;
        if t.vertex(&starts[k])? != &path.start || t.vertex(&ends[k])? != &path.end {
            return Err(FoldError::Lift(format!("{path} does not run between the images")));
        }
        let back: BTreeMap<&Id, SignedEdge> = t
            .edge_images()
            .expect("terminal map is combinatorial")
            .into_iter()
            .map(|(e, img)| (&img.edge, SignedEdge::new(e.clone(), img.forward)))
            .collect();
        let mut steps: Vec<SignedEdge> = Vec::with_capacity(path.len());
        for s in &path.steps {
            let e = back
                .get(&s.edge)
                .ok_or_else(|| FoldError::Lift(format!("`{}` is not hit", s.edge)))?;
            steps.push(if s.forward { e.clone() } else { e.reversed() });
        }
        for (i, fold) in self.steps.iter().enumerate().rev() {
            steps = unfold(fold, &steps, &starts[i], &ends[i])?;
        }
        let lifted = reduce_path(&EdgePath {
            start: start.clone(),
            end: end.clone(),
            steps,
        });
        self.join_pieces(lifted)
    }

    /// Rewrites a reduced path in the subdivided domain in original edges.
    fn join_pieces(&self, p: EdgePath) -> Result<EdgePath, FoldError> {
        let mut owner: BTreeMap<&Id, (&Id, usize, usize)> = BTreeMap::new();
        for (e, pieces) in &self.pieces {
            for (i, piece) in pieces.iter().enumerate() {
                owner.insert(piece, (e, i, pieces.len()));
            }
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < p.steps.len() {
            let s = &p.steps[i];
            let &(e, at, k) = owner
                .get(&s.edge)
                .ok_or_else(|| FoldError::Lift(format!("unknown piece `{}`", s.edge)))?;
            let first = if s.forward { 0 } else { k - 1 };
            if at != first || i + k > p.steps.len() {
                return Err(FoldError::Lift(format!("path stops inside `{e}`")));
            }
            out.push(SignedEdge::new(e.clone(), s.forward));
            i += k;
        }
        Ok(EdgePath {
            start: p.start,
            end: p.end,
            steps: out,
        })
    }

    pub fn all_type1(&self) -> bool {
        self.steps.iter().all(|s| s.kind == FoldKind::Type1)
    }

    pub fn first_type2(&self) -> Option<usize> {
        self.steps.iter().position(|s| s.kind == FoldKind::Type2)
    }

    /// One line per fold, then the terminal kind.
    pub fn log(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{:>3}  {} ~ {}  {}\n", i + 1, s.kept, s.second, s.kind));
        }
        out.push_str(&format!(
            "terminal: {}\n",
            match self.terminal_kind {
                TerminalKind::Immersion => "immersion",
                TerminalKind::Homeomorphism => "homeomorphism",
            }
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Failure {
    /// Index into the fold steps.
    Type2Fold(usize),
    NotBijective,
    /// A collapsed edge closes a cycle of collapsed edges.
    CollapsedLoop(Id),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdict: bool,
    pub witness: FoldSequence,
    pub failure: Option<Failure>,
}

impl Certificate {
    fn of(witness: FoldSequence) -> Self {
        let failure = match witness.first_type2() {
            Some(i) => Some(Failure::Type2Fold(i)),
            None if witness.terminal_kind != TerminalKind::Homeomorphism => {
                Some(Failure::NotBijective)
            }
            None => None,
        };
        Certificate {
            verdict: failure.is_none(),
            witness,
            failure,
        }
    }
}

/// Folds the least offending pair first.
pub fn fold_decompose(m: &GraphMap) -> Result<FoldSequence, FoldError> {
    fold_with(m, |_| 0)
}

/// Folds a uniformly random offending pair at each step.
pub fn fold_decompose_shuffled<R: Rng>(m: &GraphMap, rng: &mut R) -> Result<FoldSequence, FoldError> {
    fold_with(m, |n| rng.gen_range(0..n))
}

pub fn certify_homotopy_equivalence(m: &GraphMap) -> Result<Certificate, FoldError> {
    check_valence(&m.domain)?;
    Ok(Certificate::of(fold_decompose(m)?))
}

/// Certificate from a fold sequence taken in random order.
pub fn certify_shuffled<R: Rng>(m: &GraphMap, rng: &mut R) -> Result<Certificate, FoldError> {
    check_valence(&m.domain)?;
    Ok(Certificate::of(fold_decompose_shuffled(m, rng)?))
}

fn check_valence(g: &FiniteGraph) -> Result<(), FoldError> {
    let ones: Vec<Id> = g.vertices().filter(|v| g.valence(v) == 1).cloned().collect();
    if ones.is_empty() {
        Ok(())
    } else {
        Err(FoldError::Valence1Vertex(ones))
    }
}

/// The working state: a graph with a combinatorial map to a fixed codomain.
struct State {
    graph: FiniteGraph,
    vertices: BTreeMap<Id, Id>,
    edges: BTreeMap<Id, SignedEdge>,
}

impl State {
    /// Pairs of distinct directions with a common tail and a common image,
    /// sorted by tail and then by the directions themselves.
    fn offending(&self) -> Vec<(SignedEdge, SignedEdge)> {
        let mut groups: BTreeMap<(&Id, SignedEdge), Vec<SignedEdge>> = BTreeMap::new();
        for (e, ends) in self.graph.edges() {
            let img = &self.edges[e];
            groups
                .entry((&ends.tail, img.clone()))
                .or_default()
                .push(SignedEdge::forward(e.clone()));
            groups
                .entry((&ends.head, img.reversed()))
                .or_default()
                .push(SignedEdge::backward(e.clone()));
        }
        let mut out = Vec::new();
        for mut dirs in groups.into_values() {
            dirs.sort();
            for i in 0..dirs.len() {
                for j in i + 1..dirs.len() {
                    out.push((dirs[i].clone(), dirs[j].clone()));
                }
            }
        }
        out
    }

    fn fold(&mut self, kept: SignedEdge, second: SignedEdge) -> Result<FoldStep, GraphError> {
        let head_of = |s: &SignedEdge| self.graph.signed_head(s).cloned();
        let (h1, h2) = (head_of(&kept)?, head_of(&second)?);
        let kind = if h1 == h2 {
            FoldKind::Type2
        } else {
            FoldKind::Type1
        };
        let rename = |v: &Id| if *v == h2 { h1.clone() } else { v.clone() };

        let mut next = FiniteGraph::new();
        for v in self.graph.vertices() {
            if kind == FoldKind::Type2 || *v != h2 {
                next.add_vertex(v.clone())?;
            }
        }
        for (e, ends) in self.graph.edges() {
            if *e != second.edge {
                next.add_edge(e.clone(), rename(&ends.tail), rename(&ends.head))?;
            }
        }

        let on_vertices = self.graph.vertices().map(|v| (v.clone(), rename(v))).collect();
        let mut steps = BTreeMap::new();
        for e in self.graph.edge_ids() {
            let s = if *e == second.edge {
                if second.forward {
                    kept.clone()
                } else {
                    kept.reversed()
                }
            } else {
                SignedEdge::forward(e.clone())
            };
            steps.insert(e.clone(), vec![s]);
        }
        let quotient = GraphMap::from_steps(self.graph.clone(), next.clone(), on_vertices, steps)?;

        self.graph = next;
        if kind == FoldKind::Type1 {
            self.vertices.remove(&h2);
        }
        self.edges.remove(&second.edge);
        Ok(FoldStep {
            kept,
            second,
            kind,
            quotient,
        })
    }

    fn to_map(&self, codomain: &FiniteGraph) -> Result<GraphMap, GraphError> {
        let steps = self
            .edges
            .iter()
            .map(|(e, s)| (e.clone(), vec![s.clone()]))
            .collect();
        GraphMap::from_steps(self.graph.clone(), codomain.clone(), self.vertices.clone(), steps)
    }
}

fn fold_with(m: &GraphMap, mut choose: impl FnMut(usize) -> usize) -> Result<FoldSequence, FoldError> {
    let sub = subdivide_for(m)?;
    let start = sub.map.clone();
    let mut state = State {
        graph: sub.graph.clone(),
        vertices: start.on_vertices.clone(),
        edges: start
            .edge_images()
            .expect("subdivision is combinatorial")
            .into_iter()
            .map(|(e, s)| (e.clone(), s.clone()))
            .collect(),
    };
    let mut steps = Vec::new();
    loop {
        let pairs = state.offending();
        if pairs.is_empty() {
            break;
        }
        let (kept, second) = pairs[choose(pairs.len())].clone();
        steps.push(state.fold(kept, second)?);
    }
    let terminal = state.to_map(&m.codomain)?;
    let terminal_kind = if terminal.is_isomorphism() {
        TerminalKind::Homeomorphism
    } else {
        TerminalKind::Immersion
    };
    Ok(FoldSequence {
        start,
        pieces: sub.pieces,
        steps,
        terminal,
        terminal_kind,
    })
}

/// Lifts a path through one type-1 fold, starting at `start` and ending
/// at `end` in the fold's domain.
fn unfold(
    fold: &FoldStep,
    steps: &[SignedEdge],
    start: &Id,
    end: &Id,
) -> Result<Vec<SignedEdge>, FoldError> {
    let g = &fold.quotient.domain;
    let h1 = g.signed_head(&fold.kept)?.clone();
    let h2 = g.signed_head(&fold.second)?.clone();
    let bridge = |from: &Id, to: &Id| -> Result<Vec<SignedEdge>, FoldError> {
        if from == to {
            Ok(Vec::new())
        } else if *from == h1 && *to == h2 {
            Ok(vec![fold.kept.reversed(), fold.second.clone()])
        } else if *from == h2 && *to == h1 {
            Ok(vec![fold.second.reversed(), fold.kept.clone()])
        } else {
            Err(FoldError::Lift(format!("cannot pass from `{from}` to `{to}`")))
        }
    };
    let mut out = Vec::with_capacity(steps.len() + 2);
    let mut at = start.clone();
    for s in steps {
        let tail = g.signed_tail(s)?.clone();
        out.extend(bridge(&at, &tail)?);
        out.push(s.clone());
        at = g.signed_head(s)?.clone();
    }
    out.extend(bridge(&at, end)?);
    Ok(out)
}

/// The image of an original edge, read back through the subdivision.
pub fn spelled_image(seq: &FoldSequence, e: &str) -> Option<EdgePath> {
    let pieces = seq.pieces.get(e)?;
    let first = seq.start.on_edges.get(pieces.first()?)?;
    let mut out = EdgePath::trivial(first.start.clone());
    for p in pieces {
        out = out.concat(seq.start.on_edges.get(p)?)?;
    }
    Some(out)
}
