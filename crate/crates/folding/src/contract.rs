//! Maps that collapse edges. Contracting a forest is a homotopy
//! equivalence, so a map collapsing a forest factors through the quotient
//! by that forest and is certified there. A collapsed cycle kills a loop.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use graph_core::{EdgePath, FiniteGraph, GraphMap, Id, SignedEdge};
use serde::Serialize;

use crate::{check_valence, fold_decompose, Certificate, Failure, FoldError, FoldSequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contraction {
    /// Domain onto the domain with `forest` contracted and `loops` removed.
    pub quotient: GraphMap,
    /// Collapsed edges forming a forest, contracted.
    pub forest: Vec<Id>,
    /// Collapsed edges closing a cycle of collapsed edges.
    pub loops: Vec<Id>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractedCertificate {
    pub contraction: Contraction,
    /// Certificate of the induced map on the quotient. Its verdict is
    /// false whenever `contraction.loops` is nonempty.
    pub certificate: Certificate,
}

impl ContractedCertificate {
    pub fn verdict(&self) -> bool {
        self.certificate.verdict
    }

    pub fn witness(&self) -> &FoldSequence {
        &self.certificate.witness
    }

    /// As [`FoldSequence::lift`], for vertices of the original domain.
    /// Forest paths are threaded back in between the lifted edges.
    pub fn lift(&self, path: &EdgePath, start: &Id, end: &Id) -> Result<EdgePath, FoldError> {
        if !self.verdict() {
            return Err(FoldError::NotInvertible);
        }
        let q = &self.contraction.quotient;
        let inner = self.witness().lift(path, q.vertex(start)?, q.vertex(end)?)?;
        let g = &q.domain;
        let forest = g.edge_subgraph(&self.contraction.forest);
        let mut steps = Vec::new();
        let mut at = start.clone();
        for s in &inner.steps {
            let tail = g.signed_tail(s)?;
            steps.extend(forest_path(&forest, &at, tail));
            steps.push(s.clone());
            at = g.signed_head(s)?.clone();
        }
        steps.extend(forest_path(&forest, &at, end));
        Ok(EdgePath::from_steps(g, start.clone(), steps)?)
    }
}

/// The unique path between two vertices of one tree of `forest`.
fn forest_path(forest: &FiniteGraph, from: &Id, to: &Id) -> Vec<SignedEdge> {
    if from == to {
        return Vec::new();
    }
    let mut back: BTreeMap<Id, SignedEdge> = BTreeMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    let mut seen = BTreeSet::from([from.clone()]);
    while let Some(v) = queue.pop_front() {
        if v == *to {
            break;
        }
        for s in forest.star(&v) {
            let w = forest.signed_head(&s).expect("star edges exist").clone();
            if seen.insert(w.clone()) {
                back.insert(w.clone(), s);
                queue.push_back(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut v = to.clone();
    while v != *from {
        let s = back[&v].clone();
        v = forest.signed_tail(&s).expect("star edges exist").clone();
        out.push(s);
    }
    out.reverse();
    out
}

fn find(parent: &mut BTreeMap<Id, Id>, v: &Id) -> Id {
    let p = parent[v].clone();
    if p == *v {
        return p;
    }
    let root = find(parent, &p);
    parent.insert(v.clone(), root.clone());
    root
}

/// Splits the collapsed edges of `m` into a forest and cycle-closing loops,
/// and factors `m` through the contraction of the forest.
pub fn contract_collapsed(m: &GraphMap) -> Result<(Contraction, GraphMap), FoldError> {
    let g = &m.domain;
    let mut parent: BTreeMap<Id, Id> = g.vertices().map(|v| (v.clone(), v.clone())).collect();
    let (mut forest, mut loops) = (Vec::new(), Vec::new());
    for e in m.collapsed_edges() {
        let ends = g.ends_of(e)?;
        let (a, b) = (find(&mut parent, &ends.tail), find(&mut parent, &ends.head));
        if a == b {
            loops.push(e.clone());
        } else {
            // Keep the least vertex of each tree as its representative.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent.insert(hi, lo);
            forest.push(e.clone());
        }
    }
    let rep: BTreeMap<Id, Id> = g
        .vertices()
        .map(|v| (v.clone(), find(&mut parent, v)))
        .collect();
    let dropped: BTreeSet<&Id> = forest.iter().chain(&loops).collect();
    let mut small = FiniteGraph::new();
    for r in rep.values() {
        small.ensure_vertex(r.clone());
    }
    let mut on_edges = BTreeMap::new();
    let mut steps = BTreeMap::new();
    for (e, ends) in g.edges() {
        if dropped.contains(e) {
            on_edges.insert(e.clone(), Vec::new());
            continue;
        }
        small.add_edge(e.clone(), rep[&ends.tail].clone(), rep[&ends.head].clone())?;
        on_edges.insert(e.clone(), vec![SignedEdge::forward(e.clone())]);
        steps.insert(e.clone(), m.edge(e)?.steps.clone());
    }
    let quotient = GraphMap::from_steps(g.clone(), small.clone(), rep.clone(), on_edges)?;
    let on_vertices = rep.values().map(|r| Ok((r.clone(), m.vertex(r)?.clone()))).collect::<Result<_, FoldError>>()?;
    let induced = GraphMap::from_steps(small, m.codomain.clone(), on_vertices, steps)?;
    Ok((
        Contraction {
            quotient,
            forest,
            loops,
        },
        induced,
    ))
}

/// Certifies a map that may collapse edges. The domain must have no
/// valence-one vertices; the verdict is false when a cycle is collapsed.
pub fn certify_contracting(m: &GraphMap) -> Result<ContractedCertificate, FoldError> {
    check_valence(&m.domain)?;
    contract_and_fold(m)
}

pub(crate) fn contract_and_fold(m: &GraphMap) -> Result<ContractedCertificate, FoldError> {
    let (contraction, induced) = contract_collapsed(m)?;
    let mut certificate = Certificate::of(fold_decompose(&induced)?);
    if let Some(e) = contraction.loops.first() {
        certificate.verdict = false;
        certificate.failure = Some(Failure::CollapsedLoop(e.clone()));
    }
    Ok(ContractedCertificate {
        contraction,
        certificate,
    })
}
