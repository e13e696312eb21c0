use ep_model::{is_proper, CellGraph, EndPeriodic};
use graph_core::GraphMap;
use rand::Rng;
use serde::Serialize;

use crate::{
    contract::contract_and_fold, fold_decompose, fold_decompose_shuffled, Certificate, ContractedCertificate,
    FoldError,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndPeriodicFolds {
    /// Proper core level; the window runs from block `−level−1` to `level`.
    pub level: usize,
    /// The tightened map from the window into blocks `−level..=level+1`.
    pub map: GraphMap,
    pub certificate: Certificate,
}

/// `g` restricted to blocks `−N−1..=N`, with images in `−N..=N+1` and
/// tightened. Outside these windows `g` is a block shift, so it is a
/// homotopy equivalence exactly when this restriction folds onto its
/// codomain.
pub fn fold_window(p: &EndPeriodic) -> Result<(usize, GraphMap), FoldError> {
    let n = if is_proper(p) { 0 } else { 1 };
    Ok((n, window_map(p, n)?))
}

/// The tightened restriction of `g` to blocks `−n−1..=n`, into `−n..=n+1`.
/// Needs `n` at least the proper core level.
pub fn window_map(p: &EndPeriodic, n: usize) -> Result<GraphMap, FoldError> {
    let m = window(p, n)?;
    if let Some(e) = m.collapsed_edges().first() {
        return Err(FoldError::CollapsedEdge((*e).clone()));
    }
    Ok(m)
}

fn window(p: &EndPeriodic, n: usize) -> Result<GraphMap, FoldError> {
    let n = n as i64;
    let domain = CellGraph::blocks(p, -n - 1, n)?;
    let codomain = CellGraph::blocks(p, -n, n + 1)?;
    Ok(domain.map_into(p, &codomain)?.reduced())
}

/// As [`fold_decompose_end_periodic`] for maps that may collapse edges of
/// the window; the collapsed forest is contracted before folding.
pub fn certify_end_periodic_contracting(p: &EndPeriodic) -> Result<ContractedCertificate, FoldError> {
    let ones = p.valence_one_vertices();
    if !ones.is_empty() {
        return Err(FoldError::Valence1Vertex(ones));
    }
    let n = if is_proper(p) { 0 } else { 1 };
    contract_and_fold(&window(p, n)?)
}

fn check(p: &EndPeriodic) -> Result<(usize, GraphMap), FoldError> {
    let ones = p.valence_one_vertices();
    if !ones.is_empty() {
        return Err(FoldError::Valence1Vertex(ones));
    }
    fold_window(p)
}

pub fn fold_decompose_end_periodic(p: &EndPeriodic) -> Result<EndPeriodicFolds, FoldError> {
    let (level, map) = check(p)?;
    let certificate = Certificate::of(fold_decompose(&map)?);
    Ok(EndPeriodicFolds {
        level,
        map,
        certificate,
    })
}

/// As [`fold_decompose_end_periodic`], folding in random order.
pub fn fold_end_periodic_shuffled<R: Rng>(
    p: &EndPeriodic,
    rng: &mut R,
) -> Result<EndPeriodicFolds, FoldError> {
    let (level, map) = check(p)?;
    let certificate = Certificate::of(fold_decompose_shuffled(&map, rng)?);
    Ok(EndPeriodicFolds {
        level,
        map,
        certificate,
    })
}
