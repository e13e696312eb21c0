//! Seeded random end-periodic homotopy equivalences, grown from a small
//! seed by elementary edits that each preserve the homotopy type of the map.
//! Every intermediate presentation is validated; an edit that fails
//! validation is dropped.

use std::collections::BTreeSet;

use graph_core::{reduce_path, EdgePath, Id, SignedEdge};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::core::rebase;
use crate::model::EndPeriodic;
use crate::schema::{BlockEdge, BlockVertex, EdgeKind, EndRecord, Presentation, Sign};

/// The fixed core vertex every lane and loop hangs from.
pub const HUB: &str = "o";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edit {
    /// A new loop at the hub, fixed by the map.
    AddLoop,
    /// Precompose with a Nielsen move on two hub loops.
    Nielsen,
    /// A ray to a new attracting end and a ray from a new repelling end.
    LanePair { with_loops: bool },
    /// Split a core edge whose image has length at least two.
    Subdivide,
    /// Enlarge the core by one block on each side.
    Rebase,
}

const EDITS: [Edit; 6] = [
    Edit::AddLoop,
    Edit::Nielsen,
    Edit::Nielsen,
    Edit::LanePair { with_loops: false },
    Edit::LanePair { with_loops: true },
    Edit::Subdivide,
];

/// A hub with one fixed loop and one pair of lanes.
pub fn seed() -> Presentation {
    let text = r#"{
      "core": { "vertices": ["o"], "edges": [{ "id": "r0", "tail": "o", "head": "o" }] },
      "ends": [],
      "map": { "vertices": { "o": "o" }, "edges": { "r0": ["r0"] } }
    }"#;
    let p = Presentation::from_json(text).expect("seed parses");
    apply(&p, Edit::LanePair { with_loops: false }, &mut rand::rngs::mock::StepRng::new(0, 0))
        .expect("seed lane validates")
}

/// `edits` random edits on top of [`seed`]. Rebasing is used at most once.
pub fn random_presentation<R: Rng>(rng: &mut R, edits: usize) -> EndPeriodic {
    let mut p = seed();
    let mut rebased = false;
    for _ in 0..edits {
        let edit = if !rebased && rng.gen_ratio(1, 8) {
            rebased = true;
            Edit::Rebase
        } else {
            *EDITS.choose(rng).unwrap()
        };
        if let Some(next) = apply(&p, edit, rng) {
            p = next;
        }
    }
    EndPeriodic::new(p).expect("edits keep presentations valid")
}

/// Applies one edit, returning `None` when it does not apply or the result
/// fails validation.
pub fn apply<R: Rng>(p: &Presentation, edit: Edit, rng: &mut R) -> Option<Presentation> {
    let out = match edit {
        Edit::AddLoop => add_loop(p),
        Edit::Nielsen => nielsen(p, rng),
        Edit::LanePair { with_loops } => lane_pair(p, with_loops, rng),
        Edit::Subdivide => subdivide(p, rng),
        Edit::Rebase => {
            let m = EndPeriodic::new(p.clone()).ok()?;
            return rebase(&m).ok().map(|q| q.presentation().clone());
        }
    }?;
    EndPeriodic::new(out.clone()).ok().map(|_| out)
}

struct Names(BTreeSet<Id>);

impl Names {
    fn of(p: &Presentation) -> Self {
        let mut s: BTreeSet<Id> = p.core.vertices().cloned().collect();
        s.extend(p.core.edge_ids().cloned());
        for b in [&p.block_pos, &p.block_neg] {
            s.extend(b.vertices.iter().map(|v| v.id.clone()));
            s.extend(b.edges.iter().map(|e| e.id.clone()));
        }
        s.extend(p.ends.iter().map(|e| e.id.clone()));
        Names(s)
    }

    fn fresh(&mut self, prefix: &str) -> Id {
        let mut i = 0;
        loop {
            let name = format!("{prefix}{i}");
            if self.0.insert(name.clone()) {
                return name;
            }
            i += 1;
        }
    }
}

fn hub_loops(p: &Presentation) -> Vec<Id> {
    p.core
        .edges()
        .filter(|(_, ends)| ends.tail == HUB && ends.head == HUB)
        .map(|(e, _)| e.clone())
        .collect()
}

fn add_loop(p: &Presentation) -> Option<Presentation> {
    let mut q = p.clone();
    let mut names = Names::of(p);
    let r = names.fresh("r");
    q.core.add_edge(r.clone(), HUB, HUB).ok()?;
    q.map.edges.insert(r.clone(), vec![SignedEdge::forward(r)]);
    Some(q)
}

fn nielsen<R: Rng>(p: &Presentation, rng: &mut R) -> Option<Presentation> {
    let loops = hub_loops(p);
    if loops.len() < 2 {
        return None;
    }
    let pair: Vec<&Id> = loops.choose_multiple(rng, 2).collect();
    let (a, b) = (pair[0], pair[1]);
    let mut steps = p.map.edges[a].clone();
    let gb = &p.map.edges[b];
    if rng.gen_bool(0.5) {
        steps.extend(gb.iter().cloned());
    } else {
        steps.extend(gb.iter().rev().map(SignedEdge::reversed));
    }
    let reduced = reduce_steps(HUB, steps);
    let mut q = p.clone();
    q.map.edges.insert(a.clone(), reduced);
    Some(q)
}

fn reduce_steps(start: &str, steps: Vec<SignedEdge>) -> Vec<SignedEdge> {
    reduce_path(&EdgePath {
        start: start.to_string(),
        end: start.to_string(),
        steps,
    })
    .steps
}

fn lane_pair<R: Rng>(p: &Presentation, with_loops: bool, rng: &mut R) -> Option<Presentation> {
    let loops = hub_loops(p);
    let anchor_loop = loops.choose(rng)?.clone();
    let mut q = p.clone();
    let mut names = Names::of(p);
    let fwd = SignedEdge::forward;

    // Attracting lane: hub -t-> c -ep-> p@1 -> p@2 …
    let (end_pos, c, t, pv, ep) = (
        names.fresh("E"),
        names.fresh("c"),
        names.fresh("t"),
        names.fresh("p"),
        names.fresh("ep"),
    );
    q.ends.push(EndRecord {
        id: end_pos.clone(),
        sign: Sign::Attracting,
        period: 1,
        orbit_leader: end_pos.clone(),
    });
    q.core.add_vertex(c.clone()).ok()?;
    q.core.add_edge(t.clone(), HUB, c.clone()).ok()?;
    q.block_pos.vertices.push(BlockVertex {
        id: pv.clone(),
        end: end_pos.clone(),
    });
    q.block_pos.edges.push(joining(&ep, &c, &pv, &end_pos));
    q.map.vertices.insert(c.clone(), pv.clone());
    q.map.edges.insert(t.clone(), vec![fwd(t.clone()), fwd(ep.clone())]);

    // Repelling lane: … n@-1 -en-> d <-u- hub, with u wrapped onto a hub loop.
    let (end_neg, d, u, nv, en) = (
        names.fresh("E"),
        names.fresh("d"),
        names.fresh("u"),
        names.fresh("n"),
        names.fresh("en"),
    );
    q.ends.push(EndRecord {
        id: end_neg.clone(),
        sign: Sign::Repelling,
        period: 1,
        orbit_leader: end_neg.clone(),
    });
    q.core.add_vertex(d.clone()).ok()?;
    q.core.add_edge(u.clone(), HUB, d.clone()).ok()?;
    q.block_neg.vertices.push(BlockVertex {
        id: nv.clone(),
        end: end_neg.clone(),
    });
    q.block_neg.edges.push(joining(&en, &d, &nv, &end_neg));
    q.map.vertices.insert(d.clone(), HUB.to_string());
    q.map.vertices.insert(nv.clone(), d.clone());
    q.map.edges.insert(en.clone(), vec![fwd(u.clone())]);
    q.map.edges.insert(u.clone(), p.map.edges[&anchor_loop].clone());

    if with_loops {
        // Loops travel …  m@-1 → mu → nu → t·lam·t⁻¹ → l@1 → l@2 …
        let (lam, l, mu, nu, m) = (
            names.fresh("lam"),
            names.fresh("l"),
            names.fresh("mu"),
            names.fresh("nu"),
            names.fresh("m"),
        );
        q.core.add_edge(lam.clone(), c.clone(), c.clone()).ok()?;
        q.core.add_edge(mu.clone(), d.clone(), d.clone()).ok()?;
        q.core.add_edge(nu.clone(), HUB, HUB).ok()?;
        q.block_pos.edges.push(BlockEdge {
            id: l.clone(),
            tail: pv.clone(),
            head: pv,
            end: end_pos,
            kind: EdgeKind::Subgraph,
        });
        q.block_neg.edges.push(BlockEdge {
            id: m.clone(),
            tail: nv.clone(),
            head: nv,
            end: end_neg,
            kind: EdgeKind::Subgraph,
        });
        q.map.edges.insert(lam.clone(), vec![fwd(l)]);
        q.map.edges.insert(m, vec![fwd(mu.clone())]);
        q.map.edges.insert(mu, vec![fwd(nu.clone())]);
        q.map.edges.insert(
            nu,
            vec![fwd(t.clone()), fwd(lam), SignedEdge::backward(t)],
        );
    }
    Some(q)
}

fn joining(id: &str, tail: &str, head: &str, end: &str) -> BlockEdge {
    BlockEdge {
        id: id.to_string(),
        tail: tail.to_string(),
        head: head.to_string(),
        end: end.to_string(),
        kind: EdgeKind::Joining,
    }
}

fn subdivide<R: Rng>(p: &Presentation, rng: &mut R) -> Option<Presentation> {
    let m = EndPeriodic::new(p.clone()).ok()?;
    // Edges hit by block −1 must stay whole.
    let protected: BTreeSet<Id> = m
        .neg
        .edge_ids()
        .iter()
        .flat_map(|e| p.map.edges[e].iter().map(|s| s.edge.clone()))
        .collect();
    let candidates: Vec<&Id> = p
        .core
        .edge_ids()
        .filter(|e| p.map.edges[*e].len() >= 2 && !protected.contains(*e))
        .collect();
    let e = (*candidates.choose(rng)?).clone();
    let ends = p.core.ends(&e)?.clone();
    let mut names = Names::of(p);
    let (mid, e1, e2) = (names.fresh("v"), names.fresh("s"), names.fresh("s"));

    let mut q = p.clone();
    let replace = |steps: &[SignedEdge]| -> Vec<SignedEdge> {
        let mut out = Vec::new();
        for s in steps {
            if s.edge == e {
                if s.forward {
                    out.push(SignedEdge::forward(e1.clone()));
                    out.push(SignedEdge::forward(e2.clone()));
                } else {
                    out.push(SignedEdge::backward(e2.clone()));
                    out.push(SignedEdge::backward(e1.clone()));
                }
            } else {
                out.push(s.clone());
            }
        }
        out
    };
    for steps in q.map.edges.values_mut() {
        *steps = replace(steps);
    }
    let image = q.map.edges.remove(&e)?;
    q.core.remove_edge(&e);
    q.core.add_vertex(mid.clone()).ok()?;
    q.core.add_edge(e1.clone(), ends.tail.clone(), mid.clone()).ok()?;
    q.core.add_edge(e2.clone(), mid.clone(), ends.head).ok()?;

    // Split the image at a vertex; the middle vertex goes where the split is.
    let cut = rng.gen_range(1..image.len());
    let start = q.map.vertices[&ends.tail].clone();
    let mid_image = vertex_after(&q, &start, &image[..cut])?;
    q.map.vertices.insert(mid, mid_image);
    q.map.edges.insert(e1, image[..cut].to_vec());
    q.map.edges.insert(e2, image[cut..].to_vec());
    Some(q)
}

/// Where a path of core and block 1 edges ends, by presentation id.
fn vertex_after(p: &Presentation, start: &str, steps: &[SignedEdge]) -> Option<Id> {
    let mut at = start.to_string();
    for s in steps {
        let (t, h) = edge_ends_in_gamma1(p, &s.edge)?;
        let (t, h) = if s.forward { (t, h) } else { (h, t) };
        if t != at {
            return None;
        }
        at = h;
    }
    Some(at)
}

fn edge_ends_in_gamma1(p: &Presentation, e: &str) -> Option<(Id, Id)> {
    if let Some(ends) = p.core.ends(e) {
        return Some((ends.tail.clone(), ends.head.clone()));
    }
    p.block_pos
        .edges
        .iter()
        .find(|x| x.id == e)
        .map(|x| (x.tail.clone(), x.head.clone()))
}
