use std::collections::{BTreeMap, BTreeSet};

use graph_core::{FiniteGraph, Id};
use serde::{Deserialize, Serialize};

use crate::error::Diagnostic;
use crate::model::{Block, Cell, CellStep, EndPeriodic, Joining, Orbit};
use crate::schema::{BlockJson, EdgeKind, Presentation, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    pub ends: usize,
    pub orbits: Vec<Orbit>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn periods(&self, p: &Presentation) -> Vec<u64> {
        p.ends.iter().map(|e| e.period).collect()
    }
}

pub fn validate(p: &Presentation) -> ValidationReport {
    match build(p.clone()) {
        Ok(m) => ValidationReport {
            valid: true,
            period: Some(m.period),
            ends: p.ends.len(),
            orbits: m.orbits,
            diagnostics: Vec::new(),
        },
        Err(diagnostics) => ValidationReport {
            valid: false,
            period: None,
            ends: p.ends.len(),
            orbits: Vec::new(),
            diagnostics,
        },
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Ctx {
    d: Vec<Diagnostic>,
}

impl Ctx {
    fn err(&mut self, code: &str, cell: &str, msg: impl Into<String>) {
        self.d.push(Diagnostic::new(code, Some(cell), msg));
    }

    fn global(&mut self, code: &str, msg: impl Into<String>) {
        self.d.push(Diagnostic::new(code, None, msg));
    }

    fn check(&mut self) -> Result<(), Vec<Diagnostic>> {
        if self.d.is_empty() {
            Ok(())
        } else {
            Err(std::mem::take(&mut self.d))
        }
    }
}

pub(crate) fn build(p: Presentation) -> Result<EndPeriodic, Vec<Diagnostic>> {
    let p = p.normalized();
    let mut cx = Ctx { d: Vec::new() };

    // Identifiers and incidences.
    if p.core.vertex_count() == 0 {
        cx.global("core-empty", "the core has no vertices");
    } else if !p.core.is_connected() {
        cx.global("core-disconnected", "the core is not connected");
    }
    let mut vertex_owner: BTreeMap<&Id, &str> = BTreeMap::new();
    let mut edge_owner: BTreeMap<&Id, &str> = BTreeMap::new();
    for v in p.core.vertices() {
        vertex_owner.insert(v, "core");
    }
    for e in p.core.edge_ids() {
        if e.starts_with('-') {
            cx.err("bad-id", e, "edge ids may not start with `-`");
        }
        edge_owner.insert(e, "core");
    }
    for (label, block) in [("block_pos", &p.block_pos), ("block_neg", &p.block_neg)] {
        for v in &block.vertices {
            if v.id.contains('@') {
                cx.err("bad-id", &v.id, "block ids may not contain `@`");
            }
            if let Some(owner) = vertex_owner.insert(&v.id, label) {
                cx.err("duplicate-id", &v.id, format!("vertex id already used in {owner}"));
            }
        }
        for e in &block.edges {
            if e.id.contains('@') || e.id.starts_with('-') {
                cx.err("bad-id", &e.id, "block edge ids may not contain `@` or start with `-`");
            }
            if let Some(owner) = edge_owner.insert(&e.id, label) {
                cx.err("duplicate-id", &e.id, format!("edge id already used in {owner}"));
            }
        }
    }
    for block in [&p.block_pos, &p.block_neg] {
        let local: BTreeSet<&Id> = block.vertices.iter().map(|v| &v.id).collect();
        for e in &block.edges {
            match e.kind {
                EdgeKind::Subgraph => {
                    for v in [&e.tail, &e.head] {
                        if !local.contains(v) {
                            cx.err(
                                "dangling-edge",
                                &e.id,
                                format!("subgraph edge endpoint `{v}` is not a vertex of its block"),
                            );
                        }
                    }
                }
                EdgeKind::Joining => {
                    if !p.core.has_vertex(&e.tail) {
                        cx.err(
                            "dangling-edge",
                            &e.id,
                            format!("joining edge tail `{}` is not a core vertex", e.tail),
                        );
                    }
                    if !local.contains(&e.head) {
                        cx.err(
                            "dangling-edge",
                            &e.id,
                            format!("joining edge head `{}` is not a vertex of its block", e.head),
                        );
                    }
                }
            }
        }
    }
    cx.check()?;

    // Ends and orbits.
    let mut end_by_id = BTreeMap::new();
    for e in &p.ends {
        if end_by_id.insert(&e.id, e).is_some() {
            cx.err("duplicate-id", &e.id, "end listed twice");
        }
        if e.period == 0 {
            cx.err("orbit-period", &e.id, "period must be positive");
        }
    }
    let mut orbits = Vec::new();
    for e in &p.ends {
        let Some(leader) = end_by_id.get(&e.orbit_leader) else {
            cx.err("orbit-leader", &e.id, format!("orbit leader `{}` is not an end", e.orbit_leader));
            continue;
        };
        if leader.orbit_leader != leader.id {
            cx.err("orbit-leader", &e.id, format!("`{}` does not lead its own orbit", leader.id));
            continue;
        }
        if leader.sign != e.sign || leader.period != e.period {
            cx.err(
                "orbit-period",
                &e.id,
                format!("sign or period differs from orbit leader `{}`", leader.id),
            );
        }
        if e.id != leader.id {
            continue;
        }
        let members: Vec<&Id> = p
            .ends
            .iter()
            .filter(|x| x.orbit_leader == e.id)
            .map(|x| &x.id)
            .collect();
        if members.len() as u64 != e.period {
            cx.err(
                "orbit-period",
                &e.id,
                format!("orbit has {} ends but period {}", members.len(), e.period),
            );
        }
        let start = members.iter().position(|m| **m == e.id).unwrap_or(0);
        let mut rotated: Vec<Id> = members[start..].iter().map(|m| (*m).clone()).collect();
        rotated.extend(members[..start].iter().map(|m| (*m).clone()));
        orbits.push(Orbit {
            leader: e.id.clone(),
            sign: e.sign,
            members: rotated,
        });
    }
    cx.check()?;
    orbits.sort_by(|a, b| a.leader.cmp(&b.leader));
    let period = orbits
        .iter()
        .map(Orbit::period)
        .fold(1, |acc, q| acc / gcd(acc, q) * q);

    // Blocks.
    let pos = build_block(&mut cx, &p.block_pos, Sign::Attracting, &orbits);
    let neg = build_block(&mut cx, &p.block_neg, Sign::Repelling, &orbits);
    cx.check()?;
    let (mut pos, mut neg) = (pos.unwrap(), neg.unwrap());

    // The map on core ∪ block −1.
    let resolve_vertex = |id: &Id| -> Option<Cell> {
        if p.core.has_vertex(id) {
            Some(Cell::new(0, id))
        } else if pos.graph.has_vertex(id) {
            Some(Cell::new(1, id))
        } else {
            None
        }
    };
    let resolve_edge = |id: &Id| -> Option<Cell> {
        if p.core.has_edge(id) {
            Some(Cell::new(0, id))
        } else if pos.has_edge(id) {
            Some(Cell::new(1, id))
        } else {
            None
        }
    };
    let mut vmap = BTreeMap::new();
    let domain_vertices: Vec<&Id> = p.core.vertices().chain(neg.graph.vertices()).collect();
    for v in &domain_vertices {
        match p.map.vertices.get(*v) {
            None => cx.err("unmapped", v, "vertex has no image"),
            Some(img) => match resolve_vertex(img) {
                Some(c) => {
                    vmap.insert((*v).clone(), c);
                }
                None => cx.err(
                    "bad-image",
                    v,
                    format!("image `{img}` is not a vertex of the core or block_pos"),
                ),
            },
        }
    }
    for k in p.map.vertices.keys() {
        if !domain_vertices.contains(&k) {
            cx.err("bad-image", k, "map given on a vertex outside core ∪ block_neg");
        }
    }
    let mut emap: BTreeMap<Id, Vec<CellStep>> = BTreeMap::new();
    let mut domain_edges: Vec<Id> = p.core.edge_ids().cloned().collect();
    domain_edges.extend(neg.edge_ids());
    for e in &domain_edges {
        let Some(steps) = p.map.edges.get(e) else {
            cx.err("unmapped", e, "edge has no image");
            continue;
        };
        let mut out = Vec::new();
        for s in steps {
            match resolve_edge(&s.edge) {
                Some(c) => out.push(CellStep::new(c, s.forward)),
                None => cx.err(
                    "bad-image",
                    e,
                    format!("image step `{s}` is not an edge of the core or block_pos"),
                ),
            }
        }
        emap.insert(e.clone(), out);
    }
    for k in p.map.edges.keys() {
        if !domain_edges.contains(k) {
            cx.err("bad-image", k, "map given on an edge outside core ∪ block_neg");
        }
    }
    cx.check()?;

    // Endpoint compatibility, with joining tails of block 1 at their core tails.
    let gamma1_ends = |c: &Cell| -> (Cell, Cell) {
        if c.block == 0 {
            let ends = p.core.ends(&c.id).unwrap();
            (Cell::core(&ends.tail), Cell::core(&ends.head))
        } else if let Some(j) = pos.joining.get(&c.id) {
            (Cell::core(&j.tail), Cell::new(1, &j.head))
        } else {
            let ends = pos.graph.ends(&c.id).unwrap();
            (Cell::new(1, &ends.tail), Cell::new(1, &ends.head))
        }
    };
    for e in &domain_edges {
        let (tail, head) = if let Some(ends) = p.core.ends(e) {
            (ends.tail.clone(), ends.head.clone())
        } else if let Some(j) = neg.joining.get(e) {
            (j.tail.clone(), j.head.clone())
        } else {
            let ends = neg.graph.ends(e).unwrap();
            (ends.tail.clone(), ends.head.clone())
        };
        let mut at = vmap[&tail].clone();
        let want_end = vmap[&head].clone();
        let mut broken = false;
        for s in &emap[e] {
            let (t, h) = gamma1_ends(&s.cell);
            let (t, h) = if s.forward { (t, h) } else { (h, t) };
            if t != at {
                broken = true;
                break;
            }
            at = h;
        }
        if broken || at != want_end {
            cx.err(
                "incompatible-image",
                e,
                "image path does not run between the images of the endpoints",
            );
        }
    }
    let mut seen_v = BTreeMap::new();
    for v in neg.graph.vertices() {
        if let Some(other) = seen_v.insert(vmap[v].clone(), v) {
            cx.err("block-neg-map", v, format!("shares its image with `{other}`"));
        }
    }
    let mut seen_e = BTreeMap::new();
    for e in neg.edge_ids() {
        let img = &emap[&e];
        if img.len() != 1 {
            cx.err("block-neg-map", &e, "block_neg edges must map to single edges");
            continue;
        }
        if let Some(other) = seen_e.insert(img[0].cell.clone(), e.clone()) {
            cx.err("block-neg-map", &e, format!("shares its image with `{other}`"));
        }
    }
    cx.check()?;

    // Where the translates of joining edges attach.
    let orbit_period = |leader: &Id| orbits.iter().find(|o| &o.leader == leader).unwrap().period();
    let pos_component = component_map(&pos);
    for j in pos.joining.values_mut() {
        j.period = orbit_period(&j.leader);
        let mut chain = vec![j.tail.clone()];
        let mut ok = true;
        for step in 1..=j.period {
            let img = &vmap[chain.last().unwrap()];
            if step < j.period {
                if img.block != 0 {
                    ok = false;
                    break;
                }
                chain.push(img.id.clone());
            } else if img.block == 1 && pos_component.get(&img.id) == pos_component.get(&j.head) {
                j.anchor = img.id.clone();
            } else {
                ok = false;
            }
        }
        if ok {
            j.chain = chain;
        } else {
            cx.err(
                "juncture",
                &j.id,
                format!(
                    "the {}-th image of tail `{}` must first leave the core into this edge's block component",
                    j.period, j.tail
                ),
            );
        }
    }
    let neg_component = component_map(&neg);
    for j in neg.joining.values_mut() {
        j.period = orbit_period(&j.leader);
        let mut found = Vec::new();
        for v in neg.graph.vertices() {
            if neg_component.get(v) != neg_component.get(&j.head) {
                continue;
            }
            let mut chain = Vec::new();
            let mut at = vmap[v].clone();
            let mut ok = at.block == 0;
            while ok && (chain.len() as u64) < j.period {
                chain.push(at.id.clone());
                if (chain.len() as u64) < j.period {
                    at = vmap[&at.id].clone();
                    ok = at.block == 0;
                }
            }
            if ok && chain.last() == Some(&j.tail) {
                found.push((v.clone(), chain));
            }
        }
        match found.len() {
            1 => {
                let (anchor, chain) = found.pop().unwrap();
                j.anchor = anchor;
                j.chain = chain;
            }
            0 => cx.err(
                "juncture",
                &j.id,
                format!(
                    "no vertex of the component reaches tail `{}` after {} core steps",
                    j.tail, j.period
                ),
            ),
            _ => cx.err(
                "juncture",
                &j.id,
                format!("several vertices of the component reach tail `{}`", j.tail),
            ),
        }
    }
    cx.check()?;

    let pos_j: BTreeSet<&Id> = pos.joining.values().flat_map(|j| &j.chain).collect();
    let neg_j: BTreeSet<&Id> = neg.joining.values().flat_map(|j| &j.chain).collect();
    // An edgeless core is allowed to serve both sides.
    if p.core.edge_count() > 0 {
        for v in pos_j.intersection(&neg_j) {
            cx.err("juncture", v, "vertex is both a positive and a negative juncture");
        }
    }

    // Cells of g(block −1) are hit by nothing else.
    let hit_v: BTreeSet<&Cell> = neg.graph.vertices().map(|v| &vmap[v]).collect();
    let hit_e: BTreeSet<&Cell> = neg.edge_ids().iter().map(|e| &emap[e][0].cell).collect();
    for v in p.core.vertices() {
        if hit_v.contains(&vmap[v]) {
            cx.err(
                "nesting",
                v,
                format!("maps to `{}`, which is already the image of a block_neg vertex", vmap[v].id),
            );
        }
    }
    for e in p.core.edge_ids() {
        if let Some(s) = emap[e].iter().find(|s| hit_e.contains(&s.cell)) {
            cx.err(
                "nesting",
                e,
                format!("image crosses `{}`, which is already the image of a block_neg edge", s.cell.id),
            );
        }
    }
    cx.check()?;

    Ok(EndPeriodic {
        core: p.core.clone(),
        pos,
        neg,
        orbits,
        period,
        vmap,
        emap,
        source: p,
    })
}

fn component_map(b: &Block) -> BTreeMap<Id, usize> {
    let mut out = BTreeMap::new();
    for (i, comp) in b.graph.components().into_iter().enumerate() {
        for v in comp {
            out.insert(v, i);
        }
    }
    out
}

fn build_block(cx: &mut Ctx, json: &BlockJson, sign: Sign, orbits: &[Orbit]) -> Option<Block> {
    let before = cx.d.len();
    let leaders: BTreeSet<&Id> = orbits.iter().filter(|o| o.sign == sign).map(|o| &o.leader).collect();
    let side = match sign {
        Sign::Attracting => "block_pos",
        Sign::Repelling => "block_neg",
    };
    let mut graph = FiniteGraph::new();
    let mut vertex_leader = BTreeMap::new();
    for v in &json.vertices {
        if !leaders.contains(&v.end) {
            cx.err(
                "block-end",
                &v.id,
                format!("end `{}` is not a leading end of the {} side", v.end, sign.symbol()),
            );
        }
        let _ = graph.add_vertex(v.id.clone());
        vertex_leader.insert(v.id.clone(), v.end.clone());
    }
    let mut joining = BTreeMap::new();
    for e in &json.edges {
        let head_end = vertex_leader.get(&e.head);
        if head_end != Some(&e.end) {
            cx.err("block-end", &e.id, "end label differs from its head vertex");
        }
        match e.kind {
            EdgeKind::Subgraph => {
                if vertex_leader.get(&e.tail) != Some(&e.end) {
                    cx.err("block-end", &e.id, "end label differs from its tail vertex");
                }
                let _ = graph.add_edge(e.id.clone(), e.tail.clone(), e.head.clone());
            }
            EdgeKind::Joining => {
                joining.insert(
                    e.id.clone(),
                    Joining {
                        id: e.id.clone(),
                        tail: e.tail.clone(),
                        head: e.head.clone(),
                        leader: e.end.clone(),
                        period: 1,
                        anchor: String::new(),
                        chain: Vec::new(),
                    },
                );
            }
        }
    }
    let mut covered = BTreeSet::new();
    for comp in graph.components() {
        let first = comp.iter().next().unwrap();
        let leader = &vertex_leader[first];
        if !covered.insert(leader.clone()) {
            cx.err(
                "block-components",
                first,
                format!("end `{leader}` has more than one component in {side}"),
            );
        }
        if !joining.values().any(|j: &Joining| comp.contains(&j.head)) {
            cx.err("block-components", first, "component has no joining edge");
        }
    }
    for l in leaders {
        if !covered.contains(l) {
            cx.err("block-components", l, format!("leading end has no component in {side}"));
        }
    }
    (cx.d.len() == before).then_some(Block {
        sign,
        graph,
        vertex_leader,
        joining,
    })
}
