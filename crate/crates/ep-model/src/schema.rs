//! The on-disk presentation format.

use std::collections::BTreeMap;

use graph_core::{FiniteGraph, Id, SignedEdge};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Attracting,
    Repelling,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Attracting => Sign::Repelling,
            Sign::Repelling => Sign::Attracting,
        }
    }

    /// `+` for the attracting side, `-` for the repelling side.
    pub fn symbol(self) -> char {
        match self {
            Sign::Attracting => '+',
            Sign::Repelling => '-',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Sign> {
        match s {
            "+" | "pos" | "positive" | "attracting" => Some(Sign::Attracting),
            "-" | "neg" | "negative" | "repelling" => Some(Sign::Repelling),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndRecord {
    pub id: Id,
    pub sign: Sign,
    pub period: u64,
    pub orbit_leader: Id,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Subgraph,
    Joining,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockVertex {
    pub id: Id,
    pub end: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEdge {
    pub id: Id,
    pub tail: Id,
    pub head: Id,
    pub end: Id,
    pub kind: EdgeKind,
}

/// One positive or negative block. Joining edges name a core vertex as tail.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    #[serde(default)]
    pub vertices: Vec<BlockVertex>,
    #[serde(default)]
    pub edges: Vec<BlockEdge>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub vertices: BTreeMap<Id, Id>,
    pub edges: BTreeMap<Id, Vec<SignedEdge>>,
}

/// How block cells are named in truncations: block `k` cell `x` is written
/// `x@i` with `i = ±(|k| + offset)`, negated when `flip` is set. Rebased and
/// inverted presentations use this to keep the names of the original graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Naming {
    #[serde(default)]
    pub flip: bool,
    #[serde(default)]
    pub offset_pos: u32,
    #[serde(default)]
    pub offset_neg: u32,
}

impl Naming {
    pub fn is_default(&self) -> bool {
        *self == Naming::default()
    }

    pub fn index(&self, block: i64) -> i64 {
        let i = if block > 0 {
            block + self.offset_pos as i64
        } else {
            block - self.offset_neg as i64
        };
        if self.flip {
            -i
        } else {
            i
        }
    }
}

/// A presentation file as read from disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reconstructed: bool,
    pub core: FiniteGraph,
    pub ends: Vec<EndRecord>,
    #[serde(default)]
    pub block_pos: BlockJson,
    #[serde(default)]
    pub block_neg: BlockJson,
    pub map: MapJson,
    #[serde(default, skip_serializing_if = "Naming::is_default")]
    pub naming: Naming,
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let p: Presentation = serde_json::from_str(text)?;
        Ok(p.normalized())
    }

    /// Pretty JSON with a trailing newline. Map keys are sorted, so the
    /// output is a function of the value.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("presentation serializes");
        s.push('\n');
        s
    }

    /// Puts joining edges in standard orientation (tail in the core, head in
    /// the block), reversing every map image that mentions a flipped edge.
    pub fn normalized(mut self) -> Self {
        let mut flipped = Vec::new();
        for block in [&mut self.block_pos, &mut self.block_neg] {
            let local: std::collections::BTreeSet<&Id> = block.vertices.iter().map(|v| &v.id).collect();
            let mut to_flip = Vec::new();
            for (i, e) in block.edges.iter().enumerate() {
                if e.kind == EdgeKind::Joining
                    && self.core.has_vertex(&e.head)
                    && local.contains(&e.tail)
                {
                    to_flip.push(i);
                }
            }
            for i in to_flip {
                let e = &mut block.edges[i];
                std::mem::swap(&mut e.tail, &mut e.head);
                flipped.push(e.id.clone());
            }
        }
        if flipped.is_empty() {
            return self;
        }
        for steps in self.map.edges.values_mut() {
            for s in steps.iter_mut() {
                if flipped.contains(&s.edge) {
                    *s = s.reversed();
                }
            }
        }
        for e in &flipped {
            if let Some(steps) = self.map.edges.get_mut(e) {
                *steps = steps.iter().rev().map(SignedEdge::reversed).collect();
            }
        }
        self
    }
}
