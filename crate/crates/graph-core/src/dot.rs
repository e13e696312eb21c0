use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{FiniteGraph, Id};

/// Per-edge rendering overrides.
#[derive(Debug, Clone, Default)]
pub struct DotEdgeStyle {
    pub label: Option<String>,
    pub color: Option<String>,
    /// Draw the arrowhead at the tail instead of the head.
    pub reversed: bool,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph with edges labeled by id unless a style overrides it.
pub fn to_dot(g: &FiniteGraph, name: &str, styles: &BTreeMap<Id, DotEdgeStyle>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (id, ends) in g.edges() {
        let style = styles.get(id).cloned().unwrap_or_default();
        let label = style.label.unwrap_or_else(|| id.clone());
        let mut attrs = vec![format!("label={}", quote(&label))];
        if let Some(c) = style.color {
            attrs.push(format!("color={}", quote(&c)));
        }
        if style.reversed {
            attrs.push("dir=back".to_string());
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(&ends.tail),
            quote(&ends.head),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}
