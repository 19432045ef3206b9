//! Graphviz rendering of subgroup automata.
//!
//! The output is deterministic: vertices are declared in ascending order
//! (the basepoint doubled-circled), then edges sorted by source and label.

use crate::graph::CoreGraph;
use crate::word::{Letter, Word};

/// Render a core graph as a `digraph` named `name`.
pub fn render_dot(graph: &CoreGraph, name: &str) -> String {
    let alphabet = graph.alphabet();
    let mut out = String::new();
    out.push_str(&format!("digraph {name} {{\n"));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    out.push_str("  0 [shape=doublecircle];\n");
    for v in 1..graph.vertex_count() {
        out.push_str(&format!("  {v};\n"));
    }
    for edge in graph.edges() {
        let label = Word::reduce([Letter::positive(edge.label)], alphabet)
            .expect("edge labels are in range");
        out.push_str(&format!("  {} -> {} [label=\"{label}\"];\n", edge.from, edge.to));
    }
    out.push_str("}\n");
    out
}
