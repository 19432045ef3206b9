//! Finite-index completion of a subgroup automaton.
//!
//! A folded core graph fails to have finite index exactly where some
//! generator is missing an outgoing or incoming edge. Because each generator
//! already acts as a partial injection on vertices, it is missing outgoing
//! and incoming slots in equal numbers, and pairing them off (both sides in
//! ascending vertex order) completes the graph to a cover **without adding
//! vertices**. The covered subgroup `K` therefore has index equal to the
//! core's vertex count, contains the original subgroup `H` edge-for-edge, and
//! splits as a free product `K = H * Q`: growing the spanning tree inside the
//! original edges first makes every non-tree edge either an `H`-basis edge or
//! a freshly added one, and the added edges' loop words generate the free
//! complement `Q`.

use std::collections::BTreeSet;

use crate::graph::{CoreGraph, Cover, Edge};
use crate::word::Word;

/// A cover completing a core graph, with the induced splitting `K = H * Q`.
#[derive(Clone, Debug)]
pub struct Completion {
    pub cover: Cover,
    /// Edges inherited from the original core graph (the `H` part).
    pub h_edges: BTreeSet<Edge>,
    /// Edges added by the completion, in the order they were added.
    pub added_edges: Vec<Edge>,
    /// Basis of `H` as read from the cover's spanning tree.
    pub basis_h: Vec<Word>,
    /// Basis of the free complement `Q`.
    pub basis_q: Vec<Word>,
    /// Index of `K` in the ambient free group.
    pub k_index: usize,
}

/// Complete `core` to a finite-index cover by pairing missing outgoing slots
/// with missing incoming slots per generator, both in ascending vertex order.
pub fn complete(core: &CoreGraph) -> Completion {
    let alphabet = core.alphabet();
    let n = core.vertex_count();
    let h_edges: BTreeSet<Edge> = core.edges().into_iter().collect();
    let mut all_edges = h_edges.clone();
    let mut added_edges = Vec::new();
    for label in 0..alphabet.rank() {
        let missing_out: Vec<usize> = (0..n).filter(|&v| core.out(label, v).is_none()).collect();
        let missing_in: Vec<usize> = (0..n).filter(|&v| core.inn(label, v).is_none()).collect();
        assert_eq!(
            missing_out.len(),
            missing_in.len(),
            "a partial injection has equal out- and in-deficiency"
        );
        for (&from, &to) in missing_out.iter().zip(&missing_in) {
            let edge = Edge { from, label, to };
            added_edges.push(edge);
            all_edges.insert(edge);
        }
    }
    let cover = Cover::from_graph(CoreGraph::from_edges(alphabet, n, &all_edges));

    // Spanning tree grown inside the original edges first. The core is
    // connected on the full vertex set, so the tree lies entirely in H's
    // edges and every added edge is a non-tree edge.
    let tree = cover.grow_tree(Some(&h_edges));
    let mut non_tree: Vec<Edge> = cover
        .edges()
        .into_iter()
        .filter(|e| !tree.tree_edges.contains(e))
        .collect();
    non_tree.sort_by_key(|e| (e.to, e.label, e.from));
    let mut basis_h = Vec::new();
    let mut basis_q = Vec::new();
    for &edge in &non_tree {
        let word = cover.basis_word(&tree, edge);
        if h_edges.contains(&edge) {
            basis_h.push(word);
        } else {
            basis_q.push(word);
        }
    }
    let k_index = cover.index();
    Completion { cover, h_edges, added_edges, basis_h, basis_q, k_index }
}
