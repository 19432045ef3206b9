//! Folded subgroup automata ("core graphs") for finitely generated subgroups
//! of a free group.
//!
//! A core graph is a connected, basepointed, generator-labeled digraph that is
//! *folded*: at each vertex, each generator labels at most one outgoing and at
//! most one incoming edge. Reduced paths are therefore unique, and the loops
//! at the basepoint spell exactly the subgroup's elements. Vertex ids are
//! dense integers chosen by a breadth-first relabeling from the basepoint
//! (always vertex 0), so equal subgroups get byte-identical graphs no matter
//! how their generators were listed.
//!
//! Edge exploration everywhere follows one fixed order — generators ascending,
//! outgoing before incoming — which pins down spanning trees, coset
//! representatives and basis enumeration deterministically.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;
use crate::word::{Alphabet, Letter, Sign, Word};

/// A labeled directed edge `from --label--> to`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub from: usize,
    pub label: usize,
    pub to: usize,
}

impl Edge {
    pub(crate) fn describe(&self) -> String {
        format!("({} -{}-> {})", self.from, self.label, self.to)
    }
}

/// Index of the subgroup in the ambient free group, read off the graph:
/// finite exactly when every generator acts as a total bijection on vertices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubgroupIndex {
    Finite(usize),
    Infinite,
}

/// A folded, connected, basepointed subgroup automaton. Basepoint is vertex 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoreGraph {
    alphabet: Alphabet,
    /// `out[g][v]` = target of the g-labeled edge leaving v, if any.
    out: Vec<Vec<Option<usize>>>,
    /// `inn[g][v]` = source of the g-labeled edge entering v, if any.
    inn: Vec<Vec<Option<usize>>>,
}

/// Spanning-tree data produced by the two-phase BFS in [`CoreGraph::grow_tree`].
pub(crate) struct SpanningTree {
    /// For each vertex: the tree edge it was discovered through and whether
    /// the edge was traversed forward. `None` for the basepoint.
    pub parent: Vec<Option<(Edge, bool)>>,
    /// Vertices in discovery order (basepoint first).
    pub order: Vec<usize>,
    pub tree_edges: BTreeSet<Edge>,
    /// Vertices discovered during the restricted first phase.
    pub phase_one: Vec<bool>,
}

impl CoreGraph {
    pub(crate) fn from_edges(alphabet: Alphabet, vertices: usize, edges: &BTreeSet<Edge>) -> CoreGraph {
        let rank = alphabet.rank();
        let mut out = vec![vec![None; vertices]; rank];
        let mut inn = vec![vec![None; vertices]; rank];
        for e in edges {
            debug_assert!(out[e.label][e.from].is_none(), "graph not folded at {}", e.describe());
            debug_assert!(inn[e.label][e.to].is_none(), "graph not folded at {}", e.describe());
            out[e.label][e.from] = Some(e.to);
            inn[e.label][e.to] = Some(e.from);
        }
        CoreGraph { alphabet, out, inn }
    }

    /// Build the subgroup automaton of `⟨generators⟩`: wedge one loop per
    /// generator at the basepoint, fold to a deterministic automaton, trim
    /// hanging trees, and relabel vertices breadth-first.
    pub fn from_generators(generators: &[Word], alphabet: Alphabet) -> Result<CoreGraph> {
        let mut edges: Vec<Edge> = Vec::new();
        let mut next = 1usize;
        for word in generators {
            for letter in word.letters() {
                if letter.gen >= alphabet.rank() {
                    return Err(Error::LetterOutOfRange { gen: letter.gen, rank: alphabet.rank() });
                }
            }
            if word.is_empty() {
                continue;
            }
            let mut at = 0usize;
            for (i, letter) in word.letters().iter().enumerate() {
                let target = if i + 1 == word.len() { 0 } else { next };
                if i + 1 != word.len() {
                    next += 1;
                }
                match letter.sign {
                    Sign::Pos => edges.push(Edge { from: at, label: letter.gen, to: target }),
                    Sign::Neg => edges.push(Edge { from: target, label: letter.gen, to: at }),
                }
                at = target;
            }
        }
        let folded = fold(next, edges);
        let trimmed = trim(&folded, 0);
        Ok(relabel(alphabet, &trimmed, 0))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.out[0].len()
    }

    pub fn out(&self, label: usize, v: usize) -> Option<usize> {
        self.out[label][v]
    }

    pub fn inn(&self, label: usize, v: usize) -> Option<usize> {
        self.inn[label][v]
    }

    /// All edges, sorted by (source, label, target).
    pub fn edges(&self) -> Vec<Edge> {
        let mut all = Vec::new();
        for from in 0..self.vertex_count() {
            for label in 0..self.alphabet.rank() {
                if let Some(to) = self.out[label][from] {
                    all.push(Edge { from, label, to });
                }
            }
        }
        all
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// First Betti number `E - V + 1`: the rank of the subgroup.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// The automaton of the trivial subgroup: one vertex, no edges.
    pub fn is_trivial(&self) -> bool {
        self.vertex_count() == 1 && self.edge_count() == 0
    }

    pub fn is_complete(&self) -> bool {
        self.out.iter().flatten().all(|t| t.is_some())
    }

    /// Follow `w` from the basepoint; `None` if the path dies.
    fn trace(&self, w: &Word) -> Option<usize> {
        let mut at = 0usize;
        for letter in w.letters() {
            if letter.gen >= self.alphabet.rank() {
                return None;
            }
            at = match letter.sign {
                Sign::Pos => self.out[letter.gen][at]?,
                Sign::Neg => self.inn[letter.gen][at]?,
            };
        }
        Some(at)
    }

    /// Subgroup membership: the unique path reading `w` exists and returns to
    /// the basepoint.
    pub fn accepts(&self, w: &Word) -> bool {
        self.trace(w) == Some(0)
    }

    /// Finite index iff the automaton is complete; the index is then the
    /// vertex count (a total partial injection on a finite set is a bijection).
    pub fn index(&self) -> SubgroupIndex {
        if self.is_complete() {
            SubgroupIndex::Finite(self.vertex_count())
        } else {
            SubgroupIndex::Infinite
        }
    }

    /// Incident slots of `v` in the global exploration order: generators
    /// ascending, outgoing before incoming. Yields (edge, traversed-forward).
    fn slots(&self, v: usize) -> Vec<(Edge, bool)> {
        let mut found = Vec::new();
        for label in 0..self.alphabet.rank() {
            if let Some(to) = self.out[label][v] {
                found.push((Edge { from: v, label, to }, true));
            }
            if let Some(from) = self.inn[label][v] {
                found.push((Edge { from, label, to: v }, false));
            }
        }
        found
    }

    /// Two-phase breadth-first spanning tree from the basepoint: first over
    /// `restrict` edges only (when given), then extended over all edges from
    /// the already-discovered vertices in their discovery order.
    pub(crate) fn grow_tree(&self, restrict: Option<&BTreeSet<Edge>>) -> SpanningTree {
        let n = self.vertex_count();
        let mut tree = SpanningTree {
            parent: vec![None; n],
            order: Vec::new(),
            tree_edges: BTreeSet::new(),
            phase_one: vec![false; n],
        };
        let mut seen = vec![false; n];
        seen[0] = true;
        tree.order.push(0);

        let bfs = |tree: &mut SpanningTree, seen: &mut Vec<bool>, allow: &dyn Fn(&Edge) -> bool, phase_one: bool| {
            let mut queue: VecDeque<usize> = tree.order.iter().copied().collect();
            while let Some(v) = queue.pop_front() {
                for (edge, fwd) in self.slots(v) {
                    if !allow(&edge) {
                        continue;
                    }
                    let nb = if fwd { edge.to } else { edge.from };
                    if seen[nb] {
                        continue;
                    }
                    seen[nb] = true;
                    tree.parent[nb] = Some((edge, fwd));
                    tree.tree_edges.insert(edge);
                    tree.order.push(nb);
                    if phase_one {
                        tree.phase_one[nb] = true;
                    }
                    queue.push_back(nb);
                }
            }
        };

        if let Some(set) = restrict {
            tree.phase_one[0] = true;
            bfs(&mut tree, &mut seen, &|e| set.contains(e), true);
        } else {
            tree.phase_one[0] = true;
        }
        bfs(&mut tree, &mut seen, &|_| true, restrict.is_none());
        debug_assert!(seen.iter().all(|&s| s), "graph must be connected");
        tree
    }

    /// The word read along the tree path basepoint -> v.
    pub(crate) fn tree_path(&self, tree: &SpanningTree, v: usize) -> Word {
        let mut letters = Vec::new();
        let mut at = v;
        while let Some((edge, fwd)) = tree.parent[at] {
            let letter = if fwd { Letter::positive(edge.label) } else { Letter::negative(edge.label) };
            letters.push(letter);
            at = if fwd { edge.from } else { edge.to };
        }
        letters.reverse();
        Word::reduce(letters, self.alphabet).expect("tree path letters are in range")
    }

    /// The basis word of a non-tree edge `u --g--> v`:
    /// `path(base->u) · g · path(v->base)`.
    pub(crate) fn basis_word(&self, tree: &SpanningTree, edge: Edge) -> Word {
        let head = self.tree_path(tree, edge.from);
        let letter = Word::reduce([Letter::positive(edge.label)], self.alphabet).unwrap();
        let tail = self.tree_path(tree, edge.to).invert();
        head.multiply(&letter).unwrap().multiply(&tail).unwrap()
    }

    /// Free basis of the subgroup, one word per non-tree edge. Non-tree edges
    /// are listed by (target, label): in a folded graph each vertex sees at
    /// most one incoming edge per generator, so this order is total.
    pub fn basis(&self) -> Basis {
        let tree = self.grow_tree(None);
        let mut non_tree: Vec<Edge> = self
            .edges()
            .into_iter()
            .filter(|e| !tree.tree_edges.contains(e))
            .collect();
        non_tree.sort_by_key(|e| (e.to, e.label, e.from));
        let words = non_tree.iter().map(|&e| self.basis_word(&tree, e)).collect();
        Basis {
            words,
            tree_edges: tree.tree_edges.iter().copied().collect(),
            non_tree_edges: non_tree,
        }
    }

    /// Fiber product restricted to the component of the paired basepoints and
    /// trimmed: the automaton of the intersection of the two subgroups.
    pub fn pullback(&self, other: &CoreGraph) -> CoreGraph {
        assert_eq!(self.alphabet, other.alphabet, "pullback requires a shared alphabet");
        let rank = self.alphabet.rank();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: BTreeSet<Edge> = BTreeSet::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        ids.insert((0, 0), 0);
        queue.push_back((0, 0));
        let mut next = 1usize;
        while let Some((p, q)) = queue.pop_front() {
            let id = ids[&(p, q)];
            for label in 0..rank {
                if let (Some(p2), Some(q2)) = (self.out[label][p], other.out[label][q]) {
                    let nb = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        let v = next;
                        next += 1;
                        v
                    });
                    edges.insert(Edge { from: id, label, to: nb });
                }
                if let (Some(p2), Some(q2)) = (self.inn[label][p], other.inn[label][q]) {
                    let nb = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        let v = next;
                        next += 1;
                        v
                    });
                    edges.insert(Edge { from: nb, label, to: id });
                }
            }
        }
        let trimmed = trim(&edges, 0);
        relabel(self.alphabet, &trimmed, 0)
    }

    /// Canonical byte serialization: relabel breadth-first from the basepoint
    /// (which is a true canonical form for folded connected graphs), then
    /// encode `rank, vertex count, out-table`. Two graphs get equal bytes
    /// exactly when they are isomorphic as basepointed labeled graphs.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let edges: BTreeSet<Edge> = self.edges().into_iter().collect();
        let canon = relabel(self.alphabet, &edges, 0);
        let mut bytes = Vec::new();
        let push = |bytes: &mut Vec<u8>, x: usize| bytes.extend_from_slice(&(x as u32).to_le_bytes());
        push(&mut bytes, canon.alphabet.rank());
        push(&mut bytes, canon.vertex_count());
        for v in 0..canon.vertex_count() {
            for g in 0..canon.alphabet.rank() {
                push(&mut bytes, canon.out[g][v].map_or(0, |t| t + 1));
            }
        }
        bytes
    }
}

/// Free basis extracted from a spanning tree.
#[derive(Clone, Debug)]
pub struct Basis {
    pub words: Vec<Word>,
    pub tree_edges: Vec<Edge>,
    pub non_tree_edges: Vec<Edge>,
}

/// A complete core graph: every generator is a total bijection on vertices.
/// Covers arise from finite-index completions and from coset actions, and are
/// the only graphs where every word traces a full path.
#[derive(Clone, Debug)]
pub struct Cover {
    graph: CoreGraph,
}

impl Cover {
    pub(crate) fn from_graph(graph: CoreGraph) -> Cover {
        debug_assert!(graph.is_complete(), "cover must be complete");
        Cover { graph }
    }

    pub fn graph(&self) -> &CoreGraph {
        &self.graph
    }

    /// Index of the covered subgroup = number of vertices.
    pub fn index(&self) -> usize {
        self.graph.vertex_count()
    }
}

impl std::ops::Deref for Cover {
    type Target = CoreGraph;

    fn deref(&self) -> &CoreGraph {
        &self.graph
    }
}

/// Stallings folding: repeatedly merge the targets of equally-labeled edges
/// leaving (or entering) the same vertex until the edge relation is a partial
/// injection per generator.
fn fold(vertices: usize, edges: Vec<Edge>) -> BTreeSet<Edge> {
    let mut uf = UnionFind::new(vertices.max(1));
    let mut current: BTreeSet<Edge> = edges.into_iter().collect();
    loop {
        let canon: BTreeSet<Edge> = current
            .iter()
            .map(|e| Edge { from: uf.find(e.from), label: e.label, to: uf.find(e.to) })
            .collect();
        let mut merge: Option<(usize, usize)> = None;
        let mut seen_out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut seen_in: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &canon {
            if let Some(&t) = seen_out.get(&(e.from, e.label)) {
                if t != e.to {
                    merge = Some((t, e.to));
                    break;
                }
            } else {
                seen_out.insert((e.from, e.label), e.to);
            }
            if let Some(&s) = seen_in.get(&(e.to, e.label)) {
                if s != e.from {
                    merge = Some((s, e.from));
                    break;
                }
            } else {
                seen_in.insert((e.to, e.label), e.from);
            }
        }
        match merge {
            Some((a, b)) => {
                uf.union(a, b);
                current = canon;
            }
            None => return canon,
        }
    }
}

/// Remove hanging trees: repeatedly delete non-basepoint vertices incident to
/// at most one edge endpoint (a loop counts twice). The basepoint stays even
/// when bare.
fn trim(edges: &BTreeSet<Edge>, base: usize) -> BTreeSet<Edge> {
    let mut degree: HashMap<usize, usize> = HashMap::new();
    let mut incident: HashMap<usize, Vec<Edge>> = HashMap::new();
    for &e in edges {
        *degree.entry(e.from).or_insert(0) += 1;
        *degree.entry(e.to).or_insert(0) += 1;
        incident.entry(e.from).or_default().push(e);
        if e.to != e.from {
            incident.entry(e.to).or_default().push(e);
        }
    }
    let mut removed: HashSet<Edge> = HashSet::new();
    let mut dead: HashSet<usize> = HashSet::new();
    let mut queue: VecDeque<usize> = degree
        .iter()
        .filter(|&(&v, &d)| v != base && d <= 1)
        .map(|(&v, _)| v)
        .collect();
    while let Some(v) = queue.pop_front() {
        if !dead.insert(v) {
            continue;
        }
        for e in incident.get(&v).into_iter().flatten() {
            if !removed.insert(*e) {
                continue;
            }
            let other = if e.from == v { e.to } else { e.from };
            if other != v {
                let d = degree.get_mut(&other).expect("endpoint has a degree");
                *d -= 1;
                if other != base && *d <= 1 {
                    queue.push_back(other);
                }
            }
        }
    }
    edges.iter().filter(|e| !removed.contains(e)).copied().collect()
}

/// Breadth-first relabeling from the basepoint. After folding this is the
/// canonical numbering: each (generator, direction) slot has at most one
/// neighbor, so discovery order depends only on the graph, not on input ids.
fn relabel(alphabet: Alphabet, edges: &BTreeSet<Edge>, base: usize) -> CoreGraph {
    let rank = alphabet.rank();
    let mut out_map: HashMap<(usize, usize), usize> = HashMap::new();
    let mut in_map: HashMap<(usize, usize), usize> = HashMap::new();
    for e in edges {
        out_map.insert((e.from, e.label), e.to);
        in_map.insert((e.to, e.label), e.from);
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    ids.insert(base, 0);
    queue.push_back(base);
    while let Some(v) = queue.pop_front() {
        for label in 0..rank {
            for nb in [out_map.get(&(v, label)), in_map.get(&(v, label))].into_iter().flatten() {
                if !ids.contains_key(nb) {
                    ids.insert(*nb, ids.len());
                    queue.push_back(*nb);
                }
            }
        }
    }
    let renamed: BTreeSet<Edge> = edges
        .iter()
        .map(|e| Edge { from: ids[&e.from], label: e.label, to: ids[&e.to] })
        .collect();
    CoreGraph::from_edges(alphabet, ids.len(), &renamed)
}
