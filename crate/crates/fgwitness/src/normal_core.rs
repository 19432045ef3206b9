//! Coset action and normal interior of a finite-index subgroup.
//!
//! A cover with `n` vertices turns each generator into a permutation of the
//! vertex set (the right coset action). The permutations a word evaluates to
//! form a finite group under composition; the words evaluating to the
//! identity permutation are exactly the kernel `I` of the action — the
//! normal interior of the covered subgroup: the largest subgroup of `K` that
//! is normal in the whole free group. Its own cover is the Cayley graph of
//! the finite permutation group, based at the identity element.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{CoreGraph, Cover, Edge};
use crate::word::{Alphabet, Sign, Word};

/// The coset action read off a cover: one permutation per generator.
#[derive(Clone, Debug)]
pub struct PermRep {
    degree: usize,
    /// `sigma[g][p]` = where generator g sends point p.
    sigma: Vec<Vec<usize>>,
    /// `inv[g][p]` = where g⁻¹ sends point p.
    inv: Vec<Vec<usize>>,
}

impl PermRep {
    pub fn from_cover(cover: &Cover) -> PermRep {
        let degree = cover.vertex_count();
        let rank = cover.alphabet().rank();
        let sigma: Vec<Vec<usize>> = (0..rank)
            .map(|g| (0..degree).map(|p| cover.out(g, p).expect("cover is complete")).collect())
            .collect();
        PermRep::new(sigma)
    }

    fn new(sigma: Vec<Vec<usize>>) -> PermRep {
        let degree = sigma.first().map_or(0, Vec::len);
        let mut inv = vec![vec![0; degree]; sigma.len()];
        for (g, perm) in sigma.iter().enumerate() {
            for (p, &q) in perm.iter().enumerate() {
                inv[g][q] = p;
            }
        }
        PermRep { degree, sigma, inv }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The permutation a word evaluates to, composing left to right: the
    /// result sends p to the endpoint of the path reading `w` from p.
    pub fn act(&self, w: &Word) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.degree).collect();
        for letter in w.letters() {
            let table = match letter.sign {
                Sign::Pos => &self.sigma[letter.gen],
                Sign::Neg => &self.inv[letter.gen],
            };
            for p in perm.iter_mut() {
                *p = table[*p];
            }
        }
        perm
    }

    /// Membership in the kernel `I`: the word permutes no point.
    pub fn acts_trivially(&self, w: &Word) -> bool {
        self.act(w).iter().enumerate().all(|(p, &q)| p == q)
    }

    /// Enumerate the permutation group the generators produce, breadth-first
    /// from the identity by right multiplication (generators ascending).
    /// Fails once the element count would pass `cap`.
    pub fn closure(&self, cap: usize) -> Result<GroupClosure> {
        let identity: Vec<usize> = (0..self.degree).collect();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
        ids.insert(identity, 0);
        let mut cayley: Vec<Vec<usize>> = Vec::new();
        let mut at = 0usize;
        while at < elements.len() {
            let element = elements[at].clone();
            let mut row = Vec::with_capacity(self.sigma.len());
            for table in &self.sigma {
                let product: Vec<usize> = element.iter().map(|&p| table[p]).collect();
                let id = match ids.get(&product) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CoreTooLarge { cap });
                        }
                        let id = elements.len();
                        ids.insert(product.clone(), id);
                        elements.push(product);
                        id
                    }
                };
                row.push(id);
            }
            cayley.push(row);
            at += 1;
        }
        let covering_map = elements.iter().map(|e| e[0]).collect();
        Ok(GroupClosure { degree: self.degree, elements, cayley, covering_map })
    }
}

/// The finite permutation group generated by a coset action, with its Cayley
/// structure. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub degree: usize,
    /// Group elements as permutations, in breadth-first discovery order.
    pub elements: Vec<Vec<usize>>,
    /// `cayley[i][g]` = index of `elements[i]` composed with generator g.
    pub cayley: Vec<Vec<usize>>,
    /// Where each element sends the cover's basepoint; projects the Cayley
    /// cover onto the original cover.
    pub covering_map: Vec<usize>,
}

impl GroupClosure {
    /// Number of group elements = index of the kernel `I` in the free group.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The Cayley graph as a cover: vertices are group elements (identity is
    /// the basepoint), and generator g joins each element to its right
    /// g-multiple. This is the subgroup automaton of the kernel `I`.
    pub fn cayley_cover(&self, alphabet: Alphabet) -> Cover {
        let edges = self
            .cayley
            .iter()
            .enumerate()
            .flat_map(|(from, row)| {
                row.iter().enumerate().map(move |(label, &to)| Edge { from, label, to })
            })
            .collect();
        Cover::from_graph(CoreGraph::from_edges(alphabet, self.order(), &edges))
    }
}

/// One coset representative per vertex, read along the cover's breadth-first
/// spanning tree. The basepoint's representative is the empty word.
pub fn coset_reps(cover: &Cover) -> Vec<Word> {
    let tree = cover.grow_tree(None);
    (0..cover.vertex_count()).map(|v| cover.tree_path(&tree, v)).collect()
}
