//! Free factorization `I = (I ∩ H) * J` of the normal kernel over a subgroup.
//!
//! Inside the kernel's Cayley cover, the edges projecting onto the subgroup's
//! own core graph form a subgraph Δ. Growing the spanning tree inside Δ
//! first adapts the kernel's basis to the factorization: non-tree edges in
//! the basepoint component of Δ spell a basis of `I ∩ H` (h-letters), and
//! every other non-tree edge contributes a complementary j-letter. Killing
//! the j-letters retracts `I` onto `I ∩ H`, so the normal closure
//! `L = ⟨⟨J⟩⟩_I` — the retraction's kernel — meets `I ∩ H` trivially. That
//! disjointness is what the whole pipeline is built to exploit.
//!
//! Words in `I` are rewritten over the adapted basis by tracing their path
//! from the basepoint and emitting one abstract letter per non-tree edge
//! crossed.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{CoreGraph, Cover, Edge};
use crate::word::{Sign, Word};

/// Which free factor an adapted-basis letter belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisPart {
    /// A basis letter of `I ∩ H`.
    H,
    /// A basis letter of the complement `J`.
    J,
}

/// One signed letter of the adapted basis `{h₁.., j₁..}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BasisLetter {
    pub part: BasisPart,
    pub index: usize,
    pub sign: Sign,
}

impl BasisLetter {
    fn cancels(&self, other: &BasisLetter) -> bool {
        self.part == other.part && self.index == other.index && self.sign != other.sign
    }
}

/// The adapted basis of the kernel `I`, split as `I = (I ∩ H) * J`.
#[derive(Clone, Debug)]
pub struct FreeFactorization {
    cover_i: Cover,
    /// Edges of the Cayley cover lying over the subgroup's core graph.
    pub delta: BTreeSet<Edge>,
    /// Basis of `I ∩ H`, expanded to ambient words.
    pub basis_ih: Vec<Word>,
    /// Basis of the complement `J`, expanded to ambient words.
    pub basis_j: Vec<Word>,
    /// Non-tree edges behind `basis_ih`, in matching order.
    pub ih_edges: Vec<Edge>,
    /// Non-tree edges behind `basis_j`, in matching order.
    pub j_edges: Vec<Edge>,
    letter_of: HashMap<Edge, (BasisPart, usize)>,
}

/// Compute the adapted factorization of the kernel `I` over the subgroup
/// whose core graph is `h_core`. `covering_map` sends each Cayley-cover
/// vertex to the cover vertex its group element reaches from the basepoint;
/// it is checked to be a basepointed graph morphism onto `cover_k`.
pub fn factorize(
    cover_i: &Cover,
    cover_k: &Cover,
    h_core: &CoreGraph,
    covering_map: &[usize],
) -> Result<FreeFactorization> {
    if covering_map.len() != cover_i.vertex_count() {
        return Err(Error::CoveringMapInvalid {
            edge: format!(
                "map covers {} of {} vertices",
                covering_map.len(),
                cover_i.vertex_count()
            ),
        });
    }
    if covering_map.first() != Some(&0) {
        return Err(Error::CoveringMapInvalid { edge: "basepoint must map to basepoint".into() });
    }

    // Δ = preimage of the subgroup's edges; every edge must project to an
    // edge of the cover for the map to be a covering at all.
    let mut delta: BTreeSet<Edge> = BTreeSet::new();
    for e in cover_i.edges() {
        let image = Edge { from: covering_map[e.from], label: e.label, to: covering_map[e.to] };
        if cover_k.out(image.label, image.from) != Some(image.to) {
            return Err(Error::CoveringMapInvalid { edge: e.describe() });
        }
        if h_core.out(image.label, image.from) == Some(image.to) {
            delta.insert(e);
        }
    }

    let tree = cover_i.grow_tree(Some(&delta));
    let mut non_tree: Vec<Edge> = cover_i
        .edges()
        .into_iter()
        .filter(|e| !tree.tree_edges.contains(e))
        .collect();
    non_tree.sort_by_key(|e| (e.to, e.label, e.from));

    let mut basis_ih = Vec::new();
    let mut basis_j = Vec::new();
    let mut ih_edges = Vec::new();
    let mut j_edges = Vec::new();
    let mut letter_of = HashMap::new();
    for &edge in &non_tree {
        let word = cover_i.basis_word(&tree, edge);
        // An edge belongs to the basepoint component Δ₀ exactly when it is a
        // Δ-edge whose endpoints were reached in the Δ-restricted phase.
        if delta.contains(&edge) && tree.phase_one[edge.from] && tree.phase_one[edge.to] {
            letter_of.insert(edge, (BasisPart::H, basis_ih.len()));
            basis_ih.push(word);
            ih_edges.push(edge);
        } else {
            letter_of.insert(edge, (BasisPart::J, basis_j.len()));
            basis_j.push(word);
            j_edges.push(edge);
        }
    }
    Ok(FreeFactorization {
        cover_i: cover_i.clone(),
        delta,
        basis_ih,
        basis_j,
        ih_edges,
        j_edges,
        letter_of,
    })
}

impl FreeFactorization {
    /// Rewrite a kernel element over the adapted basis: trace its path from
    /// the basepoint and emit one letter per non-tree edge crossed, freely
    /// reduced. Words outside the kernel have no such expression.
    pub fn express(&self, w: &Word) -> Result<Vec<BasisLetter>> {
        let mut letters: Vec<BasisLetter> = Vec::new();
        let mut at = 0usize;
        for letter in w.letters() {
            let (edge, sign) = match letter.sign {
                Sign::Pos => {
                    let to = self.cover_i.out(letter.gen, at).ok_or(Error::NotInSubgroup)?;
                    (Edge { from: at, label: letter.gen, to }, Sign::Pos)
                }
                Sign::Neg => {
                    let from = self.cover_i.inn(letter.gen, at).ok_or(Error::NotInSubgroup)?;
                    (Edge { from, label: letter.gen, to: at }, Sign::Neg)
                }
            };
            at = match sign {
                Sign::Pos => edge.to,
                Sign::Neg => edge.from,
            };
            if let Some(&(part, index)) = self.letter_of.get(&edge) {
                let next = BasisLetter { part, index, sign };
                if letters.last().is_some_and(|last| last.cancels(&next)) {
                    letters.pop();
                } else {
                    letters.push(next);
                }
            }
        }
        if at != 0 {
            return Err(Error::NotInSubgroup);
        }
        Ok(letters)
    }

    /// Multiply an adapted-basis expression back out to an ambient word.
    pub fn expand(&self, letters: &[BasisLetter]) -> Word {
        let mut word = Word::identity(self.cover_i.alphabet());
        for letter in letters {
            let base = match letter.part {
                BasisPart::H => &self.basis_ih[letter.index],
                BasisPart::J => &self.basis_j[letter.index],
            };
            let factor = match letter.sign {
                Sign::Pos => base.clone(),
                Sign::Neg => base.invert(),
            };
            word = word.multiply(&factor).expect("basis words share the alphabet");
        }
        word
    }

    /// Membership in `L = ⟨⟨J⟩⟩_I`, the kernel of the retraction onto
    /// `I ∩ H`: delete the j-letters from the adapted expression and check
    /// the leftover h-word cancels to nothing. Words outside `I` are not in
    /// `L` at all.
    pub fn in_l(&self, w: &Word) -> bool {
        let Ok(letters) = self.express(w) else {
            return false;
        };
        let mut h_only: Vec<BasisLetter> = Vec::new();
        for letter in letters {
            if letter.part == BasisPart::J {
                continue;
            }
            if h_only.last().is_some_and(|last| last.cancels(&letter)) {
                h_only.pop();
            } else {
                h_only.push(letter);
            }
        }
        h_only.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_word;
    use crate::completion::complete;
    use crate::normal_core::PermRep;
    use crate::word::{Alphabet, Letter};

    fn ab() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s, ab()).unwrap()
    }

    fn setup(texts: &[&str]) -> (CoreGraph, FreeFactorization) {
        let gens: Vec<Word> = texts.iter().map(|t| w(t)).collect();
        let core = CoreGraph::from_generators(&gens, ab()).unwrap();
        let completion = complete(&core);
        let closure = PermRep::from_cover(&completion.cover).closure(10_000).unwrap();
        let cover_i = closure.cayley_cover(ab());
        let factorization =
            factorize(&cover_i, &completion.cover, &core, &closure.covering_map).unwrap();
        (core, factorization)
    }

    fn letter(part: BasisPart, index: usize, sign: Sign) -> BasisLetter {
        BasisLetter { part, index, sign }
    }

    fn enumerate_words(alphabet: Alphabet, max_len: usize) -> Vec<Word> {
        let mut all = vec![Word::identity(alphabet)];
        let mut frontier = vec![Word::identity(alphabet)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &frontier {
                for gen in 0..alphabet.rank() {
                    for sign in [Sign::Pos, Sign::Neg] {
                        let l = Letter { gen, sign };
                        if word
                            .letters()
                            .last()
                            .is_some_and(|last| last.gen == l.gen && last.sign != l.sign)
                        {
                            continue;
                        }
                        let mut letters = word.letters().to_vec();
                        letters.push(l);
                        next.push(Word::reduce(letters, alphabet).unwrap());
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }

    #[test]
    fn worked_example_factorization() {
        let (_, f) = setup(&["aa", "ab"]);
        assert_eq!(
            f.delta.iter().copied().collect::<Vec<_>>(),
            vec![
                Edge { from: 0, label: 0, to: 1 },
                Edge { from: 1, label: 0, to: 0 },
                Edge { from: 1, label: 1, to: 0 },
            ]
        );
        assert_eq!(f.basis_ih, vec![w("aa"), w("ab")]);
        assert_eq!(f.basis_j, vec![w("bA")]);
        assert_eq!(f.ih_edges, vec![Edge { from: 1, label: 0, to: 0 }, Edge { from: 1, label: 1, to: 0 }]);
        assert_eq!(f.j_edges, vec![Edge { from: 0, label: 1, to: 1 }]);
    }

    #[test]
    fn worked_example_expression() {
        let (_, f) = setup(&["aa", "ab"]);
        // a·b⁻²·a·b·a⁻²·b crosses j₁ backward, h₂ backward, h₁, j₁, h₁
        // backward, h₂ — in that order.
        assert_eq!(
            f.express(&w("aBBabAAb")).unwrap(),
            vec![
                letter(BasisPart::J, 0, Sign::Neg),
                letter(BasisPart::H, 1, Sign::Neg),
                letter(BasisPart::H, 0, Sign::Pos),
                letter(BasisPart::J, 0, Sign::Pos),
                letter(BasisPart::H, 0, Sign::Neg),
                letter(BasisPart::H, 1, Sign::Pos),
            ]
        );
        assert_eq!(f.express(&w("aa")).unwrap(), vec![letter(BasisPart::H, 0, Sign::Pos)]);
        assert_eq!(f.express(&w("bA")).unwrap(), vec![letter(BasisPart::J, 0, Sign::Pos)]);
        assert_eq!(f.express(&w("")).unwrap(), vec![]);
        assert!(matches!(f.express(&w("a")), Err(Error::NotInSubgroup)));
    }

    #[test]
    fn retraction_kernel_examples() {
        let (_, f) = setup(&["aa", "ab"]);
        assert!(f.in_l(&w("aBBabAAb")));
        assert!(f.in_l(&w("bA")));
        assert!(f.in_l(&w("aabAAA"))); // h₁·j₁·h₁⁻¹: the h-residue cancels
        assert!(f.in_l(&w("")));
        assert!(!f.in_l(&w("aa")));
        assert!(!f.in_l(&w("ab")));
        assert!(!f.in_l(&w("abAB"))); // expresses as h₂h₁⁻¹j₁⁻¹, residue h₂h₁⁻¹
        assert!(!f.in_l(&w("a"))); // not even in the kernel I
    }

    #[test]
    fn whole_group_kernel_splits_over_a_single_generator() {
        // H = ⟨a⟩ has kernel I = F: the Cayley cover is the one-vertex rose,
        // Δ is the a-loop, and the complement is generated by b.
        let (_, f) = setup(&["a"]);
        assert_eq!(f.basis_ih, vec![w("a")]);
        assert_eq!(f.basis_j, vec![w("b")]);
        assert!(f.in_l(&w("b")));
        assert!(!f.in_l(&w("aba"))); // expresses as h₁j₁h₁, residue h₁²
        assert!(f.in_l(&w("abA")));
        assert!(!f.in_l(&w("a")));
    }

    #[test]
    fn three_sheeted_kernel_example() {
        // H = ⟨ab, ba⟩ has a kernel of index 3 whose adapted basis splits as
        // two h-letters and two j-letters.
        let (core, f) = setup(&["ab", "ba"]);
        assert_eq!(f.basis_ih, vec![w("ab"), w("ba")]);
        assert_eq!(f.basis_j, vec![w("AbA"), w("aaa")]);
        for word in &f.basis_ih {
            assert!(core.accepts(word));
        }
        for word in &f.basis_j {
            assert!(!core.accepts(word));
        }
    }

    #[test]
    fn disconnected_preimage_assigns_stray_edges_to_j() {
        // For H = ⟨a², abab⟩ every generator acts trivially on the cosets of
        // its completion — H sits inside its own kernel I (of index 8), and Δ
        // splits into two components. The non-basepoint component carries
        // Δ-edges whose letters must land in J even though they lie over the
        // subgroup's core graph.
        let (core, f) = setup(&["aa", "abab"]);
        assert_eq!(f.cover_i.vertex_count(), 8);
        assert_eq!(f.basis_ih.len(), 2);
        assert_eq!(f.basis_j.len(), 7);
        assert!(
            f.j_edges.iter().any(|e| f.delta.contains(e)),
            "expected some Δ-edge outside the basepoint component"
        );
        for word in &f.basis_ih {
            assert!(core.accepts(word), "h-letter {word} must lie in the subgroup");
            assert!(!f.in_l(word));
        }
        for word in &f.basis_j {
            assert!(!core.accepts(word), "j-letter {word} must avoid the subgroup");
            assert!(f.in_l(word));
        }
    }

    #[test]
    fn expression_round_trips() {
        for texts in [vec!["aa", "ab"], vec!["a"], vec!["ab", "ba"], vec!["abA"]] {
            let (_, f) = setup(&texts);
            for word in enumerate_words(ab(), 6) {
                match f.express(&word) {
                    Ok(letters) => {
                        assert_eq!(f.expand(&letters), word, "round trip fails on {word}");
                    }
                    Err(Error::NotInSubgroup) => {}
                    Err(other) => panic!("unexpected error {other}"),
                }
            }
        }
    }

    #[test]
    fn retraction_kernel_meets_subgroup_trivially() {
        for texts in [vec!["aa", "ab"], vec!["a"], vec!["ab", "ba"], vec!["abA"]] {
            let (core, f) = setup(&texts);
            for word in enumerate_words(ab(), 6) {
                if f.in_l(&word) && core.accepts(&word) {
                    assert!(word.is_identity(), "L ∩ H contains {word}");
                }
            }
        }
    }

    #[test]
    fn corrupted_covering_map_is_rejected() {
        let gens = vec![w("aa"), w("ab")];
        let core = CoreGraph::from_generators(&gens, ab()).unwrap();
        let completion = complete(&core);
        let closure = PermRep::from_cover(&completion.cover).closure(10_000).unwrap();
        let cover_i = closure.cayley_cover(ab());
        for bad in [vec![0], vec![1, 0], vec![0, 0]] {
            let err = factorize(&cover_i, &completion.cover, &core, &bad).unwrap_err();
            assert!(matches!(err, Error::CoveringMapInvalid { .. }), "map {bad:?} accepted");
        }
    }
}
