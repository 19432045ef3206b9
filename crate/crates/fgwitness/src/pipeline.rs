//! End-to-end witness pipeline.
//!
//! For a finitely generated subgroup `H` of infinite index in a free group
//! `F`, the pipeline produces a nontrivial normal subgroup `N ⊴ F` meeting
//! `H` trivially, together with an explicit witness element of `N`:
//!
//! 1. complete `H`'s core graph to a finite-index subgroup `K = H * Q`;
//! 2. take the kernel `I ⊴ F` of the coset action of `K` — finite index,
//!    normal, with coset representatives `b₁ = 1, b₂, …, b_m`;
//! 3. split `I = (I ∩ H) * J` along the adapted spanning tree and form
//!    `L = ⟨⟨J⟩⟩_I`, which meets `H` trivially;
//! 4. intersect the conjugates: `N = ⋂ᵢ bᵢ⁻¹ L bᵢ` is normal in `F` and
//!    still meets `H` trivially;
//! 5. exhibit a nontrivial element of `N`: pick a seed `l ∈ J`, form
//!    `xᵢ = bᵢ⁻¹ l bᵢ ∈ bᵢ⁻¹Lbᵢ`, and take the left-normed commutator
//!    `[x₁, …, x_m]`, which lands in every conjugate at once.
//!
//! A subgroup of finite index admits no such `N` (a nontrivial normal
//! subgroup meets every finite-index subgroup), so the pipeline refuses
//! those inputs explicitly rather than searching forever.
//!
//! Everything the pipeline claims is re-checked by bounded enumeration
//! before a report is issued: disjointness of `N` from `H`, normality of
//! `N`, the free factorization, and membership of the checked elements in
//! every conjugate of `L`.

use crate::completion::{complete, Completion};
use crate::error::{Error, Result};
use crate::factor::{factorize, FreeFactorization};
use crate::graph::{CoreGraph, Cover, SubgroupIndex};
use crate::normal_core::{coset_reps, GroupClosure, PermRep};
use crate::word::{Alphabet, Letter, Sign, Word};

/// Tunable limits, echoed into every report.
#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    /// Abort if the coset-action closure grows past this many elements.
    pub max_cosets: usize,
    /// Enumerate subgroup elements over this many basis letters when
    /// checking `H ∩ N = 1`.
    pub depth_disjoint: usize,
    /// Conjugate by all ambient words up to this length when checking
    /// normality of `N`.
    pub depth_normal: usize,
    /// Maximum number of seed candidates tried for the witness commutator.
    pub witness_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig { max_cosets: 10_000, depth_disjoint: 6, depth_normal: 4, witness_budget: 64 }
    }
}

/// What the pipeline concluded about the input subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PipelineStatus {
    /// Infinite index: a witness for a disjoint normal subgroup was found.
    Witness,
    /// Finite index: no nontrivial normal subgroup avoids the subgroup, so
    /// no witness exists and none is searched for.
    NoWitnessFiniteIndex,
    /// The trivial subgroup: every normal subgroup is disjoint from it, and
    /// the pipeline still runs to exhibit one.
    TrivialSubgroupWholeGroup,
}

impl PipelineStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PipelineStatus::Witness => "witness",
            PipelineStatus::NoWitnessFiniteIndex => "no_witness_finite_index",
            PipelineStatus::TrivialSubgroupWholeGroup => "trivial_subgroup_whole_group",
        }
    }
}

/// Index of the input subgroup, as reported.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HIndexStatus {
    Infinite,
    Finite(usize),
    Trivial,
}

/// The fully constructed subgroup tower for one input subgroup. Built for
/// every finitely generated input, finite index or not, so membership
/// queries in `H`, `K`, `I`, `L`, and `N` always have an answer.
#[derive(Debug)]
pub struct Chain {
    pub alphabet: Alphabet,
    pub generators: Vec<Word>,
    pub h_core: CoreGraph,
    pub completion: Completion,
    pub perm: PermRep,
    pub closure: GroupClosure,
    pub cover_i: Cover,
    pub reps: Vec<Word>,
    pub factorization: FreeFactorization,
}

impl Chain {
    pub fn build(generators: &[Word], alphabet: Alphabet, max_cosets: usize) -> Result<Chain> {
        let h_core = CoreGraph::from_generators(generators, alphabet)?;
        let completion = complete(&h_core);
        let perm = PermRep::from_cover(&completion.cover);
        let closure = perm.closure(max_cosets)?;
        let cover_i = closure.cayley_cover(alphabet);
        let reps = coset_reps(&cover_i);
        let factorization = factorize(&cover_i, &completion.cover, &h_core, &closure.covering_map)?;
        Ok(Chain {
            alphabet,
            generators: generators.to_vec(),
            h_core,
            completion,
            perm,
            closure,
            cover_i,
            reps,
            factorization,
        })
    }

    pub fn in_h(&self, w: &Word) -> bool {
        self.h_core.accepts(w)
    }

    pub fn in_k(&self, w: &Word) -> bool {
        self.completion.cover.accepts(w)
    }

    pub fn in_i(&self, w: &Word) -> bool {
        self.perm.acts_trivially(w)
    }

    pub fn in_l(&self, w: &Word) -> bool {
        self.factorization.in_l(w)
    }

    /// Membership in `N = ⋂ᵢ bᵢ⁻¹ L bᵢ`: the word must lie in the kernel and
    /// each rep-conjugate `bᵢ w bᵢ⁻¹` must lie in `L`.
    pub fn in_n(&self, w: &Word) -> bool {
        self.in_i(w)
            && self.reps.iter().all(|b| {
                let pushed = w.conjugate(&b.invert()).expect("reps share the alphabet");
                self.factorization.in_l(&pushed)
            })
    }
}

/// The witness element together with how it was assembled.
#[derive(Clone, Debug)]
pub struct WitnessData {
    /// The seed `l ∈ J` whose conjugates produced the witness.
    pub seed: Word,
    /// `xᵢ = bᵢ⁻¹ l bᵢ`, one per coset representative.
    pub conjugates: Vec<Word>,
    /// The left-normed commutator `[x₁, …, x_m]`.
    pub witness: Word,
    /// Number of seeds consumed, including degenerate ones.
    pub attempts: usize,
}

/// Numbers of individual checks each verification suite performed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VerificationCounts {
    pub disjointness: usize,
    pub normality: usize,
    pub free_factor: usize,
    pub lemma_intersection: usize,
}

/// A completed verification run. Only issued when every check passed;
/// any failure surfaces as an error instead.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Verification {
    pub depth_disjoint: usize,
    pub depth_normal: usize,
    pub counts: VerificationCounts,
}

/// Everything a caller needs to render a report.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub status: PipelineStatus,
    pub rank: usize,
    pub h_generators: Vec<Word>,
    pub h_rank: usize,
    pub h_index: HIndexStatus,
    pub k_index: usize,
    pub q_basis: Vec<Word>,
    pub i_index: usize,
    pub coset_reps: Vec<Word>,
    pub basis_ih: Vec<Word>,
    pub basis_j: Vec<Word>,
    pub witness: Option<Word>,
    pub verification: Option<Verification>,
    pub config: PipelineConfig,
}

/// Report plus the live structures behind it.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub report: WitnessReport,
    pub chain: Chain,
    pub witness_data: Option<WitnessData>,
}

/// Deterministic seed ladder: each `J`-basis word, then every ordered
/// product of two of them.
fn seed_ladder(basis_j: &[Word]) -> Vec<Word> {
    let mut seeds: Vec<Word> = basis_j.to_vec();
    for u in basis_j {
        for v in basis_j {
            seeds.push(u.multiply(v).expect("basis words share the alphabet"));
        }
    }
    seeds
}

/// Search the seed ladder for a nontrivial witness commutator. The result
/// is self-checked: it must lie in `N` and avoid `H`.
pub fn construct_witness(chain: &Chain, budget: usize) -> Result<WitnessData> {
    let mut attempts = 0usize;
    for seed in seed_ladder(&chain.factorization.basis_j) {
        if attempts >= budget {
            return Err(Error::WitnessSearchExhausted { attempts });
        }
        attempts += 1;
        let conjugates: Vec<Word> = chain
            .reps
            .iter()
            .map(|b| seed.conjugate(b).expect("reps share the alphabet"))
            .collect();
        let witness = Word::left_normed_commutator(&conjugates)?;
        if witness.is_identity() {
            continue;
        }
        if !chain.in_n(&witness) || chain.in_h(&witness) {
            return Err(Error::VerificationFailed { suite: "witness", word: witness.to_string() });
        }
        return Ok(WitnessData { seed, conjugates, witness, attempts });
    }
    Err(Error::WitnessSearchExhausted { attempts })
}

/// All reduced words of length ≤ `max_len` over `alphabet`, identity first,
/// in breadth-first order.
fn reduced_words(alphabet: Alphabet, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity(alphabet)];
    let mut frontier = vec![Word::identity(alphabet)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            for gen in 0..alphabet.rank() {
                for sign in [Sign::Pos, Sign::Neg] {
                    let letter = Letter { gen, sign };
                    if word
                        .letters()
                        .last()
                        .is_some_and(|last| last.gen == letter.gen && last.sign != letter.sign)
                    {
                        continue;
                    }
                    let mut letters = word.letters().to_vec();
                    letters.push(letter);
                    next.push(Word::reduce(letters, alphabet).expect("letters are in range"));
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Nonempty elements of `H` given as reduced words over its basis, expanded
/// to ambient words, in breadth-first order over the abstract letters.
fn subgroup_elements(basis: &[Word], alphabet: Alphabet, max_len: usize) -> Vec<Word> {
    // (last abstract letter, expansion); the letter is (index, sign).
    let mut all: Vec<Word> = Vec::new();
    let mut frontier: Vec<((usize, Sign), Word)> = vec![];
    for len in 0..max_len {
        let previous: Vec<((usize, Sign), Word)> = if len == 0 {
            vec![((usize::MAX, Sign::Pos), Word::identity(alphabet))]
        } else {
            frontier.clone()
        };
        frontier = Vec::new();
        for (last, expansion) in previous {
            for (index, base) in basis.iter().enumerate() {
                for sign in [Sign::Pos, Sign::Neg] {
                    if last.0 == index && last.1 != sign {
                        continue; // would cancel the previous abstract letter
                    }
                    let factor = match sign {
                        Sign::Pos => base.clone(),
                        Sign::Neg => base.invert(),
                    };
                    let expanded =
                        expansion.multiply(&factor).expect("basis words share the alphabet");
                    frontier.push(((index, sign), expanded));
                }
            }
        }
        all.extend(frontier.iter().map(|(_, w)| w.clone()));
    }
    all
}

/// The elements of `N` the normality suite conjugates: the witness, its seed
/// conjugates, its rep-conjugates, and all pairwise products of the latter —
/// filtered down to nontrivial members of `N`, first occurrence kept.
fn verification_members(chain: &Chain, data: &WitnessData) -> Vec<Word> {
    let rep_conjugates: Vec<Word> = chain
        .reps
        .iter()
        .map(|b| data.witness.conjugate(b).expect("reps share the alphabet"))
        .collect();
    let mut pool: Vec<Word> = vec![data.witness.clone()];
    pool.extend(data.conjugates.iter().cloned());
    pool.extend(rep_conjugates.iter().cloned());
    for u in &rep_conjugates {
        for v in &rep_conjugates {
            pool.push(u.multiply(v).expect("conjugates share the alphabet"));
        }
    }
    let mut members: Vec<Word> = Vec::new();
    for word in pool {
        if !word.is_identity() && chain.in_n(&word) && !members.contains(&word) {
            members.push(word);
        }
    }
    members
}

/// Run the four verification suites at the given depths. Returns the check
/// counts on success; the first failing check aborts with the offending
/// word.
pub fn verify(
    chain: &Chain,
    data: &WitnessData,
    depth_disjoint: usize,
    depth_normal: usize,
) -> Result<Verification> {
    let alphabet = chain.alphabet;

    // Disjointness: no nontrivial element of H lies in N.
    let h_basis = chain.h_core.basis().words;
    let mut disjointness = 0usize;
    for element in subgroup_elements(&h_basis, alphabet, depth_disjoint) {
        disjointness += 1;
        if chain.in_n(&element) {
            return Err(Error::VerificationFailed {
                suite: "disjointness",
                word: element.to_string(),
            });
        }
    }

    // Normality: every member stays in N under conjugation by every short
    // ambient word (the identity conjugator included).
    let members = verification_members(chain, data);
    let mut normality = 0usize;
    for f in reduced_words(alphabet, depth_normal) {
        for member in &members {
            normality += 1;
            let conjugated = member.conjugate(&f).expect("conjugators share the alphabet");
            if !chain.in_n(&conjugated) {
                return Err(Error::VerificationFailed {
                    suite: "normality",
                    word: conjugated.to_string(),
                });
            }
        }
    }

    // Free factorization: the h-letters generate exactly I ∩ H, compared as
    // canonical graphs against the fiber product of the two covers.
    let from_basis = CoreGraph::from_generators(&chain.factorization.basis_ih, alphabet)?;
    let from_pullback = chain.cover_i.pullback(&chain.h_core);
    if from_basis.canonical_bytes() != from_pullback.canonical_bytes() {
        return Err(Error::VerificationFailed { suite: "freeFactor", word: "I∩H".to_string() });
    }
    let free_factor = 1usize;

    // Conjugate containment: every member lies in every rep-conjugate of L,
    // checked directly against the factorization.
    let mut lemma_intersection = 0usize;
    for member in &members {
        for b in &chain.reps {
            lemma_intersection += 1;
            let pushed = member.conjugate(&b.invert()).expect("reps share the alphabet");
            if !chain.factorization.in_l(&pushed) {
                return Err(Error::VerificationFailed {
                    suite: "lemmaIntersection",
                    word: member.to_string(),
                });
            }
        }
    }

    Ok(Verification {
        depth_disjoint,
        depth_normal,
        counts: VerificationCounts { disjointness, normality, free_factor, lemma_intersection },
    })
}

/// Single-depth verification entry point: the conjugation depth is capped at
/// 4 to keep the normality sweep tractable while the disjointness depth
/// scales freely.
pub fn verify_report(chain: &Chain, data: &WitnessData, depth: usize) -> Result<Verification> {
    verify(chain, data, depth, depth.min(4))
}

/// Run the full pipeline on a generating set.
pub fn run_pipeline(
    generators: &[Word],
    alphabet: Alphabet,
    config: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let chain = Chain::build(generators, alphabet, config.max_cosets)?;
    let trivial = chain.h_core.is_trivial();
    let finite = matches!(chain.h_core.index(), SubgroupIndex::Finite(_));
    let status = if trivial {
        PipelineStatus::TrivialSubgroupWholeGroup
    } else if finite {
        PipelineStatus::NoWitnessFiniteIndex
    } else {
        PipelineStatus::Witness
    };
    let h_index = if trivial {
        HIndexStatus::Trivial
    } else {
        match chain.h_core.index() {
            SubgroupIndex::Finite(n) => HIndexStatus::Finite(n),
            SubgroupIndex::Infinite => HIndexStatus::Infinite,
        }
    };

    let (witness_data, verification) = if status == PipelineStatus::NoWitnessFiniteIndex {
        (None, None)
    } else {
        let data = construct_witness(&chain, config.witness_budget)?;
        let verification = verify(&chain, &data, config.depth_disjoint, config.depth_normal)?;
        (Some(data), Some(verification))
    };

    let report = WitnessReport {
        status,
        rank: alphabet.rank(),
        h_generators: chain.generators.clone(),
        h_rank: chain.h_core.cycle_rank(),
        h_index,
        k_index: chain.completion.k_index,
        q_basis: chain.completion.basis_q.clone(),
        i_index: chain.closure.order(),
        coset_reps: chain.reps.clone(),
        basis_ih: chain.factorization.basis_ih.clone(),
        basis_j: chain.factorization.basis_j.clone(),
        witness: witness_data.as_ref().map(|d| d.witness.clone()),
        verification,
        config: *config,
    };
    Ok(PipelineOutcome { report, chain, witness_data })
}
