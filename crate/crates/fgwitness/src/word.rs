//! Reduced words over a fixed free-group alphabet.
//!
//! A [`Word`] is always freely reduced — no letter sits next to its own
//! inverse — so equality of words is equality of group elements. The empty
//! word is the identity. Operations never mutate; they build new words.

use std::fmt;

use crate::error::{Error, Result};

/// The ambient alphabet, identified by its rank. Generators are indexed
/// `0..rank`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank);
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All positive one-letter words, in generator order.
    pub fn generators(&self) -> impl Iterator<Item = Letter> {
        (0..self.rank).map(Letter::positive)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A generator or an inverse generator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub gen: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn positive(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Pos }
    }

    pub fn negative(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Neg }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: self.sign.flip() }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word: the normal form of a free-group element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

/// Push a letter onto a reduced stack, cancelling against the top if possible.
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    match stack.last() {
        Some(top) if top.cancels(letter) => {
            stack.pop();
        }
        _ => stack.push(letter),
    }
}

impl Word {
    /// The empty word.
    pub fn identity(alphabet: Alphabet) -> Word {
        Word { alphabet, letters: Vec::new() }
    }

    /// Freely reduce a raw letter sequence. This is the only constructor, so
    /// every `Word` is reduced by construction.
    pub fn reduce<I>(letters: I, alphabet: Alphabet) -> Result<Word>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut stack = Vec::new();
        for letter in letters {
            if letter.gen >= alphabet.rank() {
                return Err(Error::LetterOutOfRange { gen: letter.gen, rank: alphabet.rank() });
            }
            push_reduced(&mut stack, letter);
        }
        Ok(Word { alphabet, letters: stack })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_alphabet(&self, other: &Word) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: other.alphabet.rank(),
            });
        }
        Ok(())
    }

    /// Product `self · rhs`, reduced at the seam.
    pub fn multiply(&self, rhs: &Word) -> Result<Word> {
        self.check_alphabet(rhs)?;
        let mut stack = self.letters.clone();
        for &letter in &rhs.letters {
            push_reduced(&mut stack, letter);
        }
        Ok(Word { alphabet: self.alphabet, letters: stack })
    }

    /// Inverse: reverse the letters and flip every sign.
    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word { alphabet: self.alphabet, letters }
    }

    /// Conjugate `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Result<Word> {
        g.invert().multiply(self)?.multiply(g)
    }

    /// Left-normed commutator `[x₁, …, x_n]`: `[x] = x` and
    /// `[x₁, …, x_k] = c⁻¹ x_k⁻¹ c x_k` where `c = [x₁, …, x_{k-1}]`.
    pub fn left_normed_commutator(args: &[Word]) -> Result<Word> {
        let Some(first) = args.first() else {
            return Err(Error::EmptyArgumentList);
        };
        let mut c = first.clone();
        for x in &args[1..] {
            c = c.invert().multiply(&x.invert())?.multiply(&c)?.multiply(x)?;
        }
        Ok(c)
    }
}

impl fmt::Display for Word {
    /// Letter syntax (`a`/`A` = generator 0 and its inverse) when the rank
    /// fits the Latin alphabet, numeric syntax (`x1`/`X1`, 1-based) otherwise.
    /// The empty word prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.rank() <= 26 {
            for l in &self.letters {
                let base = match l.sign {
                    Sign::Pos => b'a',
                    Sign::Neg => b'A',
                };
                write!(f, "{}", (base + l.gen as u8) as char)?;
            }
        } else {
            for l in &self.letters {
                let prefix = match l.sign {
                    Sign::Pos => 'x',
                    Sign::Neg => 'X',
                };
                write!(f, "{}{}", prefix, l.gen + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_word;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s, ab()).unwrap()
    }

    /// Independent reduction oracle: rescan the whole sequence until no
    /// adjacent inverse pair is left.
    fn naive_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
        loop {
            let mut changed = false;
            let mut out: Vec<Letter> = Vec::new();
            let mut i = 0;
            while i < letters.len() {
                if i + 1 < letters.len() && letters[i].cancels(letters[i + 1]) {
                    i += 2;
                    changed = true;
                } else {
                    out.push(letters[i]);
                    i += 1;
                }
            }
            letters = out;
            if !changed {
                return letters;
            }
        }
    }

    /// All reduced words of length <= max_len, in deterministic order.
    fn enumerate_words(alphabet: Alphabet, max_len: usize) -> Vec<Word> {
        let mut all = vec![Word::identity(alphabet)];
        let mut frontier = vec![Word::identity(alphabet)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &frontier {
                for gen in 0..alphabet.rank() {
                    for sign in [Sign::Pos, Sign::Neg] {
                        let letter = Letter { gen, sign };
                        if word.letters().last().is_some_and(|l| l.cancels(letter)) {
                            continue;
                        }
                        let mut letters = word.letters().to_vec();
                        letters.push(letter);
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
    fn reduce_cancels_adjacent_inverses() {
        assert_eq!(w("aA"), Word::identity(ab()));
        assert_eq!(w(""), Word::identity(ab()));
        // a b a⁻¹ a b⁻¹ collapses to a.
        assert_eq!(w("abAaB"), w("a"));
    }

    #[test]
    fn reduce_rejects_out_of_range_letters() {
        let err = Word::reduce([Letter::positive(2)], ab()).unwrap_err();
        assert!(matches!(err, Error::LetterOutOfRange { gen: 2, rank: 2 }));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w("ab").multiply(&w("Ba")).unwrap(), w("aa"));
        assert_eq!(w("a").multiply(&w("A")).unwrap(), Word::identity(ab()));
        let three = Alphabet::new(3).unwrap();
        let u = parse_word("abc", three).unwrap();
        assert_eq!(u.multiply(&Word::identity(three)).unwrap(), u);
    }

    #[test]
    fn multiply_rejects_alphabet_mismatch() {
        let three = Alphabet::new(3).unwrap();
        let err = w("a").multiply(&Word::identity(three)).unwrap_err();
        assert!(matches!(err, Error::AlphabetMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").invert(), w("BA"));
        assert_eq!(Word::identity(ab()).invert(), Word::identity(ab()));
        assert_eq!(w("aBa").invert(), w("AbA"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("a").conjugate(&w("b")).unwrap(), w("Bab"));
        assert_eq!(w("ab").conjugate(&Word::identity(ab())).unwrap(), w("ab"));
        // Derived via the naive oracle below: a⁻¹ · ba⁻¹ · a = a⁻¹b.
        let expected = {
            let mut letters = w("A").letters().to_vec();
            letters.extend_from_slice(w("bA").letters());
            letters.extend_from_slice(w("a").letters());
            Word::reduce(naive_reduce(letters), ab()).unwrap()
        };
        assert_eq!(expected, w("Ab"));
        assert_eq!(w("bA").conjugate(&w("a")).unwrap(), w("Ab"));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(Word::left_normed_commutator(&[w("a"), w("a")]).unwrap(), w(""));
        assert_eq!(
            Word::left_normed_commutator(&[w("a"), w("b")]).unwrap(),
            w("ABab")
        );
        assert!(matches!(
            Word::left_normed_commutator(&[]).unwrap_err(),
            Error::EmptyArgumentList
        ));
    }

    #[test]
    fn commutator_of_witness_conjugates() {
        // [ba⁻¹, a⁻¹b] — recompute with the naive oracle, then freeze.
        let x = w("bA");
        let y = w("Ab");
        let mut letters = x.invert().letters().to_vec();
        letters.extend_from_slice(y.invert().letters());
        letters.extend_from_slice(x.letters());
        letters.extend_from_slice(y.letters());
        let oracle = Word::reduce(naive_reduce(letters), ab()).unwrap();
        assert_eq!(oracle, w("aBBabAAb"));
        assert_eq!(Word::left_normed_commutator(&[x, y]).unwrap(), w("aBBabAAb"));
    }

    #[test]
    fn group_laws_by_enumeration() {
        // Identity and inverse on all words of length <= 4 over rank 2;
        // associativity on all triples of words of length <= 2 plus a swept
        // third factor of length <= 4.
        let words = enumerate_words(ab(), 4);
        let e = Word::identity(ab());
        for u in &words {
            assert_eq!(&u.multiply(&e).unwrap(), u);
            assert_eq!(&e.multiply(u).unwrap(), u);
            assert_eq!(u.multiply(&u.invert()).unwrap(), e);
            assert_eq!(u.invert().multiply(u).unwrap(), e);
        }
        let short = enumerate_words(ab(), 2);
        for u in &short {
            for v in &short {
                let uv = u.multiply(v).unwrap();
                for x in &words {
                    let left = uv.multiply(x).unwrap();
                    let right = u.multiply(&v.multiply(x).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn commutator_trivial_iff_words_commute() {
        // Checked against brute-force reduction for all pairs of length <= 3.
        let words = enumerate_words(ab(), 3);
        for x in &words {
            for y in &words {
                let c = Word::left_normed_commutator(&[x.clone(), y.clone()]).unwrap();
                let mut xy = x.letters().to_vec();
                xy.extend_from_slice(y.letters());
                let mut yx = y.letters().to_vec();
                yx.extend_from_slice(x.letters());
                let commute = naive_reduce(xy) == naive_reduce(yx);
                assert_eq!(c.is_identity(), commute, "x={x} y={y}");
            }
        }
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in proptest::collection::vec((0usize..2, any::<bool>()), 0..16)) {
            let letters: Vec<Letter> = raw
                .into_iter()
                .map(|(gen, pos)| if pos { Letter::positive(gen) } else { Letter::negative(gen) })
                .collect();
            let once = Word::reduce(letters, ab()).unwrap();
            let twice = Word::reduce(once.letters().iter().copied(), ab()).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(Word::reduce(naive_reduce(once.letters().to_vec()), ab()).unwrap(), once);
        }

        #[test]
        fn product_inverse_law(
            raw_u in proptest::collection::vec((0usize..2, any::<bool>()), 0..10),
            raw_v in proptest::collection::vec((0usize..2, any::<bool>()), 0..10),
        ) {
            let mk = |raw: Vec<(usize, bool)>| {
                let letters: Vec<Letter> = raw
                    .into_iter()
                    .map(|(gen, pos)| if pos { Letter::positive(gen) } else { Letter::negative(gen) })
                    .collect();
                Word::reduce(letters, ab()).unwrap()
            };
            let u = mk(raw_u);
            let v = mk(raw_v);
            let lhs = u.multiply(&v).unwrap().invert();
            let rhs = v.invert().multiply(&u.invert()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_round_trips(
            raw_w in proptest::collection::vec((0usize..2, any::<bool>()), 0..10),
            raw_g in proptest::collection::vec((0usize..2, any::<bool>()), 0..10),
        ) {
            let mk = |raw: Vec<(usize, bool)>| {
                let letters: Vec<Letter> = raw
                    .into_iter()
                    .map(|(gen, pos)| if pos { Letter::positive(gen) } else { Letter::negative(gen) })
                    .collect();
                Word::reduce(letters, ab()).unwrap()
            };
            let word = mk(raw_w);
            let g = mk(raw_g);
            let back = word.conjugate(&g).unwrap().conjugate(&g.invert()).unwrap();
            prop_assert_eq!(back, word);
        }
    }
}
