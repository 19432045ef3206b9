use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet rank must be at least 1")]
    InvalidRank,
    #[error("letter index {gen} out of range for alphabet of rank {rank}")]
    LetterOutOfRange { gen: usize, rank: usize },
    #[error("operands live over different alphabets (ranks {left} and {right})")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("commutator requires at least one argument")]
    EmptyArgumentList,
    #[error("coset closure exceeded the cap of {cap} elements")]
    CoreTooLarge { cap: usize },
    #[error("covering map does not commute with edge labels on {edge}")]
    CoveringMapInvalid { edge: String },
    #[error("word is not a member of the subgroup")]
    NotInSubgroup,
    #[error("witness search exhausted after {attempts} candidates")]
    WitnessSearchExhausted { attempts: usize },
    #[error("verification suite '{suite}' failed on '{word}'")]
    VerificationFailed { suite: &'static str, word: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
