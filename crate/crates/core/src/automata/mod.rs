//! Finite automata over plain and convolved alphabets.
//!
//! A `k`-ary relation over words is handled through the convolution of its
//! arguments: the words are written as rows of a block, shorter rows padded
//! with `#`, and an automaton reads the block column by column.

mod dfa;
mod embed;
pub mod examples;
mod growth;
mod io;
mod nfa;
mod order;
mod word;

pub use dfa::{BoolOp, Dfa};
pub use embed::{embed_alphabet, Embedding};
pub use growth::{
    exponential_witness, growth_class, pump_decompose, pumping_constant, GrowthClass,
};
pub use io::{dfa_from_json, dfa_to_json};
pub use nfa::{determinize, Nfa};
pub use order::{
    count_leq_ll, enumerate_ll, min_ll, min_ll_at_least, slice_counts, succ_ll, LlIter, OwnedLlIter,
};
pub use word::{convolve, Alphabet, ConvolvedWord, Symbol, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("automata over different alphabets")]
    AlphabetMismatch,
    #[error("an alphabet needs at least one track")]
    NoTracks,
    #[error("invalid letter {0}")]
    InvalidLetter(String),
    #[error("malformed automaton: {0}")]
    Format(String),
    #[error("language is empty")]
    EmptyLanguage,
    #[error("no member above the given word")]
    NoSuccessor,
    #[error("word is not a member")]
    NotAMember,
    #[error("word of length {len} is shorter than the pumping constant {needed}")]
    WordTooShort { len: usize, needed: usize },
}
