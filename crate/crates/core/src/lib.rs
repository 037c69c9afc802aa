//! Automatic martingales on formal languages.
//!
//! The crate is organised in layers:
//!
//! - [`automata`]: finite automata over convolved alphabets, length-lexicographic
//!   navigation, pumping and growth classification;
//! - [`dyadic`]: exact dyadic rationals, the capital type, and their two-row
//!   automatic presentation;
//! - [`engine`]: martingale states, texts, streams, fairness auditing and the
//!   setup algebra;
//! - [`constructions`]: concrete bettors, learners, adversarial texts and
//!   diagonalization;
//! - [`grammar`]: context-free grammars, CNF, quotients and the extraction of
//!   infinite regular subsets.

pub mod automata;
pub mod constructions;
pub mod dyadic;
pub mod engine;
pub mod grammar;
mod lcg;

pub use lcg::Lcg;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/capital.md")]
    mod capital {}
    #[doc = include_str!("../../../book/src/martingales.md")]
    mod martingales {}
    #[doc = include_str!("../../../book/src/bettors.md")]
    mod bettors {}
    #[doc = include_str!("../../../book/src/learners.md")]
    mod learners {}
    #[doc = include_str!("../../../book/src/machines.md")]
    mod machines {}
    #[doc = include_str!("../../../book/src/diagonal.md")]
    mod diagonal {}
    #[doc = include_str!("../../../book/src/grammars.md")]
    mod grammars {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
