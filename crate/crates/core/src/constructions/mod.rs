//! Bettors, learners, adversarial texts and the other constructive
//! arguments of the theory, as runnable setups.
//!
//! Every setup here is built with [`Setup::primitive`](crate::engine::Setup::primitive),
//! so its capital can only move by the factors it declares (3/2 and 1/2 for
//! an ordinary bet, 2 and 0 for an all-in bet, 1 for no bet).

mod adversary;
mod bettors;
mod diagonal;
mod family;
mod indexing;
mod pclass;
mod tm;

pub use adversary::{
    adversarial_text, extract_language, extract_member, Adversary, StallWitness, TextMode,
    DEFAULT_SEARCH_BOUND,
};
pub use bettors::{regular_bettor, subset_bettor, Side};
pub use diagonal::{
    diagonalize, enumeration_hash, verify_certificate, CertificateEntry, CertificateError,
    DiagonalCertificate,
};
pub use family::{
    dovetail_next, dovetail_pairs, family_learner, variant_family_learner, AutomaticFamily,
};
pub use indexing::{finite_set_indexing, FiniteSetIndexing, MAX_SLICE_BOUND};
pub use pclass::{
    anchor_gaps, current_anchor, current_hypothesis, hypotheses_exhausted, index_number,
    pclass_bettor, AnchorGap, AnchorReport, Budget, HypothesisSpace,
};
pub use tm::{machines, tm_dynamic_bettor, Move, TmConfig, TmProgram, TmRule};
