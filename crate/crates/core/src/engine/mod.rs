//! Martingale states, texts, streams and the run loop.
//!
//! A martingale state is a capital together with a fixed-arity tuple of memory
//! words. At each stage the stream delivers either a labeled word `(x, b)` or
//! a pause; the setup's step function moves to the next state. Every step must
//! be fair: from any state `s` and word `x`,
//! `2π(s) = π(f(s,x,0)) + π(f(s,x,1))`, and pauses leave the capital alone.

mod audit;
mod run;
mod setup;
mod text;

pub use audit::{
    audit_fairness, audit_states, AuditOptions, AuditReport, Violation, ViolationKind,
};
pub use run::{
    run, run_dynamic, succeeded, CapitalTrace, RunOptions, TraceEntry, DEFAULT_THRESHOLD_EXP,
};
pub use setup::{add_setups, scale_setup, truncated_sum, weighted_sum, Setup, StepFn};
pub use text::{
    classify_text_prefix, oracle_from_dfa, Generator, Oracle, Stream, Text, TextFlags, TextItem,
    DEFAULT_BUDGET,
};

use std::fmt;

use thiserror::Error;

use crate::automata::{AutomataError, Word};
use crate::dyadic::Dyadic;

/// `(capital, memory)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MState {
    pub capital: Dyadic,
    pub memory: Vec<Word>,
}

impl MState {
    pub fn new(capital: Dyadic, memory: Vec<Word>) -> Self {
        MState { capital, memory }
    }

    /// Same memory, capital scaled by `factor`.
    pub fn scaled(&self, factor: &Dyadic) -> MState {
        MState {
            capital: self.capital.scale_const(factor),
            memory: self.memory.clone(),
        }
    }

    pub fn with_memory(&self, factor: &Dyadic, memory: Vec<Word>) -> MState {
        MState {
            capital: self.capital.scale_const(factor),
            memory,
        }
    }
}

impl fmt::Debug for MState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.capital)?;
        for (i, m) in self.memory.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", m)?;
        }
        write!(f, ")")
    }
}

/// One stage of a stream: a word with its membership bit, or a pause.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DataPoint {
    Labeled { word: Word, label: bool },
    Pause,
}

impl DataPoint {
    pub fn labeled(word: Word, label: bool) -> Self {
        DataPoint::Labeled { word, label }
    }

    pub fn word(&self) -> Option<&Word> {
        match self {
            DataPoint::Labeled { word, .. } => Some(word),
            DataPoint::Pause => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("fairness violated at stage {stage}: {detail}")]
    Fairness { stage: usize, detail: String },
    #[error("setup {setup}: {detail}")]
    Discipline { setup: String, detail: String },
    #[error("text paused for more than {budget} consecutive stages (stage {stage})")]
    Budget { stage: usize, budget: usize },
    #[error("text ended at stage {stage}")]
    TextExhausted { stage: usize },
    #[error("domain is empty")]
    EmptyDomain,
    #[error("word {0:?} is outside the domain")]
    OutsideDomain(Word),
    #[error("malformed memory: {0}")]
    Memory(String),
    #[error("{0}")]
    Construction(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[cfg(test)]
mod tests;
