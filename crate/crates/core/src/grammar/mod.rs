//! Context-free grammars: normal form, parsing, quotients, pumping and the
//! extraction of infinite regular sets inside or outside a context-free
//! language.

mod cnf;
mod cyk;
mod pump;
mod quotient;
mod subset;
mod text;

pub use cnf::{to_cnf, CnfGrammar};
pub use cyk::{cyk_member, parse, ParseTree};
pub use pump::{finite_language, is_finite_cfl, pump_cfl, Pump};
pub use quotient::{intersect_regular, left_quotient, quotient, right_quotient};
pub use subset::{cfl_nonrandom_pipeline, infinite_regular_subset, RegularSubset};

use std::fmt;

use thiserror::Error;

use crate::automata::{Alphabet, AutomataError, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("invalid grammar: {0}")]
    Invalid(String),
    #[error("word is not generated by the grammar")]
    NotAMember,
    #[error("no nonterminal repeats on the longest path of a parse of length {len}")]
    TooShort { len: usize },
    #[error("pumping check failed: {0}")]
    PumpCheck(String),
    #[error("|bd| = {bd} is not a multiple of |v| = {v}")]
    Indivisible { bd: usize, v: usize },
    #[error("no pumpable member among the first {searched} powers of v")]
    NoPump { searched: usize },
    #[error("the domain is finite")]
    FiniteDomain,
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSymbol {
    T(u8),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<GSymbol>,
}

/// `G = (V, Σ, R, S)` over a one-track alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    alphabet: Alphabet,
    names: Vec<String>,
    start: usize,
    productions: Vec<Production>,
}

impl Cfg {
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        start: usize,
        productions: Vec<Production>,
    ) -> Result<Self, GrammarError> {
        if alphabet.arity() != 1 {
            return Err(GrammarError::Invalid(
                "terminals must come from a one-track alphabet".into(),
            ));
        }
        if start >= names.len() {
            return Err(GrammarError::Invalid(format!(
                "start symbol {} is undeclared",
                start
            )));
        }
        let sigma = alphabet.track_size(0);
        for p in &productions {
            if p.lhs >= names.len() {
                return Err(GrammarError::Invalid(format!(
                    "undeclared nonterminal {}",
                    p.lhs
                )));
            }
            for s in &p.rhs {
                match *s {
                    GSymbol::N(x) if x >= names.len() => {
                        return Err(GrammarError::Invalid(format!(
                            "undeclared nonterminal {}",
                            x
                        )))
                    }
                    GSymbol::T(a) if a as usize >= sigma => {
                        return Err(GrammarError::Invalid(format!(
                            "terminal {} out of range",
                            a
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Cfg {
            alphabet,
            names,
            start,
            productions,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// `S → 0S1 | ε` when `min` is 0, `S → 0S1 | 01` when it is 1.
    pub fn equal_blocks(min: usize) -> Self {
        let text = match min {
            0 => "S -> 0 S 1 | #eps",
            1 => "S -> 0 S 1 | 01",
            _ => panic!("min must be 0 or 1"),
        };
        Cfg::parse(Alphabet::binary(), text).expect("valid grammar")
    }

    /// Direct membership test: the least fixpoint of "nonterminal `X`
    /// derives the span `w[i..j]`", computed production by production.
    pub fn derives(&self, w: &Word) -> bool {
        let w = w.letters();
        let n = w.len();
        let mut spans = vec![vec![vec![false; n + 1]; n + 1]; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                for i in 0..=n {
                    let mut ends = vec![false; n + 1];
                    ends[i] = true;
                    for s in &p.rhs {
                        let mut next = vec![false; n + 1];
                        for e in (0..=n).filter(|&e| ends[e]) {
                            match *s {
                                GSymbol::T(a) => {
                                    if e < n && w[e] == a {
                                        next[e + 1] = true;
                                    }
                                }
                                GSymbol::N(x) => {
                                    for j in e..=n {
                                        next[j] |= spans[x][e][j];
                                    }
                                }
                            }
                        }
                        ends = next;
                    }
                    for j in i..=n {
                        if ends[j] && !spans[p.lhs][i][j] {
                            spans[p.lhs][i][j] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return spans[self.start][0][n];
            }
        }
    }

    /// Nonterminals that derive ε.
    pub fn nullable(&self) -> Vec<bool> {
        let mut out = vec![false; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !out[p.lhs] && p.rhs.iter().all(|s| matches!(s, GSymbol::N(x) if out[*x])) {
                    out[p.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.alphabet.track(0);
        let mut order: Vec<usize> = vec![self.start];
        order.extend((0..self.names.len()).filter(|&x| x != self.start));
        for x in order {
            let alts: Vec<String> = self
                .productions
                .iter()
                .filter(|p| p.lhs == x)
                .map(|p| {
                    if p.rhs.is_empty() {
                        return "#eps".to_string();
                    }
                    p.rhs
                        .iter()
                        .map(|s| match *s {
                            GSymbol::T(a) => letters[a as usize].to_string(),
                            GSymbol::N(y) => self.names[y].clone(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            if !alts.is_empty() {
                writeln!(f, "{} -> {}", self.names[x], alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
