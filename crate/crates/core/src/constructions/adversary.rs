use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{enumerate_ll, Dfa, Word};
use crate::dyadic::Dyadic;
use crate::engine::{DataPoint, EngineError, MState, Oracle, Setup, Text, TextItem};

/// Default number of domain words examined per stage.
pub const DEFAULT_SEARCH_BOUND: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextMode {
    Any,
    RepetitionFree,
}

impl fmt::Display for TextMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TextMode::Any => "any",
            TextMode::RepetitionFree => "repetition-free",
        })
    }
}

impl FromStr for TextMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(TextMode::Any),
            "repetition-free" => Ok(TextMode::RepetitionFree),
            other => Err(format!("unknown text mode {:?}", other)),
        }
    }
}

/// A state from which every examined word raises the capital.
#[derive(Clone, Debug)]
pub struct StallWitness {
    pub state: MState,
    /// Stage at which the search came up empty (words emitted before it).
    pub stage: usize,
    pub prefix: Vec<Word>,
    pub search_bound: usize,
}

#[derive(Clone, Debug)]
pub enum Adversary {
    /// `horizon` words whose labeled run never raises the capital.
    Text {
        words: Vec<Word>,
        capitals: Vec<Dyadic>,
    },
    Stall(StallWitness),
}

impl Adversary {
    pub fn words(&self) -> Option<&[Word]> {
        match self {
            Adversary::Text { words, .. } => Some(words),
            Adversary::Stall(_) => None,
        }
    }

    pub fn stall(&self) -> Option<&StallWitness> {
        match self {
            Adversary::Stall(w) => Some(w),
            Adversary::Text { .. } => None,
        }
    }

    /// The built words as a finite text.
    pub fn to_text(&self) -> Option<Text> {
        self.words()
            .map(|ws| Text::from_sequence(ws.iter().cloned().map(TextItem::Word).collect()))
    }
}

/// Builds a text against `d` on the language of `oracle`: each stage appends
/// the ll-least of the first `search_bound` candidate domain words whose
/// labeled step does not raise the capital.
pub fn adversarial_text(
    d: &Setup,
    oracle: &Oracle,
    domain: &Dfa,
    mode: TextMode,
    horizon: usize,
    search_bound: usize,
) -> Result<Adversary, EngineError> {
    let pool_size = match mode {
        TextMode::Any => search_bound,
        TextMode::RepetitionFree => search_bound + horizon,
    };
    let pool = enumerate_ll(domain, pool_size)?;
    if pool.is_empty() {
        return Err(EngineError::EmptyDomain);
    }
    let labels: Vec<bool> = pool.iter().map(|w| oracle(w)).collect();
    let mut used: HashSet<usize> = HashSet::new();
    let mut state = d.start().clone();
    let mut words = Vec::with_capacity(horizon);
    let mut capitals = vec![state.capital.clone()];
    for stage in 0..horizon {
        let mut found = None;
        let candidates = (0..pool.len())
            .filter(|i| mode == TextMode::Any || !used.contains(i))
            .take(search_bound);
        for i in candidates {
            let next = d.step(&state, &DataPoint::labeled(pool[i].clone(), labels[i]))?;
            if next.capital <= state.capital {
                found = Some((i, next));
                break;
            }
        }
        match found {
            Some((i, next)) => {
                used.insert(i);
                words.push(pool[i].clone());
                capitals.push(next.capital.clone());
                state = next;
            }
            None => {
                return Ok(Adversary::Stall(StallWitness {
                    state,
                    stage,
                    prefix: words,
                    search_bound,
                }))
            }
        }
    }
    Ok(Adversary::Text { words, capitals })
}

/// `x` is read as a member iff betting on label 1 at `p` pays strictly more
/// than label 0.
pub fn extract_member(d: &Setup, p: &MState, x: &Word) -> Result<bool, EngineError> {
    let zero = d.step(p, &DataPoint::labeled(x.clone(), false))?;
    let one = d.step(p, &DataPoint::labeled(x.clone(), true))?;
    Ok(one.capital > zero.capital)
}

/// The language read off a fixed state by comparing both one-step capitals.
pub fn extract_language(
    d: &Setup,
    p: &MState,
    test_words: &[Word],
) -> Result<Vec<(Word, bool)>, EngineError> {
    test_words
        .iter()
        .map(|x| Ok((x.clone(), extract_member(d, p, x)?)))
        .collect()
}
