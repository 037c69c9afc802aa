use crate::automata::{examples, min_ll, succ_ll, AutomataError, Dfa, Word};
use crate::dyadic::Dyadic;
use crate::engine::{DataPoint, EngineError, MState, Setup};

use super::bettors::{bet, betting_factors, construction};

/// An indexed family `{L_e : e ∈ E}` given by a regular index set and an
/// automatic membership relation over convolved pairs `(x, e)`.
#[derive(Clone, Debug)]
pub struct AutomaticFamily {
    index: Dfa,
    relation: Dfa,
}

impl AutomaticFamily {
    /// `index` reads one track; `relation` reads `(x, e)` with its second
    /// track over the index alphabet.
    pub fn new(index: Dfa, relation: Dfa) -> Result<Self, AutomataError> {
        if index.arity() != 1 {
            return Err(AutomataError::ArityMismatch {
                expected: 1,
                found: index.arity(),
            });
        }
        if relation.arity() != 2 {
            return Err(AutomataError::ArityMismatch {
                expected: 2,
                found: relation.arity(),
            });
        }
        if relation.alphabet().track(1) != index.alphabet().track(0) {
            return Err(AutomataError::AlphabetMismatch);
        }
        Ok(AutomaticFamily { index, relation })
    }

    /// `L_e = e{0,1}*` for `e ∈ {0,1}*`.
    pub fn prefixes() -> Self {
        AutomaticFamily::new(examples::sigma_star(), examples::prefix_relation())
            .expect("valid family")
    }

    pub fn index(&self) -> &Dfa {
        &self.index
    }

    pub fn relation(&self) -> &Dfa {
        &self.relation
    }

    /// `x ∈ L_e`; false for words over the wrong alphabet.
    pub fn contains(&self, x: &Word, e: &Word) -> bool {
        self.relation.accepts_tuple(&[x, e]).unwrap_or(false)
    }

    pub fn first_index(&self) -> Result<Word, AutomataError> {
        min_ll(&self.index)
    }

    pub fn next_index(&self, e: &Word) -> Result<Word, AutomataError> {
        succ_ll(&self.index, e)
    }
}

/// Enumerative learner: bets 3/2 on `L_e(x)` and moves to the next index
/// after every wrong bet.
pub fn family_learner(fam: &AutomaticFamily) -> Result<Setup, EngineError> {
    let e0 = fam.first_index().map_err(|_| EngineError::EmptyDomain)?;
    let fam = fam.clone();
    Ok(Setup::primitive(
        "family-learner",
        MState::new(Dyadic::one(), vec![e0]),
        betting_factors(),
        move |s, p| match p {
            DataPoint::Pause => Ok(s.clone()),
            DataPoint::Labeled { word, label } => {
                let e = &s.memory[0];
                let guess = fam.contains(word, e);
                if guess == *label {
                    return Ok(s.scaled(&bet(guess, *label)));
                }
                let next = fam.next_index(e).map_err(|_| {
                    construction(format!("learner stalled: no index after {:?}", e))
                })?;
                Ok(s.with_memory(&bet(guess, *label), vec![next]))
            }
        },
    ))
}

/// The index pair after a wrong bet at `(e, d)`: `e` advances while it is
/// below `d`; otherwise `e` restarts at `e0` and `d` advances.
pub fn dovetail_next(
    fam: &AutomaticFamily,
    e0: &Word,
    e: &Word,
    d: &Word,
) -> Result<(Word, Word), AutomataError> {
    if e < d {
        Ok((fam.next_index(e)?, d.clone()))
    } else {
        Ok((e0.clone(), fam.next_index(d)?))
    }
}

/// The first `n` index pairs visited under persistent wrong bets.
pub fn dovetail_pairs(fam: &AutomaticFamily, n: usize) -> Result<Vec<(Word, Word)>, AutomataError> {
    let e0 = fam.first_index()?;
    let mut out = Vec::with_capacity(n);
    let mut cur = (e0.clone(), e0.clone());
    while out.len() < n {
        out.push(cur.clone());
        if out.len() < n {
            cur = dovetail_next(fam, &e0, &cur.0, &cur.1)?;
        }
    }
    Ok(out)
}

/// Learner for finite variants `L_e △ F`: memory is a pair `(e, d)` walked in
/// dovetail order, so every index is revisited infinitely often.
pub fn variant_family_learner(fam: &AutomaticFamily) -> Result<Setup, EngineError> {
    let e0 = fam.first_index().map_err(|_| EngineError::EmptyDomain)?;
    let fam = fam.clone();
    Ok(Setup::primitive(
        "variant-learner",
        MState::new(Dyadic::one(), vec![e0.clone(), e0.clone()]),
        betting_factors(),
        move |s, p| match p {
            DataPoint::Pause => Ok(s.clone()),
            DataPoint::Labeled { word, label } => {
                let (e, d) = (&s.memory[0], &s.memory[1]);
                let guess = fam.contains(word, e);
                if guess == *label {
                    return Ok(s.scaled(&bet(guess, *label)));
                }
                let (e, d) = dovetail_next(&fam, &e0, e, d).map_err(|_| {
                    construction(format!("learner stalled: no index after {:?}", d))
                })?;
                Ok(s.with_memory(&bet(guess, *label), vec![e, d]))
            }
        },
    ))
}
