use std::fmt;
use std::sync::Arc;

use super::{DataPoint, EngineError, MState};
use crate::automata::Word;
use crate::dyadic::{decode_tworow, encode_tworow, Dyadic, TwoRowCode};

pub type StepFn = dyn Fn(&MState, &DataPoint) -> Result<MState, EngineError> + Send + Sync;

#[derive(Clone)]
enum Kind {
    /// Capital moves by one of finitely many declared constant factors.
    Primitive { factors: Vec<Dyadic> },
    /// Weighted sum of component setups.
    Sum,
}

/// A step function paired with its start state.
#[derive(Clone)]
pub struct Setup {
    name: String,
    start: MState,
    arity: usize,
    kind: Kind,
    step: Arc<StepFn>,
}

impl fmt::Debug for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Setup")
            .field("name", &self.name)
            .field("start", &self.start)
            .field("arity", &self.arity)
            .finish()
    }
}

impl Setup {
    /// A setup whose capital only ever changes by a factor from `factors`.
    ///
    /// The raw step is wrapped with checks: memory arity is preserved, capital
    /// stays nonnegative, a pause leaves capital unchanged, and every other
    /// step multiplies capital by a declared factor.
    pub fn primitive(
        name: impl Into<String>,
        start: MState,
        factors: Vec<Dyadic>,
        raw: impl Fn(&MState, &DataPoint) -> Result<MState, EngineError> + Send + Sync + 'static,
    ) -> Setup {
        let name = name.into();
        let arity = start.memory.len();
        let checked_name = name.clone();
        let declared = factors.clone();
        let step = move |s: &MState, p: &DataPoint| {
            let next = raw(s, p)?;
            let fail = |detail: String| EngineError::Discipline {
                setup: checked_name.clone(),
                detail,
            };
            if next.memory.len() != arity {
                return Err(fail(format!(
                    "memory arity changed from {} to {}",
                    arity,
                    next.memory.len()
                )));
            }
            if next.capital.is_negative() {
                return Err(fail(format!("negative capital {}", next.capital)));
            }
            match p {
                DataPoint::Pause if next.capital != s.capital => Err(fail(format!(
                    "pause changed capital {} to {}",
                    s.capital, next.capital
                ))),
                DataPoint::Pause => Ok(next),
                DataPoint::Labeled { .. } => {
                    if declared
                        .iter()
                        .any(|f| s.capital.scale_const(f) == next.capital)
                    {
                        Ok(next)
                    } else {
                        Err(fail(format!(
                            "capital {} -> {} is not a declared factor",
                            s.capital, next.capital
                        )))
                    }
                }
            }
        };
        Setup {
            name,
            start,
            arity,
            kind: Kind::Primitive { factors },
            step: Arc::new(step),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> &MState {
        &self.start
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Declared bet factors, for primitive setups.
    pub fn factors(&self) -> Option<&[Dyadic]> {
        match &self.kind {
            Kind::Primitive { factors } => Some(factors),
            Kind::Sum => None,
        }
    }

    /// Starting capital is 1.
    pub fn is_normed(&self) -> bool {
        self.start.capital == Dyadic::one()
    }

    pub fn step(&self, s: &MState, p: &DataPoint) -> Result<MState, EngineError> {
        (self.step)(s, p)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Setup {
        self.name = name.into();
        self
    }
}

fn code_words(x: &Dyadic) -> [Word; 2] {
    let c = encode_tworow(x);
    [
        Word::from_letters(c.top().to_vec()),
        Word::from_letters(c.bottom().to_vec()),
    ]
}

fn decode_words(top: &Word, bottom: &Word) -> Result<Dyadic, EngineError> {
    let code = TwoRowCode::new(top.letters().to_vec(), bottom.letters().to_vec())
        .map_err(|e| EngineError::Memory(e.to_string()))?;
    Ok(decode_tworow(&code))
}

/// `Σ wᵢ·dᵢ` for positive constant weights.
///
/// The memory holds, for each component, its capital in two-row form followed
/// by its own memory; the capital is the weighted sum of the component
/// capitals.
pub fn weighted_sum(parts: Vec<(Dyadic, Setup)>) -> Setup {
    assert!(!parts.is_empty(), "a sum needs at least one component");
    for (w, _) in &parts {
        assert!(w.is_positive(), "weights must be positive");
    }
    let name = parts
        .iter()
        .map(|(w, d)| {
            if *w == Dyadic::one() {
                d.name.clone()
            } else {
                format!("{}*{}", w, d.name)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ");
    let pack = |states: &[MState], weights: &[Dyadic]| {
        let mut memory = Vec::new();
        let mut capital = Dyadic::zero();
        for (s, w) in states.iter().zip(weights) {
            memory.extend(code_words(&s.capital));
            memory.extend(s.memory.iter().cloned());
            capital += &s.capital.scale_const(w);
        }
        MState { capital, memory }
    };
    let weights: Vec<Dyadic> = parts.iter().map(|(w, _)| w.clone()).collect();
    let setups: Vec<Setup> = parts.into_iter().map(|(_, d)| d).collect();
    let starts: Vec<MState> = setups.iter().map(|d| d.start.clone()).collect();
    let start = pack(&starts, &weights);
    let arity = start.memory.len();
    let inner = setups.clone();
    let inner_weights = weights.clone();
    let step = move |s: &MState, p: &DataPoint| {
        if s.memory.len() != arity {
            return Err(EngineError::Memory(format!(
                "expected {} memory words, found {}",
                arity,
                s.memory.len()
            )));
        }
        let mut at = 0;
        let mut next = Vec::with_capacity(inner.len());
        for d in &inner {
            let capital = decode_words(&s.memory[at], &s.memory[at + 1])?;
            let memory = s.memory[at + 2..at + 2 + d.arity].to_vec();
            at += 2 + d.arity;
            next.push(d.step(&MState { capital, memory }, p)?);
        }
        Ok(pack(&next, &inner_weights))
    };
    Setup {
        name,
        start,
        arity,
        kind: Kind::Sum,
        step: Arc::new(step),
    }
}

/// `d1 + d2`: capital is the sum of the component capitals at every stage.
pub fn add_setups(d1: &Setup, d2: &Setup) -> Setup {
    weighted_sum(vec![
        (Dyadic::one(), d1.clone()),
        (Dyadic::one(), d2.clone()),
    ])
}

/// `c·d` for a constant `c > 0`.
pub fn scale_setup(c: &Dyadic, d: &Setup) -> Setup {
    weighted_sum(vec![(c.clone(), d.clone())])
}

/// `Σᵢ baseⁱ·dᵢ` over a finite list.
pub fn truncated_sum(setups: &[Setup], base: &Dyadic) -> Setup {
    let mut weight = Dyadic::one();
    let mut parts = Vec::with_capacity(setups.len());
    for d in setups {
        parts.push((weight.clone(), d.clone()));
        weight = weight.scale_const(base);
    }
    weighted_sum(parts)
}
