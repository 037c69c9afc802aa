use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::automata::{
    count_leq_ll, examples, exponential_witness, growth_class, min_ll, min_ll_at_least, succ_ll,
    AutomataError, Dfa, GrowthClass, Word,
};
use crate::dyadic::Dyadic;
use crate::engine::{DataPoint, EngineError, MState, Setup};

use super::bettors::{bet, betting_factors, construction};
use super::tm::{TmConfig, TmProgram};

/// An ll-ordered list of budgeted deciders.
///
/// Index words run over `{0,1}*` in ll-order; index number `i` names
/// `programs[i]`. With `relist` set the list repeats forever (index `i` names
/// `programs[i mod n]` in round `i / n`), so every program owns infinitely
/// many indices. A hypothesis that runs past its budget answers 0.
#[derive(Clone, Debug)]
pub struct HypothesisSpace {
    pub programs: Vec<TmProgram>,
    pub relist: bool,
    pub budget: Budget,
}

/// Step budget `coeff · (round + 1) · (n + 1)^degree` on inputs of length `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub coeff: usize,
    pub degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            coeff: 4,
            degree: 2,
        }
    }
}

/// Position of `e` in the ll-order of `{0,1}*`.
pub fn index_number(e: &Word) -> usize {
    let value = e
        .letters()
        .iter()
        .fold(0usize, |acc, &b| 2 * acc + b as usize);
    (1usize << e.len()) - 1 + value
}

impl HypothesisSpace {
    pub fn new(programs: Vec<TmProgram>) -> Self {
        HypothesisSpace {
            programs,
            relist: false,
            budget: Budget::default(),
        }
    }

    pub fn relisted(mut self) -> Self {
        self.relist = true;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn program(&self, e: &Word) -> Option<&TmProgram> {
        let i = index_number(e);
        if self.relist {
            self.programs.get(i % self.programs.len())
        } else {
            self.programs.get(i)
        }
    }

    /// Steps hypothesis `e` may take on an input of length `n`.
    pub fn steps(&self, e: &Word, n: usize) -> usize {
        let round = index_number(e) / self.programs.len().max(1);
        let base = (n + 1).saturating_pow(self.budget.degree);
        self.budget
            .coeff
            .saturating_mul(round + 1)
            .saturating_mul(base)
    }
}

const COUNTER: usize = 0;
const ANCHOR: usize = 1;
const INPUT: usize = 2;
const HYPOTHESIS: usize = 3;
const MACHINE: usize = 4;
const WORK: usize = 5;
const OUTPUT: usize = 6;

/// Machine state word: the state letter followed by one letter per step taken.
fn machine_parts(
    prog: &TmProgram,
    cfg: &TmConfig,
    used: usize,
    budget: usize,
) -> (Word, Word, Word) {
    let verdict = match prog.verdict(cfg) {
        Some(v) => Some(v),
        None if used >= budget => Some(false),
        None => None,
    };
    let out = verdict
        .map(|v| Word::from_letters(vec![u8::from(v)]))
        .unwrap_or_default();
    let mut state = prog.encode_state(cfg);
    for _ in 0..used {
        state.push(1);
    }
    (state, prog.encode_tape(cfg), out)
}

/// Loads hypothesis `e` on `input`; past the end of a finite space the
/// machine parts stay empty and the bettor no longer bets.
fn load(hyp: &HypothesisSpace, e: &Word, input: &Word) -> (Word, Word, Word) {
    match hyp.program(e) {
        Some(prog) => machine_parts(prog, &prog.initial(input), 0, hyp.steps(e, input.len())),
        None => Default::default(),
    }
}

/// Bettor for polynomial-time languages on the ll-text of an exponential
/// domain.
///
/// Memory is `[counter, anchor, input, hypothesis, machine state, work tape,
/// output]`. The counter grows by one letter per stage. When the anchor word
/// arrives the bettor stakes 3/2 on the simulated output, moving to the next
/// hypothesis if the output was wrong; if the simulation has not finished it
/// bets nothing and keeps the hypothesis. It then sets the next anchor to the
/// ll-least domain word at least as long as the counter. Between anchors the
/// current hypothesis runs one step per stage on the anchor.
pub fn pclass_bettor(hyp: &HypothesisSpace, domain: &Dfa) -> Result<Setup, EngineError> {
    if growth_class(domain)? != GrowthClass::Exponential {
        return Err(construction("the domain does not have exponential growth"));
    }
    if hyp.programs.is_empty() {
        return Err(construction("empty hypothesis space"));
    }
    for p in &hyp.programs {
        p.validate().map_err(construction)?;
        if domain.alphabet().track_size(0) > p.input_letters {
            return Err(construction(format!(
                "{} cannot read the domain alphabet",
                p.name
            )));
        }
    }
    let d0 = min_ll(domain)?;
    let e0 = Word::empty();
    let (q, w, o) = load(hyp, &e0, &d0);
    let start = MState::new(
        Dyadic::one(),
        vec![Word::empty(), d0.clone(), d0, e0, q, w, o],
    );
    let hyp = hyp.clone();
    let dom = domain.clone();
    let sigma = examples::sigma_star();
    let mut factors = betting_factors();
    factors.push(Dyadic::one());
    Ok(Setup::primitive("pclass", start, factors, move |s, p| {
        let mut m = s.memory.clone();
        m[COUNTER].push(0);
        let arrived = matches!(p, DataPoint::Labeled { word, .. } if *word == s.memory[ANCHOR]);
        if !arrived {
            if let (true, Some(prog)) = (m[OUTPUT].is_empty(), hyp.program(&m[HYPOTHESIS])) {
                let (q, used) = m[MACHINE]
                    .letters()
                    .split_first()
                    .ok_or_else(|| EngineError::Memory("empty machine state".into()))?;
                let used = used.len() + 1;
                let cfg = prog.step(&prog.decode_parts(&Word::from_letters(vec![*q]), &m[WORK])?);
                let budget = hyp.steps(&m[HYPOTHESIS], m[INPUT].len());
                (m[MACHINE], m[WORK], m[OUTPUT]) = machine_parts(prog, &cfg, used, budget);
            }
            return Ok(MState::new(s.capital.clone(), m));
        }
        let DataPoint::Labeled { label, .. } = p else {
            unreachable!()
        };
        let factor = match m[OUTPUT].letters().first() {
            Some(&out) => {
                let guess = out == 1;
                if guess != *label {
                    m[HYPOTHESIS] = succ_ll(&sigma, &m[HYPOTHESIS])?;
                }
                bet(guess, *label)
            }
            None => Dyadic::one(),
        };
        let next = min_ll_at_least(&dom, m[COUNTER].len())?;
        (m[MACHINE], m[WORK], m[OUTPUT]) = load(&hyp, &m[HYPOTHESIS], &next);
        m[ANCHOR] = next.clone();
        m[INPUT] = next;
        Ok(s.with_memory(&factor, m))
    }))
}

/// Index number of the hypothesis in a pclass bettor state.
pub fn current_hypothesis(s: &MState) -> usize {
    index_number(&s.memory[HYPOTHESIS])
}

/// The bettor has run past the last hypothesis of a finite space.
pub fn hypotheses_exhausted(hyp: &HypothesisSpace, s: &MState) -> bool {
    hyp.program(&s.memory[HYPOTHESIS]).is_none()
}

pub fn current_anchor(s: &MState) -> &Word {
    &s.memory[ANCHOR]
}

/// One step of the anchor sequence, with the quantities of the gap bound.
#[derive(Clone, Debug, Serialize)]
pub struct AnchorGap {
    /// Length of the anchor `aₙ`.
    pub from_len: usize,
    /// Length of `aₙ₊₁`.
    pub to_len: usize,
    /// Stage at which `aₙ` arrives in the ll-text (its ll-rank, 1-based).
    pub t: String,
    /// `l(aₙ₊₁) − l(aₙ)`.
    pub gap: String,
    pub k: usize,
    /// `gap ≥ 2^{(t−k)/k} − t`, decided exactly.
    pub holds: bool,
}

/// Result of following the anchor sequence of the ll-text.
#[derive(Clone, Debug, Serialize)]
pub struct AnchorReport {
    /// Anchors that could be materialized, as lengths.
    pub anchor_lengths: Vec<usize>,
    pub gaps: Vec<AnchorGap>,
    /// Requested anchors that exceed `max_len` letters.
    pub unrepresentable: usize,
}

impl AnchorReport {
    pub fn all_hold(&self) -> bool {
        self.gaps.iter().all(|g| g.holds)
    }
}

/// `gap ≥ 2^{(t−k)/k} − t`, i.e. `(gap + t)^k ≥ 2^{t−k}` when `t > k`.
fn gap_bound_holds(gap: &BigUint, t: &BigUint, k: usize) -> bool {
    let lhs = gap + t;
    match t.to_usize() {
        Some(t) if t <= k => lhs >= BigUint::one(),
        Some(t) => lhs.pow(k as u32) >= BigUint::one() << (t - k),
        None => false,
    }
}

/// The first `count` anchors `a₁ = min_ll(D)`, `aₙ₊₁ = min_ll{z ∈ D : |z| ≥ t}`
/// where `t` is the ll-rank of `aₙ`, checking the gap bound between
/// consecutive anchors. Anchors longer than `max_len` letters are not built.
pub fn anchor_gaps(
    domain: &Dfa,
    count: usize,
    max_len: usize,
) -> Result<AnchorReport, AutomataError> {
    let k = exponential_witness(domain)?.ok_or(AutomataError::EmptyLanguage)?;
    let mut anchors = vec![min_ll(domain)?];
    let mut gaps = Vec::new();
    let mut unrepresentable = 0;
    while anchors.len() < count {
        let a = anchors.last().unwrap();
        let t = count_leq_ll(domain, a)?;
        match t.to_usize().filter(|&t| t <= max_len) {
            Some(len) => {
                let next = min_ll_at_least(domain, len)?;
                let gap = count_leq_ll(domain, &next)? - &t;
                gaps.push(AnchorGap {
                    from_len: a.len(),
                    to_len: next.len(),
                    t: t.to_string(),
                    gap: gap.to_string(),
                    k,
                    holds: gap_bound_holds(&gap, &t, k),
                });
                anchors.push(next);
            }
            None => {
                unrepresentable = count - anchors.len();
                break;
            }
        }
    }
    Ok(AnchorReport {
        anchor_lengths: anchors.iter().map(Word::len).collect(),
        gaps,
        unrepresentable,
    })
}
