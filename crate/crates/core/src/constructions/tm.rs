use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{min_ll, succ_ll, Dfa, Word};
use crate::dyadic::Dyadic;
use crate::engine::{DataPoint, EngineError, Generator, MState, Setup, TextItem};

use super::bettors::construction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "S")]
    Stay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmRule {
    pub state: usize,
    pub read: u8,
    pub write: u8,
    #[serde(rename = "move")]
    pub mv: Move,
    pub next: usize,
}

/// A deterministic single-tape machine deciding membership.
///
/// Tape symbols `0..input_letters` are the input letters; `blank` and any
/// further symbols are work symbols. A missing rule in a running state
/// rejects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmProgram {
    pub name: String,
    pub states: usize,
    pub symbols: usize,
    pub input_letters: usize,
    pub blank: u8,
    pub start: usize,
    pub accept: usize,
    pub reject: usize,
    pub rules: Vec<TmRule>,
}

/// State, head position and tape of a running machine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmConfig {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<u8>,
}

impl TmProgram {
    pub fn validate(&self) -> Result<(), String> {
        let sym_ok = |s: u8| (s as usize) < self.symbols;
        if self.input_letters >= self.symbols
            || !sym_ok(self.blank)
            || (self.blank as usize) < self.input_letters
        {
            return Err(format!(
                "{}: blank must be a non-input tape symbol",
                self.name
            ));
        }
        for q in [self.start, self.accept, self.reject] {
            if q >= self.states {
                return Err(format!("{}: state {} out of range", self.name, q));
            }
        }
        if self.accept == self.reject {
            return Err(format!("{}: accept and reject states coincide", self.name));
        }
        if self.states + 2 * self.symbols > 256 {
            return Err(format!(
                "{}: too many states or symbols to encode",
                self.name
            ));
        }
        let mut seen = HashSet::new();
        for r in &self.rules {
            if r.state >= self.states
                || r.next >= self.states
                || !sym_ok(r.read)
                || !sym_ok(r.write)
            {
                return Err(format!("{}: rule {:?} out of range", self.name, r));
            }
            if r.state == self.accept || r.state == self.reject {
                return Err(format!("{}: rule leaves a halting state", self.name));
            }
            if !seen.insert((r.state, r.read)) {
                return Err(format!(
                    "{}: two rules for state {} reading {}",
                    self.name, r.state, r.read
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<TmProgram, String> {
        let p: TmProgram = serde_json::from_str(s).map_err(|e| e.to_string())?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn initial(&self, input: &Word) -> TmConfig {
        let mut tape = input.letters().to_vec();
        if tape.is_empty() {
            tape.push(self.blank);
        }
        TmConfig {
            state: self.start,
            head: 0,
            tape,
        }
    }

    /// `Some(verdict)` once the machine has halted.
    pub fn verdict(&self, c: &TmConfig) -> Option<bool> {
        if c.state == self.accept {
            Some(true)
        } else if c.state == self.reject {
            Some(false)
        } else {
            None
        }
    }

    /// One transition; halted configurations are left alone.
    pub fn step(&self, c: &TmConfig) -> TmConfig {
        if self.verdict(c).is_some() {
            return c.clone();
        }
        let read = c.tape[c.head];
        let Some(rule) = self
            .rules
            .iter()
            .find(|r| r.state == c.state && r.read == read)
        else {
            return TmConfig {
                state: self.reject,
                ..c.clone()
            };
        };
        let mut next = c.clone();
        next.tape[next.head] = rule.write;
        next.state = rule.next;
        match rule.mv {
            Move::Left => next.head = next.head.saturating_sub(1),
            Move::Right => {
                next.head += 1;
                if next.head == next.tape.len() {
                    next.tape.push(self.blank);
                }
            }
            Move::Stay => {}
        }
        next
    }

    /// Runs to a verdict within `max_steps`; returns the verdict and steps used.
    pub fn run(&self, input: &Word, max_steps: usize) -> Option<(bool, usize)> {
        let mut c = self.initial(input);
        for used in 0..=max_steps {
            if let Some(v) = self.verdict(&c) {
                return Some((v, used));
            }
            c = self.step(&c);
        }
        None
    }

    /// The configuration as one word: the state letter, then the tape with
    /// the scanned cell written as `symbol + symbols`.
    pub fn encode(&self, c: &TmConfig) -> Word {
        let mut out = self.encode_state(c).into_letters();
        out.extend(self.encode_tape(c).into_letters());
        Word::from_letters(out)
    }

    pub fn decode(&self, w: &Word) -> Result<TmConfig, EngineError> {
        let letters = w.letters();
        let (state, tape) = letters
            .split_first()
            .ok_or_else(|| EngineError::Memory("empty configuration".into()))?;
        self.decode_parts(
            &Word::from_letters(vec![*state]),
            &Word::from_letters(tape.to_vec()),
        )
    }

    pub fn encode_state(&self, c: &TmConfig) -> Word {
        Word::from_letters(vec![c.state as u8])
    }

    pub fn encode_tape(&self, c: &TmConfig) -> Word {
        let mut tape = c.tape.clone();
        tape[c.head] += self.symbols as u8;
        Word::from_letters(tape)
    }

    pub fn decode_parts(&self, state: &Word, tape: &Word) -> Result<TmConfig, EngineError> {
        let bad = |what: &str| EngineError::Memory(format!("{}: malformed {}", self.name, what));
        let [q] = state.letters() else {
            return Err(bad("state"));
        };
        if *q as usize >= self.states {
            return Err(bad("state"));
        }
        let mut head = None;
        let mut cells = Vec::with_capacity(tape.len());
        for (i, &a) in tape.letters().iter().enumerate() {
            let a = a as usize;
            if a >= 2 * self.symbols || (a >= self.symbols && head.is_some()) {
                return Err(bad("tape"));
            }
            if a >= self.symbols {
                head = Some(i);
                cells.push((a - self.symbols) as u8);
            } else {
                cells.push(a as u8);
            }
        }
        Ok(TmConfig {
            state: *q as usize,
            head: head.ok_or_else(|| bad("tape"))?,
            tape: cells,
        })
    }
}

fn rule(state: usize, read: u8, write: u8, mv: Move, next: usize) -> TmRule {
    TmRule {
        state,
        read,
        write,
        mv,
        next,
    }
}

/// Binary-input machines used by the demonstrations.
pub mod machines {
    use super::Move::{Left, Right, Stay};
    use super::{rule, TmProgram};

    const BLANK: u8 = 2;

    fn binary(
        name: &str,
        states: usize,
        symbols: usize,
        accept: usize,
        reject: usize,
        rules: Vec<super::TmRule>,
    ) -> TmProgram {
        let p = TmProgram {
            name: name.to_string(),
            states,
            symbols,
            input_letters: 2,
            blank: BLANK,
            start: 0,
            accept,
            reject,
            rules,
        };
        p.validate().expect("valid machine");
        p
    }

    /// `{0ⁿ1ⁿ : n ≥ 0}` by crossing off matched pairs (`X` = 3, `Y` = 4).
    pub fn zeros_ones_equal() -> TmProgram {
        let (x, y) = (3, 4);
        binary(
            "0^n1^n",
            6,
            5,
            4,
            5,
            vec![
                rule(0, 0, x, Right, 1),
                rule(0, y, y, Right, 3),
                rule(0, BLANK, BLANK, Stay, 4),
                rule(1, 0, 0, Right, 1),
                rule(1, y, y, Right, 1),
                rule(1, 1, y, Left, 2),
                rule(2, 0, 0, Left, 2),
                rule(2, y, y, Left, 2),
                rule(2, x, x, Right, 0),
                rule(3, y, y, Right, 3),
                rule(3, BLANK, BLANK, Stay, 4),
            ],
        )
    }

    /// Rejects everything without moving.
    pub fn always_zero() -> TmProgram {
        let mut p = binary("always-0", 3, 3, 1, 2, vec![]);
        p.start = p.reject;
        p
    }

    /// Accepts everything without moving.
    pub fn always_one() -> TmProgram {
        let mut p = binary("always-1", 3, 3, 1, 2, vec![]);
        p.start = p.accept;
        p
    }

    /// `1{0,1}*`: looks at the first cell.
    pub fn starts_with_one() -> TmProgram {
        binary("1(0|1)*", 3, 3, 1, 2, vec![rule(0, 1, 1, Stay, 1)])
    }

    /// `0*`: scans right until a blank.
    pub fn all_zeros() -> TmProgram {
        binary(
            "0*",
            3,
            3,
            1,
            2,
            vec![rule(0, 0, 0, Right, 0), rule(0, BLANK, BLANK, Stay, 1)],
        )
    }

    pub fn by_name(name: &str) -> Option<TmProgram> {
        [
            zeros_ones_equal(),
            always_zero(),
            always_one(),
            starts_with_one(),
            all_zeros(),
        ]
        .into_iter()
        .find(|p| p.name == name)
    }
}

fn output_word(v: bool) -> Word {
    Word::from_letters(vec![u8::from(v)])
}

/// Bettor driving its own dynamic text.
///
/// Memory is `[input, work, output]`. While the output is empty every pause
/// advances the machine one step (the first pause loads the input); once the
/// output is set the generator emits the input, the bettor stakes all its
/// capital on the output, and the input moves to the next domain word.
pub fn tm_dynamic_bettor(
    prog: &TmProgram,
    domain: &Dfa,
) -> Result<(Setup, Generator), EngineError> {
    prog.validate().map_err(construction)?;
    if domain.arity() != 1 || domain.alphabet().track_size(0) > prog.input_letters {
        return Err(construction(format!(
            "{} cannot read the domain alphabet",
            prog.name
        )));
    }
    let first = min_ll(domain).map_err(|_| EngineError::EmptyDomain)?;
    let p = prog.clone();
    let dom = domain.clone();
    let factors = vec![Dyadic::from_int(2), Dyadic::zero(), Dyadic::one()];
    let setup = Setup::primitive(
        format!("tm-dynamic[{}]", prog.name),
        MState::new(Dyadic::one(), vec![first, Word::empty(), Word::empty()]),
        factors,
        move |s, point| {
            let (input, work, output) = (&s.memory[0], &s.memory[1], &s.memory[2]);
            match point {
                DataPoint::Pause if output.is_empty() => {
                    let cfg = if work.is_empty() {
                        p.initial(input)
                    } else {
                        p.step(&p.decode(work)?)
                    };
                    let out = p.verdict(&cfg).map(output_word).unwrap_or_default();
                    Ok(MState::new(
                        s.capital.clone(),
                        vec![input.clone(), p.encode(&cfg), out],
                    ))
                }
                DataPoint::Pause => Ok(s.clone()),
                DataPoint::Labeled { word, label } if !output.is_empty() && word == input => {
                    let factor = if output.letters()[0] == u8::from(*label) {
                        Dyadic::from_int(2)
                    } else {
                        Dyadic::zero()
                    };
                    let next = succ_ll(&dom, input).map_err(|_| {
                        construction(format!("domain has no word after {:?}", input))
                    })?;
                    Ok(s.with_memory(&factor, vec![next, Word::empty(), Word::empty()]))
                }
                DataPoint::Labeled { .. } => Ok(s.clone()),
            }
        },
    );
    let g: Generator = Arc::new(|s: &MState| {
        if s.memory[2].is_empty() {
            TextItem::Pause
        } else {
            TextItem::Word(s.memory[0].clone())
        }
    });
    Ok((setup, g))
}
