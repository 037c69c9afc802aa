use serde::Serialize;

use super::audit::{fair_successors, pause_successor};
use super::text::{Generator, Oracle, TextItem, DEFAULT_BUDGET};
use super::{DataPoint, EngineError, MState, Setup, Stream};
use crate::dyadic::Dyadic;

/// Default success threshold is `2^20`.
pub const DEFAULT_THRESHOLD_EXP: i64 = 20;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Check fairness and pause preservation at every visited transition.
    pub audit: bool,
    /// Keep every visited state in the trace.
    pub record_states: bool,
    /// Consecutive pauses tolerated by dynamic runs.
    pub budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            audit: true,
            record_states: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub stage: usize,
    /// The data point consumed to reach this entry; `None` for the start.
    pub point: Option<DataPoint>,
    pub capital: Dyadic,
}

/// Capitals along a run, starting with the start state's capital.
#[derive(Clone, Debug)]
pub struct CapitalTrace {
    pub entries: Vec<TraceEntry>,
    pub states: Vec<MState>,
    pub final_state: MState,
    /// Transitions checked by the inline audit.
    pub audited: usize,
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    stage: usize,
    word: Option<String>,
    label: Option<u8>,
    capital: &'a Dyadic,
    num: String,
    exp: u64,
}

impl CapitalTrace {
    pub fn capitals(&self) -> Vec<Dyadic> {
        self.entries.iter().map(|e| e.capital.clone()).collect()
    }

    pub fn last_capital(&self) -> &Dyadic {
        &self
            .entries
            .last()
            .expect("trace has a start entry")
            .capital
    }

    fn columns(e: &TraceEntry) -> (Option<String>, Option<u8>) {
        match &e.point {
            None => (None, None),
            Some(DataPoint::Pause) => (Some("#".to_string()), None),
            Some(DataPoint::Labeled { word, label }) => {
                (Some(word.to_string()), Some(u8::from(*label)))
            }
        }
    }

    /// `stage,word,label,num,exp`; pauses are written as `#`, the start row
    /// has empty word and label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,word,label,num,exp\n");
        for e in &self.entries {
            let (word, label) = Self::columns(e);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.stage,
                word.unwrap_or_default(),
                label.map(|l| l.to_string()).unwrap_or_default(),
                e.capital.numerator(),
                e.capital.exponent()
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<JsonEntry> = self
            .entries
            .iter()
            .map(|e| {
                let (word, label) = Self::columns(e);
                JsonEntry {
                    stage: e.stage,
                    word,
                    label,
                    capital: &e.capital,
                    num: e.capital.numerator().to_string(),
                    exp: e.capital.exponent(),
                }
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("serializable")
    }
}

struct Recorder {
    trace: CapitalTrace,
    record_states: bool,
}

impl Recorder {
    fn new(start: &MState, record_states: bool) -> Self {
        Recorder {
            trace: CapitalTrace {
                entries: vec![TraceEntry {
                    stage: 0,
                    point: None,
                    capital: start.capital.clone(),
                }],
                states: if record_states {
                    vec![start.clone()]
                } else {
                    Vec::new()
                },
                final_state: start.clone(),
                audited: 0,
            },
            record_states,
        }
    }

    fn push(&mut self, stage: usize, point: DataPoint, state: MState) {
        self.trace.entries.push(TraceEntry {
            stage,
            point: Some(point),
            capital: state.capital.clone(),
        });
        if self.record_states {
            self.trace.states.push(state.clone());
        }
        self.trace.final_state = state;
    }
}

fn advance(
    d: &Setup,
    state: &MState,
    point: &DataPoint,
    stage: usize,
    opts: &RunOptions,
    audited: &mut usize,
) -> Result<MState, EngineError> {
    if !opts.audit {
        return d.step(state, point);
    }
    *audited += 1;
    let unfair = |v: super::Violation| EngineError::Fairness {
        stage,
        detail: v.to_string(),
    };
    match point {
        DataPoint::Pause => pause_successor(d, state).map_err(unfair),
        DataPoint::Labeled { word, label } => {
            let (zero, one) = fair_successors(d, state, word).map_err(unfair)?;
            Ok(if *label { one } else { zero })
        }
    }
}

/// Runs `d` on `steps` stages of the stream.
pub fn run(
    d: &Setup,
    stream: &mut Stream,
    steps: usize,
    opts: &RunOptions,
) -> Result<CapitalTrace, EngineError> {
    let mut rec = Recorder::new(d.start(), opts.record_states);
    let mut state = d.start().clone();
    let mut audited = 0;
    for stage in 1..=steps {
        let point = stream.next_point()?;
        state = advance(d, &state, &point, stage, opts, &mut audited)?;
        rec.push(stage, point, state.clone());
    }
    rec.trace.audited = audited;
    Ok(rec.trace)
}

/// Runs `d` on the text produced from its own states by `g`, labeled by
/// `oracle`.
pub fn run_dynamic(
    d: &Setup,
    g: &Generator,
    oracle: &Oracle,
    steps: usize,
    opts: &RunOptions,
) -> Result<CapitalTrace, EngineError> {
    let mut rec = Recorder::new(d.start(), opts.record_states);
    let mut state = d.start().clone();
    let mut pauses = 0;
    let mut audited = 0;
    for stage in 1..=steps {
        let point = match g(&state) {
            TextItem::Pause => {
                pauses += 1;
                if pauses > opts.budget {
                    return Err(EngineError::Budget {
                        stage,
                        budget: opts.budget,
                    });
                }
                DataPoint::Pause
            }
            TextItem::Word(w) => {
                pauses = 0;
                let label = oracle(&w);
                DataPoint::Labeled { word: w, label }
            }
        };
        state = advance(d, &state, &point, stage, opts, &mut audited)?;
        rec.push(stage, point, state.clone());
    }
    rec.trace.audited = audited;
    Ok(rec.trace)
}

/// Some capital in the trace reaches `threshold`.
pub fn succeeded(trace: &CapitalTrace, threshold: &Dyadic) -> bool {
    trace.entries.iter().any(|e| e.capital >= *threshold)
}
