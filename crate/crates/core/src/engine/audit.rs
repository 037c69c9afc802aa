use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{DataPoint, MState, Setup};
use crate::automata::Word;
use crate::dyadic::Dyadic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `2π(s) ≠ π(f(s,x,0)) + π(f(s,x,1))`.
    Unfair { zero: Dyadic, one: Dyadic },
    /// A pause changed the capital.
    PauseChanged { after: Dyadic },
    /// The step function refused the input.
    StepFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub setup: String,
    pub state: MState,
    pub word: Option<Word>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = match &self.word {
            Some(w) => format!("word {:?}", w),
            None => "pause".to_string(),
        };
        match &self.kind {
            ViolationKind::Unfair { zero, one } => write!(
                f,
                "{} at state {:?}, {}: 2·{} ≠ {} + {}",
                self.setup, self.state, at, self.state.capital, zero, one
            ),
            ViolationKind::PauseChanged { after } => write!(
                f,
                "{} at state {:?}: pause moved capital to {}",
                self.setup, self.state, after
            ),
            ViolationKind::StepFailed(e) => {
                write!(f, "{} at state {:?}, {}: {}", self.setup, self.state, at, e)
            }
        }
    }
}

/// Both successors of `s` on word `x`, or the violation they exhibit.
pub(crate) fn fair_successors(
    d: &Setup,
    s: &MState,
    x: &Word,
) -> Result<(MState, MState), Violation> {
    let violation = |kind| Violation {
        setup: d.name().to_string(),
        state: s.clone(),
        word: Some(x.clone()),
        kind,
    };
    let zero = d
        .step(s, &DataPoint::labeled(x.clone(), false))
        .map_err(|e| violation(ViolationKind::StepFailed(e.to_string())))?;
    let one = d
        .step(s, &DataPoint::labeled(x.clone(), true))
        .map_err(|e| violation(ViolationKind::StepFailed(e.to_string())))?;
    if &zero.capital + &one.capital != s.capital.scale_pow2(1) {
        return Err(violation(ViolationKind::Unfair {
            zero: zero.capital,
            one: one.capital,
        }));
    }
    Ok((zero, one))
}

pub(crate) fn pause_successor(d: &Setup, s: &MState) -> Result<MState, Violation> {
    let violation = |kind| Violation {
        setup: d.name().to_string(),
        state: s.clone(),
        word: None,
        kind,
    };
    let next = d
        .step(s, &DataPoint::Pause)
        .map_err(|e| violation(ViolationKind::StepFailed(e.to_string())))?;
    if next.capital != s.capital {
        return Err(violation(ViolationKind::PauseChanged {
            after: next.capital,
        }));
    }
    Ok(next)
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Stop exploring new states once this many have been visited.
    pub max_states: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { max_states: 200 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    pub states_checked: usize,
    pub transitions_checked: usize,
}

#[derive(Serialize)]
struct JsonViolation {
    setup: String,
    capital: String,
    memory: Vec<String>,
    word: Option<String>,
    kind: &'static str,
    detail: String,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.violations.extend(other.violations);
        self.states_checked += other.states_checked;
        self.transitions_checked += other.transitions_checked;
    }

    /// The violations as a JSON list (empty when the audit passed).
    pub fn to_json(&self) -> String {
        let rows: Vec<JsonViolation> = self
            .violations
            .iter()
            .map(|v| JsonViolation {
                setup: v.setup.clone(),
                capital: v.state.capital.to_string(),
                memory: v.state.memory.iter().map(|w| w.to_string()).collect(),
                word: v.word.as_ref().map(|w| w.to_string()),
                kind: match v.kind {
                    ViolationKind::Unfair { .. } => "unfair",
                    ViolationKind::PauseChanged { .. } => "pause",
                    ViolationKind::StepFailed(_) => "step-failed",
                },
                detail: v.to_string(),
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("serializable")
    }
}

fn check_state(d: &Setup, s: &MState, probes: &[Word], report: &mut AuditReport) -> Vec<MState> {
    let mut successors = Vec::new();
    report.states_checked += 1;
    for x in probes {
        report.transitions_checked += 1;
        match fair_successors(d, s, x) {
            Ok((a, b)) => {
                successors.push(a);
                successors.push(b);
            }
            Err(v) => report.violations.push(v),
        }
    }
    report.transitions_checked += 1;
    match pause_successor(d, s) {
        Ok(p) => successors.push(p),
        Err(v) => report.violations.push(v),
    }
    successors
}

/// Explores states reachable from the start by the probe words (with both
/// labels) and pauses, checking fairness and pause preservation at each.
pub fn audit_fairness(d: &Setup, probes: &[Word], opts: &AuditOptions) -> AuditReport {
    let mut report = AuditReport::default();
    let mut seen: HashSet<MState> = HashSet::from([d.start().clone()]);
    let mut queue = VecDeque::from([d.start().clone()]);
    while let Some(s) = queue.pop_front() {
        for next in check_state(d, &s, probes, &mut report) {
            if seen.len() < opts.max_states && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    report
}

/// Checks the given states against every probe word and a pause.
pub fn audit_states(d: &Setup, states: &[MState], probes: &[Word]) -> AuditReport {
    let mut report = AuditReport::default();
    for s in states {
        check_state(d, s, probes, &mut report);
    }
    report
}
