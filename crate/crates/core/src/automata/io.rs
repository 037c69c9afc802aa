//! JSON file format for automata.
//!
//! ```json
//! {"arity": 2, "alphabet": ["0", "1"], "states": 2, "start": 0,
//!  "accepting": [1],
//!  "transitions": [[0, "00", 0], [0, "#1", 1], [1, "#0", 1]]}
//! ```
//!
//! `alphabet` is either one letter list shared by every track or a list of
//! per-track lists, and defaults to `{0,1}`. Columns are strings with one
//! character per track and `#` for padding. Missing transitions go to a
//! rejecting trap. A file with several targets for the same state and column,
//! or with `""` columns (ε-moves), is read as an NFA and determinized.

use serde::{Deserialize, Serialize};

use super::dfa::Dfa;
use super::nfa::{determinize, Nfa};
use super::word::Alphabet;
use super::AutomataError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum AlphabetSpec {
    Shared(Vec<String>),
    PerTrack(Vec<Vec<String>>),
}

#[derive(Debug, Serialize, Deserialize)]
struct AutomatonFile {
    arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<AlphabetSpec>,
    states: usize,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, String, usize)>,
}

fn letters(list: &[String]) -> Result<Vec<char>, AutomataError> {
    list.iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(AutomataError::Format(format!(
                    "letter {:?} must be a single character",
                    s
                ))),
            }
        })
        .collect()
}

fn alphabet_of(file: &AutomatonFile) -> Result<Alphabet, AutomataError> {
    if file.arity == 0 {
        return Err(AutomataError::NoTracks);
    }
    match &file.alphabet {
        None => Ok(Alphabet::binary_tracks(file.arity)),
        Some(AlphabetSpec::Shared(list)) => Alphabet::new(vec![letters(list)?; file.arity]),
        Some(AlphabetSpec::PerTrack(lists)) => {
            if lists.len() != file.arity {
                return Err(AutomataError::ArityMismatch {
                    expected: file.arity,
                    found: lists.len(),
                });
            }
            Alphabet::new(lists.iter().map(|l| letters(l)).collect::<Result<_, _>>()?)
        }
    }
}

/// Parses an automaton from its JSON text.
pub fn dfa_from_json(text: &str) -> Result<Dfa, AutomataError> {
    let file: AutomatonFile =
        serde_json::from_str(text).map_err(|e| AutomataError::Format(e.to_string()))?;
    let alphabet = alphabet_of(&file)?;
    let mut edges = Vec::with_capacity(file.transitions.len());
    let mut epsilons = Vec::new();
    for (from, col, to) in &file.transitions {
        if col.is_empty() {
            epsilons.push((*from, *to));
        } else {
            edges.push((*from, alphabet.parse_column(col)?, *to));
        }
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let nondeterministic = sorted
        .windows(2)
        .any(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1);
    if epsilons.is_empty() && !nondeterministic {
        return Dfa::from_edges(alphabet, file.states, file.start, &file.accepting, &sorted);
    }
    let check = |q: usize| {
        if q >= file.states {
            Err(AutomataError::Format(format!("state {} out of range", q)))
        } else {
            Ok(())
        }
    };
    check(file.start)?;
    let mut nfa = Nfa::new(alphabet, file.states, file.start);
    for &q in &file.accepting {
        check(q)?;
        nfa.set_accepting(q);
    }
    for &(p, c, q) in &sorted {
        check(p)?;
        check(q)?;
        if c == nfa.alphabet().all_pad_column() {
            return Err(AutomataError::Format("illegal all-# column".into()));
        }
        nfa.add_edge(p, c, q);
    }
    for (p, q) in epsilons {
        check(p)?;
        check(q)?;
        nfa.add_epsilon(p, q);
    }
    Ok(determinize(&nfa).reachable())
}

/// Serializes a DFA, omitting transitions into states that cannot accept.
pub fn dfa_to_json(d: &Dfa) -> String {
    let alphabet = d.alphabet();
    let shared = alphabet.tracks().iter().all(|t| *t == alphabet.tracks()[0]);
    let as_strings = |t: &[char]| t.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let spec = if shared {
        AlphabetSpec::Shared(as_strings(alphabet.track(0)))
    } else {
        AlphabetSpec::PerTrack(alphabet.tracks().iter().map(|t| as_strings(t)).collect())
    };
    let live = d.co_reachable();
    let mut transitions = Vec::new();
    for q in 0..d.state_count() {
        for c in alphabet.legal_columns() {
            let r = d.next(q, c);
            if live[r] {
                transitions.push((q, alphabet.render_column(c), r));
            }
        }
    }
    let file = AutomatonFile {
        arity: d.arity(),
        alphabet: Some(spec),
        states: d.state_count(),
        start: d.start(),
        accepting: d.accepting_states().collect(),
        transitions,
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{examples, Word};

    #[test]
    fn roundtrip_examples() {
        for d in examples::corpus() {
            let back = dfa_from_json(&dfa_to_json(&d.dfa)).unwrap();
            assert!(back.equivalent(&d.dfa).unwrap(), "{}", d.name);
        }
        let m = examples::shorter();
        assert!(dfa_from_json(&dfa_to_json(&m))
            .unwrap()
            .equivalent(&m)
            .unwrap());
    }

    #[test]
    fn parses_relation_file() {
        let text = r##"{"arity": 2, "alphabet": ["0", "1"], "states": 2, "start": 0,
            "accepting": [1],
            "transitions": [[0, "00", 0], [0, "01", 0], [0, "10", 0], [0, "11", 0],
                            [0, "#0", 1], [0, "#1", 1], [1, "#0", 1], [1, "#1", 1]]}"##;
        let d = dfa_from_json(text).unwrap();
        assert!(d.equivalent(&examples::shorter()).unwrap());
    }

    #[test]
    fn nondeterministic_file_is_determinized() {
        // Words ending in 1, written with a guess.
        let text = r#"{"arity": 1, "states": 2, "start": 0, "accepting": [1],
            "transitions": [[0, "0", 0], [0, "1", 0], [0, "1", 1]]}"#;
        let d = dfa_from_json(text).unwrap();
        assert!(d.contains(&Word::bits("001")));
        assert!(!d.contains(&Word::bits("010")));
    }

    #[test]
    fn custom_letters() {
        let text = r#"{"arity": 1, "alphabet": ["a", "b", "c"], "states": 1, "start": 0,
            "accepting": [0], "transitions": [[0, "a", 0], [0, "c", 0]]}"#;
        let d = dfa_from_json(text).unwrap();
        let w = d.alphabet().parse_word(0, "acca").unwrap();
        assert!(d.contains(&w));
        assert!(!d.contains(&d.alphabet().parse_word(0, "ab").unwrap()));
    }

    #[test]
    fn malformed_files_are_errors() {
        assert!(dfa_from_json("{").is_err());
        let bad_state =
            r#"{"arity": 1, "states": 1, "start": 0, "accepting": [3], "transitions": []}"#;
        assert!(dfa_from_json(bad_state).is_err());
        let bad_col = r#"{"arity": 1, "states": 1, "start": 0, "accepting": [0], "transitions": [[0, "2", 0]]}"#;
        assert!(dfa_from_json(bad_col).is_err());
    }
}
