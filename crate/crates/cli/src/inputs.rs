//! Loading automata, grammars and machines named in a config. A reference
//! is either a file path or `builtin:<name>`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use automart::automata::{dfa_from_json, examples, Alphabet, Dfa, Word};
use automart::constructions::{machines, AutomaticFamily, TmProgram};
use automart::engine::{oracle_from_dfa, Oracle};
use automart::grammar::{cyk_member, to_cnf, Cfg};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Step limit when a machine decides membership for a stream's labels.
pub const ORACLE_STEPS: usize = 1 << 20;

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: PathBuf::from(path),
        detail: e.to_string(),
    })
}

fn bad_input(path: &str, detail: impl ToString) -> CliError {
    CliError::Input {
        path: PathBuf::from(path),
        detail: detail.to_string(),
    }
}

pub fn load_dfa(reference: &str) -> Result<Dfa, CliError> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return examples::by_name(name)
            .ok_or_else(|| bad_input(reference, "no built-in automaton of that name"));
    }
    dfa_from_json(&read(reference)?).map_err(|e| bad_input(reference, e))
}

pub fn load_grammar(reference: &str, alphabet: &Alphabet) -> Result<Cfg, CliError> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return match name {
            "equal_blocks" => Ok(Cfg::equal_blocks(0)),
            "equal_blocks_nonempty" => Ok(Cfg::equal_blocks(1)),
            _ => Err(bad_input(reference, "no built-in grammar of that name")),
        };
    }
    Cfg::parse(alphabet.clone(), &read(reference)?).map_err(|e| bad_input(reference, e))
}

pub fn load_tm(reference: &str) -> Result<TmProgram, CliError> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return machines::by_name(name)
            .ok_or_else(|| bad_input(reference, "no built-in machine of that name"));
    }
    TmProgram::from_json(&read(reference)?).map_err(|e| bad_input(reference, e))
}

/// Membership decided by a machine within [`ORACLE_STEPS`] steps; a machine
/// that does not halt in time answers 0.
pub fn tm_oracle(prog: &TmProgram) -> Oracle {
    let prog = prog.clone();
    Arc::new(move |w: &Word| prog.run(w, ORACLE_STEPS).is_some_and(|(v, _)| v))
}

pub fn grammar_oracle(g: &Cfg) -> Oracle {
    let cnf = to_cnf(g);
    Arc::new(move |w: &Word| cyk_member(&cnf, w))
}

impl ExperimentConfig {
    fn resolved(&self, key: &str) -> Option<String> {
        self.input(key).map(|r| self.resolve(r))
    }

    pub fn required(&self, key: &str) -> Result<String, CliError> {
        self.resolved(key)
            .ok_or_else(|| CliError::Usage(format!("{} needs inputs.{}", self.kind, key)))
    }

    /// `inputs.domain`, defaulting to `{0,1}*`.
    pub fn domain(&self) -> Result<Dfa, CliError> {
        match self.resolved("domain") {
            Some(r) => load_dfa(&r),
            None => Ok(examples::sigma_star()),
        }
    }

    pub fn dfa(&self, key: &str) -> Result<Dfa, CliError> {
        load_dfa(&self.required(key)?)
    }

    pub fn grammar(&self, key: &str, alphabet: &Alphabet) -> Result<Cfg, CliError> {
        load_grammar(&self.required(key)?, alphabet)
    }

    pub fn tm(&self, key: &str) -> Result<TmProgram, CliError> {
        load_tm(&self.required(key)?)
    }

    pub fn tm_list(&self, key: &str) -> Result<Vec<TmProgram>, CliError> {
        self.input_list(key)
            .iter()
            .map(|r| load_tm(&self.resolve(r)))
            .collect()
    }

    /// The language labeling the stream: `inputs.target`, `target_grammar`
    /// or `target_tm`, else `fallback`.
    pub fn truth(&self, alphabet: &Alphabet, fallback: Option<Oracle>) -> Result<Oracle, CliError> {
        if let Some(r) = self.resolved("target") {
            return Ok(oracle_from_dfa(&load_dfa(&r)?));
        }
        if let Some(r) = self.resolved("target_grammar") {
            return Ok(grammar_oracle(&load_grammar(&r, alphabet)?));
        }
        if let Some(r) = self.resolved("target_tm") {
            return Ok(tm_oracle(&load_tm(&r)?));
        }
        fallback.ok_or_else(|| {
            CliError::Usage(format!(
                "{} needs one of inputs.target, inputs.target_grammar, inputs.target_tm",
                self.kind
            ))
        })
    }

    /// `inputs.index` and `inputs.relation`, or the prefix family.
    pub fn family(&self) -> Result<AutomaticFamily, CliError> {
        match (self.resolved("index"), self.resolved("relation")) {
            (None, None) => Ok(AutomaticFamily::prefixes()),
            (Some(i), Some(r)) => {
                AutomaticFamily::new(load_dfa(&i)?, load_dfa(&r)?).map_err(|e| bad_input(&r, e))
            }
            _ => Err(CliError::Usage(
                "inputs.index and inputs.relation go together".into(),
            )),
        }
    }
}

/// Short, location-independent label of a reference.
pub fn label(reference: &str) -> String {
    match reference.strip_prefix("builtin:") {
        Some(name) => name.to_string(),
        None => Path::new(reference)
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| reference.to_string()),
    }
}
