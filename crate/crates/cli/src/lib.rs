//! File-driven experiments over the `automart` library: every run writes
//! its capital trace, a fairness audit and, where the experiment has one, a
//! certificate, and reports whether the experiment's checks held.

pub mod audit;
pub mod config;
pub mod dyadic_audit;
pub mod experiment;
pub mod inputs;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{ExperimentConfig, Kind};
pub use experiment::run_experiment;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {detail}")]
    Config { line: usize, detail: String },
    #[error("{}: {detail}", path.display())]
    Io { path: PathBuf, detail: String },
    #[error("{}: {detail}", path.display())]
    Input { path: PathBuf, detail: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for unreadable or malformed input, 1 for a failed experiment.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

/// One named property of an experiment and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAILED" };
        if self.detail.is_empty() {
            write!(f, "{:<28} {}", self.name, status)
        } else {
            write!(f, "{:<28} {} ({})", self.name, status, self.detail)
        }
    }
}

/// Files produced by a run, keyed by file name, and its checks.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub artifacts: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let io = |e: std::io::Error, p: &Path| CliError::Io {
            path: p.to_path_buf(),
            detail: e.to_string(),
        };
        std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
        for (name, content) in &self.artifacts {
            let p = dir.join(name);
            std::fs::write(&p, content).map_err(|e| io(e, &p))?;
        }
        Ok(())
    }

    /// Compares every artifact with the file of the same name in `dir`.
    pub fn replay_against(&self, dir: &Path) -> Vec<Check> {
        self.artifacts
            .iter()
            .map(|(name, content)| {
                let p = dir.join(name);
                match std::fs::read_to_string(&p) {
                    Ok(old) if old == *content => Check::new(format!("replay {}", name), true, ""),
                    Ok(old) => Check::new(
                        format!("replay {}", name),
                        false,
                        first_difference(&old, content),
                    ),
                    Err(e) => Check::new(format!("replay {}", name), false, e.to_string()),
                }
            })
            .collect()
    }
}

fn first_difference(old: &str, new: &str) -> String {
    for (i, (a, b)) in old.lines().zip(new.lines()).enumerate() {
        if a != b {
            return format!("line {} differs: {:?} vs {:?}", i + 1, a, b);
        }
    }
    format!(
        "lengths differ: {} vs {} lines",
        old.lines().count(),
        new.lines().count()
    )
}
