//! Experiment files: `key = value` lines under `[experiment]` and
//! `[inputs]` headers. `#` and `;` start comment lines.
//!
//! ```text
//! [experiment]
//! kind = regular-bettor
//! steps = 40
//!
//! [inputs]
//! language = builtin:0*1*
//! domain = builtin:sigma*
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use automart::dyadic::Dyadic;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    RegularBettor,
    Adversarial,
    SubsetBettor,
    FamilyLearner,
    VariantLearner,
    TmDynamic,
    Diagonalize,
    Pclass,
    CflPipeline,
    GrowthReport,
    DyadicAudit,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::RegularBettor,
        Kind::Adversarial,
        Kind::SubsetBettor,
        Kind::FamilyLearner,
        Kind::VariantLearner,
        Kind::TmDynamic,
        Kind::Diagonalize,
        Kind::Pclass,
        Kind::CflPipeline,
        Kind::GrowthReport,
        Kind::DyadicAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::RegularBettor => "regular-bettor",
            Kind::Adversarial => "adversarial",
            Kind::SubsetBettor => "subset-bettor",
            Kind::FamilyLearner => "family-learner",
            Kind::VariantLearner => "variant-learner",
            Kind::TmDynamic => "tm-dynamic",
            Kind::Diagonalize => "diagonalize",
            Kind::Pclass => "pclass",
            Kind::CflPipeline => "cfl-pipeline",
            Kind::GrowthReport => "growth-report",
            Kind::DyadicAudit => "dyadic-audit",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment kind {:?}", s))
    }
}

/// Keys allowed under `[experiment]`, with whether they must be a positive
/// integer.
const EXPERIMENT_KEYS: &[(&str, bool)] = &[
    ("kind", false),
    ("steps", true),
    ("horizon", true),
    ("search_bound", true),
    ("words", true),
    ("samples", true),
    ("max_len", true),
    ("probes", true),
    ("sweep", true),
    ("pairs", true),
    ("extract_len", true),
    ("budget_coeff", true),
    ("budget_degree", true),
    ("seed", false),
    ("threshold", false),
    ("expect_final", false),
    ("expect_hypothesis", false),
    ("mode", false),
    ("side", false),
    ("index", false),
    ("variants", false),
    ("relisted", false),
];

const INPUT_KEYS: &[&str] = &[
    "domain",
    "language",
    "subset",
    "grammar",
    "tm",
    "hypotheses",
    "index",
    "relation",
    "setups",
    "automata",
    "target",
    "target_grammar",
    "target_tm",
];

/// Input keys holding comma-separated lists of references.
const LIST_INPUTS: &[&str] = &["hypotheses", "automata"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    /// Directory that relative input paths are resolved against.
    pub base_dir: PathBuf,
    params: BTreeMap<String, String>,
    inputs: BTreeMap<String, String>,
}

fn parse_err(line: usize, detail: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        detail: detail.into(),
    }
}

fn check_param(key: &str, value: &str) -> Result<(), String> {
    let positive = EXPERIMENT_KEYS
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| format!("unknown key {:?} in [experiment]", key))?
        .1;
    if positive {
        match value.parse::<usize>() {
            Ok(n) if n > 0 => {}
            _ => {
                return Err(format!(
                    "{} must be a positive integer, got {:?}",
                    key, value
                ))
            }
        }
    }
    match key {
        "kind" => value.parse::<Kind>().map(|_| ()),
        "seed" => value
            .parse::<u64>()
            .map(|_| ())
            .map_err(|_| format!("seed must be an unsigned integer, got {:?}", value)),
        "threshold" | "expect_final" => value
            .parse::<Dyadic>()
            .map(|_| ())
            .map_err(|e| format!("{}: {}", key, e)),
        "expect_hypothesis" => value
            .parse::<usize>()
            .map(|_| ())
            .map_err(|_| format!("expect_hypothesis must be an integer, got {:?}", value)),
        "relisted" => value
            .parse::<bool>()
            .map(|_| ())
            .map_err(|_| format!("relisted must be true or false, got {:?}", value)),
        _ => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut section: Option<String> = None;
        let mut params = BTreeMap::new();
        let mut inputs = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let n = i + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if name != "experiment" && name != "inputs" {
                    return Err(parse_err(n, format!("unknown section [{}]", name)));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(n, "expected `key = value`"))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if value.is_empty() {
                return Err(parse_err(n, format!("{} has no value", key)));
            }
            let table = match section.as_deref() {
                Some("experiment") => {
                    check_param(&key, &value).map_err(|e| parse_err(n, e))?;
                    &mut params
                }
                Some("inputs") => {
                    if !INPUT_KEYS.contains(&key.as_str()) {
                        return Err(parse_err(n, format!("unknown key {:?} in [inputs]", key)));
                    }
                    &mut inputs
                }
                _ => return Err(parse_err(n, "key outside a section")),
            };
            if table.insert(key.clone(), value).is_some() {
                return Err(parse_err(n, format!("duplicate key {:?}", key)));
            }
        }
        let kind = params
            .get("kind")
            .ok_or_else(|| parse_err(0, "[experiment] needs a kind"))?
            .parse::<Kind>()
            .expect("checked");
        Ok(ExperimentConfig {
            kind,
            base_dir: base_dir.to_path_buf(),
            params,
            inputs,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        ExperimentConfig::parse(&text, base)
    }

    /// Overrides an `[experiment]` value, with the same checks as the file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        check_param(key, value).map_err(CliError::Usage)?;
        if key == "kind" {
            self.kind = value.parse().expect("checked");
        }
        self.params.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn count(&self, key: &str, default: usize) -> usize {
        self.param(key)
            .map(|v| v.parse().expect("checked"))
            .unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.param("seed")
            .map(|v| v.parse().expect("checked"))
            .unwrap_or(0)
    }

    pub fn dyadic(&self, key: &str) -> Option<Dyadic> {
        self.param(key).map(|v| v.parse().expect("checked"))
    }

    pub fn input(&self, key: &str) -> Option<&str> {
        self.inputs.get(key).map(String::as_str)
    }

    /// A comma-separated list under `[inputs]`.
    pub fn input_list(&self, key: &str) -> Vec<String> {
        self.input(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// `path` resolved against the config directory; `builtin:` names are
    /// kept as they are.
    pub fn resolve(&self, reference: &str) -> String {
        if reference.starts_with("builtin:") {
            return reference.to_string();
        }
        let p = Path::new(reference);
        let joined = if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        };
        std::fs::canonicalize(&joined)
            .unwrap_or(joined)
            .display()
            .to_string()
    }

    /// The config with every file reference made absolute, so it can be
    /// stored next to the artifacts and reloaded from anywhere.
    pub fn to_ini(&self) -> String {
        let mut out = String::from("[experiment]\n");
        for (k, v) in &self.params {
            out.push_str(&format!("{} = {}\n", k, v));
        }
        out.push_str("\n[inputs]\n");
        for (k, v) in &self.inputs {
            let v = if k == "setups" {
                v.clone()
            } else if LIST_INPUTS.contains(&k.as_str()) {
                self.input_list(k)
                    .iter()
                    .map(|r| self.resolve(r))
                    .collect::<Vec<_>>()
                    .join(", ")
            } else {
                self.resolve(v)
            };
            out.push_str(&format!("{} = {}\n", k, v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_and_overrides() {
        let text = "# demo\n[experiment]\nkind = pclass\nsteps = 12\nthreshold = 3/2^1\n\n; inputs\n[inputs]\nhypotheses = builtin:always-0, builtin:always-1\n";
        let mut cfg = ExperimentConfig::parse(text, Path::new(".")).unwrap();
        assert_eq!(cfg.kind, Kind::Pclass);
        assert_eq!(cfg.count("steps", 1), 12);
        assert_eq!(cfg.count("horizon", 7), 7);
        assert_eq!(cfg.dyadic("threshold"), Some(Dyadic::new(3, 1)));
        assert_eq!(cfg.input_list("hypotheses").len(), 2);
        cfg.set("steps", "30").unwrap();
        assert_eq!(cfg.count("steps", 1), 30);
        assert!(cfg.set("steps", "-3").is_err());
        assert!(cfg.set("colour", "red").is_err());
    }

    #[test]
    fn ini_round_trips() {
        let text = "[experiment]\nkind = diagonalize\nwords = 9\n\n[inputs]\nsetups = family-learner, regular-bettor:builtin:0*\n";
        let cfg = ExperimentConfig::parse(text, Path::new(".")).unwrap();
        let again = ExperimentConfig::parse(&cfg.to_ini(), Path::new(".")).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_bad_lines() {
        for text in [
            "[experiment]\nkind = pclass\nkind = pclass\n",
            "[experiment]\nkind = teleport\n",
            "[experiment]\nsteps = 3\n",
            "[experiment]\nkind = pclass\nrelisted = maybe\n",
            "[experiment]\nkind = pclass\nwords\n",
            "[inputs]\nlanguage =\n",
        ] {
            assert!(
                ExperimentConfig::parse(text, Path::new(".")).is_err(),
                "{}",
                text
            );
        }
    }
}
