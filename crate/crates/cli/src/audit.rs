//! Fairness audits over probe words: the first domain words in ll-order plus
//! words drawn with the seeded [`Lcg`].

use automart::automata::{enumerate_ll, Dfa, Word};
use automart::constructions::{
    family_learner, pclass_bettor, regular_bettor, subset_bettor, tm_dynamic_bettor,
    variant_family_learner, AutomaticFamily, HypothesisSpace, Side,
};
use automart::engine::{audit_fairness, AuditOptions, AuditReport, Setup};
use automart::grammar::cfl_nonrandom_pipeline;
use automart::Lcg;
use serde_json::{json, Value};

use crate::inputs::{load_dfa, load_grammar, load_tm};
use crate::CliError;

/// Longest random probe word.
pub const RANDOM_PROBE_LEN: usize = 8;

/// `count` ll-first domain words followed by up to `count` random ones.
pub fn probe_words(domain: &Dfa, count: usize, seed: u64) -> Vec<Word> {
    let mut out = enumerate_ll(domain, count).unwrap_or_default();
    let sigma = domain.alphabet().track_size(0) as u64;
    let mut rng = Lcg::new(seed);
    let mut added = 0;
    for _ in 0..count * 64 {
        if added == count {
            break;
        }
        let len = rng.below(RANDOM_PROBE_LEN as u64 + 1) as usize;
        let w = Word::from_letters((0..len).map(|_| rng.below(sigma) as u8).collect());
        if domain.contains(&w) {
            out.push(w);
            added += 1;
        }
    }
    out
}

pub struct SetupAudit {
    pub name: String,
    pub report: AuditReport,
}

/// Audits each setup from its start state over the probes.
pub fn audit_setups(setups: &[Setup], probes: &[Word], max_states: usize) -> Vec<SetupAudit> {
    let opts = AuditOptions { max_states };
    setups
        .iter()
        .map(|d| SetupAudit {
            name: d.name().to_string(),
            report: audit_fairness(d, probes, &opts),
        })
        .collect()
}

/// `audit.json`: per-setup reports plus the transitions checked inline by
/// the run itself.
pub fn audit_json(audits: &[SetupAudit], probes: &[Word], seed: u64, inline: usize) -> String {
    let setups: Vec<Value> = audits
        .iter()
        .map(|a| {
            json!({
                "name": a.name,
                "passed": a.report.passed(),
                "states_checked": a.report.states_checked,
                "transitions_checked": a.report.transitions_checked,
                "violations": serde_json::from_str::<Value>(&a.report.to_json())
                    .expect("violation list is JSON"),
            })
        })
        .collect();
    let passed = audits.iter().all(|a| a.report.passed());
    let doc = json!({
        "passed": passed,
        "seed": seed,
        "probes": probes.iter().map(Word::to_string).collect::<Vec<_>>(),
        "inline_transitions": inline,
        "setups": setups,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn arg<'a>(args: &'a [String], i: usize, what: &str) -> Result<&'a str, CliError> {
    args.get(i)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("missing argument: {}", what)))
}

fn optional_domain(args: &[String], i: usize) -> Result<Dfa, CliError> {
    match args.get(i) {
        Some(r) => load_dfa(r),
        None => Ok(automart::automata::examples::sigma_star()),
    }
}

/// The setup named by `audit <kind> <args>` and the domain to probe.
pub fn setup_from_args(kind: &str, args: &[String]) -> Result<(Setup, Dfa), CliError> {
    let failed = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
    match kind {
        "regular-bettor" => {
            let l = load_dfa(arg(args, 0, "language automaton")?)?;
            Ok((regular_bettor(&l), optional_domain(args, 1)?))
        }
        "subset-bettor" => {
            let r = load_dfa(arg(args, 0, "subset automaton")?)?;
            let side: Side = arg(args, 1, "side (inside|outside)")?
                .parse()
                .map_err(|e: String| CliError::Usage(e))?;
            Ok((subset_bettor(&r, side), optional_domain(args, 2)?))
        }
        "family-learner" => Ok((
            family_learner(&AutomaticFamily::prefixes()).map_err(|e| failed(&e))?,
            optional_domain(args, 0)?,
        )),
        "variant-learner" => Ok((
            variant_family_learner(&AutomaticFamily::prefixes()).map_err(|e| failed(&e))?,
            optional_domain(args, 0)?,
        )),
        "tm-dynamic" => {
            let prog = load_tm(arg(args, 0, "machine")?)?;
            let domain = optional_domain(args, 1)?;
            let (setup, _) = tm_dynamic_bettor(&prog, &domain).map_err(|e| failed(&e))?;
            Ok((setup, domain))
        }
        "pclass" => {
            let domain = load_dfa(arg(args, 0, "domain automaton")?)?;
            let programs = args[1..]
                .iter()
                .map(|r| load_tm(r))
                .collect::<Result<Vec<_>, _>>()?;
            if programs.is_empty() {
                return Err(CliError::Usage("pclass needs at least one machine".into()));
            }
            let hyp = HypothesisSpace::new(programs);
            Ok((
                pclass_bettor(&hyp, &domain).map_err(|e| failed(&e))?,
                domain,
            ))
        }
        "cfl-pipeline" => {
            let domain = optional_domain(args, 1)?;
            let g = load_grammar(arg(args, 0, "grammar")?, domain.alphabet())?;
            let (setup, _) = cfl_nonrandom_pipeline(&g, &domain).map_err(|e| failed(&e))?;
            Ok((setup, domain))
        }
        other => Err(CliError::Usage(format!(
            "cannot audit {:?}; expected regular-bettor, subset-bettor, family-learner, \
             variant-learner, tm-dynamic, pclass or cfl-pipeline",
            other
        ))),
    }
}
