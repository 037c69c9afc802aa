use std::collections::BTreeSet;
use std::sync::Arc;

use automart::automata::{
    dfa_to_json, enumerate_ll, growth_class, slice_counts, Dfa, GrowthClass, Word,
};
use automart::constructions::{
    adversarial_text, current_anchor, current_hypothesis, diagonalize, dovetail_pairs,
    extract_language, family_learner, hypotheses_exhausted, pclass_bettor, regular_bettor,
    subset_bettor, tm_dynamic_bettor, variant_family_learner, verify_certificate, Adversary,
    Budget, HypothesisSpace, Side, TextMode, DEFAULT_SEARCH_BOUND,
};
use automart::dyadic::Dyadic;
use automart::engine::{
    oracle_from_dfa, run, run_dynamic, succeeded, CapitalTrace, Oracle, RunOptions, Setup, Stream,
    Text,
};
use automart::grammar::{cfl_nonrandom_pipeline, RegularSubset};
use serde_json::json;

use crate::audit::{audit_json, audit_setups, probe_words};
use crate::config::{ExperimentConfig, Kind};
use crate::dyadic_audit::dyadic_audit;
use crate::inputs::{grammar_oracle, label, load_dfa, load_grammar, tm_oracle};
use crate::{CliError, Outcome};

pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_HORIZON: usize = 100;
pub const DEFAULT_PROBES: usize = 16;
pub const DEFAULT_AUDIT_STATES: usize = 200;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn json_text(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn ll_stream(domain: &Dfa, oracle: Oracle) -> Result<Stream, CliError> {
    Ok(Stream::new(Text::ll(domain).map_err(usage)?, oracle).within(domain))
}

fn opts() -> RunOptions {
    RunOptions {
        audit: true,
        ..RunOptions::default()
    }
}

fn parse_word(domain: &Dfa, s: &str) -> Result<Word, CliError> {
    let s = if s == "ε" { "" } else { s };
    domain.alphabet().parse_word(0, s).map_err(usage)
}

fn render(domain: &Dfa, w: &Word) -> String {
    domain.alphabet().render_word(0, w)
}

/// Artifacts, checks and audit shared by every experiment that runs a
/// setup over a stream.
struct Session<'a> {
    cfg: &'a ExperimentConfig,
    out: Outcome,
    inline: usize,
}

impl<'a> Session<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        let mut out = Outcome::default();
        out.artifacts.insert("experiment.ini".into(), cfg.to_ini());
        Session {
            cfg,
            out,
            inline: 0,
        }
    }

    /// Records a finished run, or the error that stopped it.
    fn trace(
        &mut self,
        result: Result<CapitalTrace, automart::engine::EngineError>,
    ) -> Option<CapitalTrace> {
        match result {
            Ok(t) => {
                self.inline += t.audited;
                self.out.artifacts.insert("trace.csv".into(), t.to_csv());
                self.out
                    .artifacts
                    .insert("trace.json".into(), t.to_json() + "\n");
                self.out.check(
                    "run",
                    true,
                    format!(
                        "{} stages, final capital {}",
                        t.entries.len() - 1,
                        t.last_capital()
                    ),
                );
                self.thresholds(&t);
                Some(t)
            }
            Err(e) => {
                self.out.check("run", false, e.to_string());
                None
            }
        }
    }

    fn thresholds(&mut self, t: &CapitalTrace) {
        if let Some(th) = self.cfg.dyadic("threshold") {
            let max = t
                .entries
                .iter()
                .map(|e| &e.capital)
                .max()
                .expect("nonempty");
            self.out.check(
                "threshold",
                succeeded(t, &th),
                format!("max capital {} against {}", max, th),
            );
        }
        if let Some(x) = self.cfg.dyadic("expect_final") {
            self.out.check(
                "final capital",
                *t.last_capital() == x,
                format!("{} expected {}", t.last_capital(), x),
            );
        }
    }

    fn audit(&mut self, setups: &[Setup], domain: &Dfa) {
        let seed = self.cfg.seed();
        let probes = probe_words(domain, self.cfg.count("probes", DEFAULT_PROBES), seed);
        let audits = audit_setups(setups, &probes, DEFAULT_AUDIT_STATES);
        let failed: Vec<String> = audits
            .iter()
            .filter(|a| !a.report.passed())
            .map(|a| format!("{}: {}", a.name, a.report.violations[0]))
            .collect();
        let checked: usize = audits.iter().map(|a| a.report.transitions_checked).sum();
        self.out.check(
            "fairness audit",
            failed.is_empty(),
            if failed.is_empty() {
                format!("{} transitions, {} inline", checked, self.inline)
            } else {
                failed.join("; ")
            },
        );
        self.out.artifacts.insert(
            "audit.json".into(),
            audit_json(&audits, &probes, seed, self.inline),
        );
    }

    fn finish(self) -> Outcome {
        self.out
    }
}

/// Runs the experiment described by `cfg` and collects its artifacts.
/// Nothing is written to disk.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.kind {
        Kind::RegularBettor => regular(cfg),
        Kind::Adversarial => adversarial(cfg),
        Kind::SubsetBettor => subset(cfg),
        Kind::FamilyLearner => family(cfg, false),
        Kind::VariantLearner => family(cfg, true),
        Kind::TmDynamic => tm_dynamic(cfg),
        Kind::Diagonalize => diagonal(cfg),
        Kind::Pclass => pclass(cfg),
        Kind::CflPipeline => cfl(cfg),
        Kind::GrowthReport => growth(cfg),
        Kind::DyadicAudit => dyadic(cfg),
    }
}

fn regular(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let l = cfg.dfa("language")?;
    let setup = regular_bettor(&l);
    let oracle = cfg.truth(domain.alphabet(), Some(oracle_from_dfa(&l)))?;
    let mut s = Session::new(cfg);
    let mut stream = ll_stream(&domain, oracle)?;
    s.trace(run(
        &setup,
        &mut stream,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    ));
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

fn adversarial(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let l = cfg.dfa("language")?;
    let setup = regular_bettor(&l);
    let oracle = cfg.truth(domain.alphabet(), None)?;
    let mode: TextMode = cfg.param("mode").unwrap_or("any").parse().map_err(usage)?;
    let horizon = cfg.count("horizon", DEFAULT_HORIZON);
    let bound = cfg.count("search_bound", DEFAULT_SEARCH_BOUND);
    let mut s = Session::new(cfg);
    let adv = adversarial_text(&setup, &oracle, &domain, mode, horizon, bound).map_err(usage)?;
    match &adv {
        Adversary::Text { words, .. } => {
            let text = adv.to_text().expect("a text");
            let mut stream = Stream::new(text, oracle.clone()).within(&domain);
            if let Some(t) = s.trace(run(&setup, &mut stream, words.len(), &opts())) {
                let start = t.entries[0].capital.clone();
                let max = t.capitals().into_iter().max().expect("nonempty");
                s.out.check(
                    "capital never rises",
                    max <= start,
                    format!("max capital {} over {} words", max, words.len()),
                );
            }
        }
        Adversary::Stall(w) => {
            let n = cfg.count("extract_len", 8);
            let total: usize = slice_counts(&domain, n)
                .map_err(usage)?
                .iter()
                .map(|c| usize::try_from(c).unwrap_or(usize::MAX))
                .sum();
            let tests = enumerate_ll(&domain, total).map_err(usage)?;
            let extracted = extract_language(&setup, &w.state, &tests).map_err(usage)?;
            let disagreements: Vec<String> = extracted
                .iter()
                .filter(|(x, m)| l.contains(x) != *m)
                .map(|(x, _)| render(&domain, x))
                .collect();
            s.out.check(
                "extraction matches bettor",
                disagreements.is_empty(),
                format!(
                    "stall at stage {} after {} candidates; {} words checked{}",
                    w.stage,
                    w.search_bound,
                    extracted.len(),
                    if disagreements.is_empty() {
                        String::new()
                    } else {
                        format!(", first disagreement {}", disagreements[0])
                    }
                ),
            );
            let stall = json!({
                "stage": w.stage,
                "search_bound": w.search_bound,
                "capital": w.state.capital.to_string(),
                "memory": w.state.memory.iter().map(|m| render(&domain, m)).collect::<Vec<_>>(),
                "prefix": w.prefix.iter().map(|m| render(&domain, m)).collect::<Vec<_>>(),
                "extracted": extracted
                    .iter()
                    .map(|(x, m)| json!({"w": render(&domain, x), "member": u8::from(*m)}))
                    .collect::<Vec<_>>(),
            });
            s.out
                .artifacts
                .insert("stall.json".into(), json_text(stall));
        }
    }
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

fn subset(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let r = cfg.dfa("subset")?;
    let side: Side = cfg
        .param("side")
        .ok_or_else(|| usage("subset-bettor needs side = inside|outside"))?
        .parse()
        .map_err(usage)?;
    let setup = subset_bettor(&r, side);
    let oracle = cfg.truth(domain.alphabet(), None)?;
    let mut s = Session::new(cfg);
    let mut stream = ll_stream(&domain, oracle)?;
    s.trace(run(
        &setup,
        &mut stream,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    ));
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

fn family(cfg: &ExperimentConfig, variant: bool) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let fam = cfg.family()?;
    let index_domain = fam.index().clone();
    let e = match cfg.param("index") {
        Some(s) => parse_word(&index_domain, s)?,
        None => fam.first_index().map_err(usage)?,
    };
    let variants: BTreeSet<Word> = cfg
        .param("variants")
        .map(|v| {
            v.split(',')
                .map(|w| parse_word(&domain, w.trim()))
                .collect::<Result<_, _>>()
        })
        .transpose()?
        .unwrap_or_default();
    let f = fam.clone();
    let target = e.clone();
    let fallback: Oracle = Arc::new(move |x: &Word| f.contains(x, &target) != variants.contains(x));
    let oracle = cfg.truth(domain.alphabet(), Some(fallback))?;
    let setup = if variant {
        variant_family_learner(&fam)
    } else {
        family_learner(&fam)
    }
    .map_err(usage)?;
    let mut s = Session::new(cfg);
    let mut stream = ll_stream(&domain, oracle)?;
    if let Some(t) = s.trace(run(
        &setup,
        &mut stream,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    )) {
        let mem: Vec<String> = t
            .final_state
            .memory
            .iter()
            .map(|m| render(&index_domain, m))
            .collect();
        s.out.check("final index", true, mem.join(", "));
    }
    if variant {
        let pairs = dovetail_pairs(&fam, cfg.count("pairs", 20)).map_err(usage)?;
        let rows: Vec<_> = pairs
            .iter()
            .map(|(e, d)| json!([render(&index_domain, e), render(&index_domain, d)]))
            .collect();
        s.out
            .artifacts
            .insert("dovetail.json".into(), json_text(json!(rows)));
    }
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

fn tm_dynamic(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let prog = cfg.tm("tm")?;
    let (setup, generator) = tm_dynamic_bettor(&prog, &domain).map_err(usage)?;
    let oracle = cfg.truth(domain.alphabet(), Some(tm_oracle(&prog)))?;
    let mut s = Session::new(cfg);
    let result = run_dynamic(
        &setup,
        &generator,
        &oracle,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    );
    if let Some(t) = s.trace(result) {
        let bets = t
            .entries
            .iter()
            .filter(|e| matches!(e.point, Some(automart::engine::DataPoint::Labeled { .. })))
            .count();
        s.out.check("completed bets", true, bets.to_string());
    }
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

/// The setups listed in `inputs.setups` as `kind:reference` entries, named
/// by position, kind and the reference's file name so the enumeration hash
/// does not depend on where the files live.
pub fn diagonal_setups(cfg: &ExperimentConfig, domain: &Dfa) -> Result<Vec<Setup>, CliError> {
    let entries = cfg.input_list("setups");
    if entries.is_empty() {
        return Err(usage("diagonalize needs inputs.setups"));
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let (kind, reference) = entry.split_once(':').unwrap_or((entry.as_str(), ""));
            let need = || -> Result<String, CliError> {
                if reference.is_empty() {
                    Err(usage(format!("setup {:?} needs a reference", entry)))
                } else {
                    Ok(cfg.resolve(reference))
                }
            };
            let setup = match kind {
                "regular-bettor" => regular_bettor(&load_dfa(&need()?)?),
                "subset-inside" => subset_bettor(&load_dfa(&need()?)?, Side::Inside),
                "subset-outside" => subset_bettor(&load_dfa(&need()?)?, Side::Outside),
                "family-learner" => family_learner(&cfg.family()?).map_err(usage)?,
                "variant-learner" => variant_family_learner(&cfg.family()?).map_err(usage)?,
                "cfl-pipeline" => {
                    let g = load_grammar(&need()?, domain.alphabet())?;
                    cfl_nonrandom_pipeline(&g, domain).map_err(usage)?.0
                }
                other => return Err(usage(format!("unknown setup kind {:?}", other))),
            };
            let name = if reference.is_empty() {
                format!("{}:{}", i, kind)
            } else {
                format!("{}:{}:{}", i, kind, label(reference))
            };
            Ok(setup.renamed(name))
        })
        .collect()
}

fn diagonal(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let setups = diagonal_setups(cfg, &domain)?;
    let mut s = Session::new(cfg);
    match diagonalize(&setups, &domain, cfg.count("words", 30)) {
        Ok(cert) => {
            let two = Dyadic::from_int(2);
            let max = cert.max_capital().cloned().unwrap_or_else(Dyadic::zero);
            s.out
                .check("capitals at most 2", max <= two, format!("max {}", max));
            let replay = verify_certificate(&cert, &setups, &domain);
            s.out.check(
                "certificate replay",
                replay.is_ok(),
                replay.err().map(|e| e.to_string()).unwrap_or_default(),
            );
            s.out
                .artifacts
                .insert("certificate.json".into(), cert.to_json() + "\n");
        }
        Err(e) => s.out.check("diagonalize", false, e.to_string()),
    }
    s.audit(&setups, &domain);
    Ok(s.finish())
}

fn pclass(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let programs = cfg.tm_list("hypotheses")?;
    if programs.is_empty() {
        return Err(usage("pclass needs inputs.hypotheses"));
    }
    let mut hyp = HypothesisSpace::new(programs);
    if cfg.param("relisted") == Some("true") {
        hyp = hyp.relisted();
    }
    let default = Budget::default();
    hyp = hyp.with_budget(Budget {
        coeff: cfg.count("budget_coeff", default.coeff),
        degree: cfg.count("budget_degree", default.degree as usize) as u32,
    });
    let setup = pclass_bettor(&hyp, &domain).map_err(usage)?;
    let oracle = cfg.truth(domain.alphabet(), None)?;
    let mut s = Session::new(cfg);
    let mut stream = ll_stream(&domain, oracle)?;
    if let Some(t) = s.trace(run(
        &setup,
        &mut stream,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    )) {
        let e = current_hypothesis(&t.final_state);
        if let Some(want) = cfg.param("expect_hypothesis") {
            let want: usize = want.parse().expect("checked");
            s.out.check(
                "hypothesis",
                e == want,
                format!("index {} expected {}", e, want),
            );
        }
        let state = json!({
            "hypothesis": e,
            "exhausted": hypotheses_exhausted(&hyp, &t.final_state),
            "anchor_length": current_anchor(&t.final_state).len(),
        });
        s.out
            .artifacts
            .insert("pclass.json".into(), json_text(state));
    }
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

fn subset_json(domain: &Dfa, r: &RegularSubset, sweep: usize) -> String {
    let words = |ws: &[Word]| ws.iter().map(|w| render(domain, w)).collect::<Vec<_>>();
    let doc = json!({
        "side": r.side.to_string(),
        "x": render(domain, &r.x),
        "u": render(domain, &r.u),
        "v": render(domain, &r.v),
        "w": render(domain, &r.w),
        "excluded": words(&r.excluded),
        "progression": r.progression.map(|(m, k)| json!({"m": m, "k": k})),
        "sweep": sweep,
        "automaton": serde_json::from_str::<serde_json::Value>(&dfa_to_json(&r.dfa))
            .expect("automaton JSON"),
    });
    json_text(doc)
}

fn cfl(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let domain = cfg.domain()?;
    let g = cfg.grammar("grammar", domain.alphabet())?;
    let (setup, r) = cfl_nonrandom_pipeline(&g, &domain).map_err(usage)?;
    let oracle = cfg.truth(domain.alphabet(), Some(grammar_oracle(&g)))?;
    let mut s = Session::new(cfg);
    let sweep = cfg.count("sweep", 100);
    let members = enumerate_ll(&r.dfa, sweep).map_err(usage)?;
    let inside = r.side == Side::Inside;
    let wrong: Vec<String> = members
        .iter()
        .filter(|w| oracle(w) != inside)
        .map(|w| render(&domain, w))
        .collect();
    s.out.check(
        "side consistency",
        wrong.is_empty() && members.len() == sweep,
        if wrong.is_empty() {
            format!("{} members of r all {}", members.len(), r.side)
        } else {
            format!("{} on the wrong side, first {}", wrong.len(), wrong[0])
        },
    );
    s.out.artifacts.insert(
        "subset.json".into(),
        subset_json(&domain, &r, members.len()),
    );
    let mut stream = ll_stream(&domain, oracle)?;
    s.trace(run(
        &setup,
        &mut stream,
        cfg.count("steps", DEFAULT_STEPS),
        &opts(),
    ));
    s.audit(&[setup], &domain);
    Ok(s.finish())
}

/// Slice sizes by trying every word of each length.
pub fn brute_slices(d: &Dfa, max_len: usize) -> Vec<u64> {
    let sigma = d.alphabet().track_size(0);
    let mut out = Vec::with_capacity(max_len + 1);
    let mut layer = vec![Word::empty()];
    for n in 0..=max_len {
        if n > 0 {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..sigma).map(move |a| {
                        let mut x = w.clone();
                        x.push(a as u8);
                        x
                    })
                })
                .collect();
        }
        out.push(layer.iter().filter(|w| d.contains(w)).count() as u64);
    }
    out
}

fn growth(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut refs = cfg.input_list("automata");
    if refs.is_empty() {
        refs.push(
            cfg.input("domain")
                .ok_or_else(|| usage("growth-report needs inputs.automata or inputs.domain"))?
                .to_string(),
        );
    }
    let max_len = cfg.count("max_len", 12);
    let mut s = Session::new(cfg);
    let mut rows = Vec::new();
    for r in &refs {
        let d = load_dfa(&cfg.resolve(r))?;
        if d.arity() != 1 {
            return Err(usage(format!("{} reads {} tracks", r, d.arity())));
        }
        let class = growth_class(&d).map_err(usage)?;
        let counted: Vec<u64> = slice_counts(&d, max_len)
            .map_err(usage)?
            .iter()
            .map(|c| c.to_string().parse().expect("small"))
            .collect();
        let brute = brute_slices(&d, max_len);
        let bounded_ok = match class {
            GrowthClass::BoundedSlices(c) => brute.iter().all(|&n| n <= c),
            _ => true,
        };
        s.out.check(
            format!("slices of {}", label(r)),
            counted == brute && bounded_ok,
            format!("{:?}", class),
        );
        rows.push(json!({
            "automaton": label(r),
            "class": class,
            "slices": counted,
        }));
    }
    s.out
        .artifacts
        .insert("growth.json".into(), json_text(json!(rows)));
    Ok(s.finish())
}

fn dyadic(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let report = dyadic_audit(cfg.count("samples", 10_000), cfg.seed());
    let mut s = Session::new(cfg);
    s.out.check(
        "two-row arithmetic",
        report.passed(),
        format!(
            "{} samples, max carry {}, max live runs {}",
            report.samples, report.max_carry, report.max_runs
        ),
    );
    s.out
        .artifacts
        .insert("audit.json".into(), report.to_json());
    Ok(s.finish())
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use automart::automata::examples::sigma_star;
    use automart::engine::{DataPoint, MState};

    use super::*;

    #[test]
    fn an_unfair_setup_fails_the_run() {
        let cfg = ExperimentConfig::parse("[experiment]\nkind = regular-bettor\n", Path::new("."))
            .unwrap();
        let greedy = Setup::primitive(
            "greedy",
            MState::new(Dyadic::one(), vec![]),
            vec![Dyadic::new(3, 1)],
            |s, p| match p {
                DataPoint::Pause => Ok(s.clone()),
                DataPoint::Labeled { .. } => Ok(s.scaled(&Dyadic::new(3, 1))),
            },
        );
        let mut s = Session::new(&cfg);
        s.audit(&[greedy], &sigma_star());
        let out = s.finish();
        assert!(!out.passed());
        assert_eq!(out.exit_code(), 1);
        assert!(out.artifacts["audit.json"].contains("\"passed\": false"));
    }

    #[test]
    fn brute_slices_count_every_word() {
        assert_eq!(brute_slices(&sigma_star(), 4), vec![1, 2, 4, 8, 16]);
    }
}
