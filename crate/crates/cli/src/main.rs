use std::path::{Path, PathBuf};
use std::process::ExitCode;

use automart::automata::{growth_class, slice_counts};
use automart::constructions::{verify_certificate, DiagonalCertificate};
use automart_cli::audit::{audit_json, audit_setups, probe_words, setup_from_args};
use automart_cli::experiment::{diagonal_setups, DEFAULT_AUDIT_STATES, DEFAULT_PROBES};
use automart_cli::inputs::load_dfa;
use automart_cli::{run_experiment, CliError, ExperimentConfig};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "automart",
    version,
    about = "Experiments with automatic martingales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        steps: Option<String>,
        /// Capital to reach, as `num/2^exp`.
        #[arg(long)]
        threshold: Option<String>,
        #[arg(long)]
        horizon: Option<String>,
        #[arg(long)]
        search_bound: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Compare against the artifacts already in the output directory
        /// instead of writing them.
        #[arg(long)]
        replay: bool,
    },
    /// Replay a diagonalization certificate.
    Verify {
        certificate: PathBuf,
        /// Experiment file naming the setups; defaults to the
        /// `experiment.ini` beside the certificate.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Growth class and slice sizes of a one-track automaton.
    Growth {
        dfa: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Fairness audit of a single setup.
    Audit {
        kind: String,
        args: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROBES)]
        probes: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            steps,
            threshold,
            horizon,
            search_bound,
            seed,
            out_dir,
            replay,
        } => {
            let overrides = [
                ("steps", steps),
                ("threshold", threshold),
                ("horizon", horizon),
                ("search_bound", search_bound),
                ("seed", seed),
            ];
            run(&config, &overrides, &out_dir, replay)
        }
        Command::Verify {
            certificate,
            config,
        } => verify(&certificate, config.as_deref()),
        Command::Growth { dfa, max_len } => growth(&dfa, max_len),
        Command::Audit {
            kind,
            args,
            seed,
            probes,
            out_dir,
        } => audit(&kind, &args, seed, probes, out_dir.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(
    path: &Path,
    overrides: &[(&str, Option<String>)],
    out_dir: &Path,
    replay: bool,
) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::load(path)?;
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    let outcome = run_experiment(&cfg)?;
    let mut checks = outcome.checks.clone();
    if replay {
        checks.extend(outcome.replay_against(out_dir));
    } else {
        outcome.write(out_dir)?;
    }
    let mut passed = true;
    for c in &checks {
        if c.passed {
            println!("{}", c);
        } else {
            eprintln!("{}", c);
            passed = false;
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn verify(cert_path: &Path, config: Option<&Path>) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(cert_path).map_err(|e| CliError::Io {
        path: cert_path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let cert = DiagonalCertificate::from_json(&text).map_err(|e| CliError::Input {
        path: cert_path.to_path_buf(),
        detail: e.to_string(),
    })?;
    let config = match config {
        Some(p) => p.to_path_buf(),
        None => cert_path
            .parent()
            .unwrap_or(Path::new("."))
            .join("experiment.ini"),
    };
    let cfg = ExperimentConfig::load(&config)?;
    let domain = cfg.domain()?;
    let setups = diagonal_setups(&cfg, &domain)?;
    match verify_certificate(&cert, &setups, &domain) {
        Ok(()) => {
            println!(
                "certificate ok: {} words, {} setups",
                cert.words.len(),
                setups.len()
            );
            Ok(0)
        }
        Err(e) => {
            match e.word() {
                Some(w) => eprintln!("certificate fails at word {:?}: {}", w, e),
                None => eprintln!("certificate fails: {}", e),
            }
            Ok(1)
        }
    }
}

fn growth(reference: &str, max_len: usize) -> Result<i32, CliError> {
    let d = load_dfa(reference)?;
    let bad = |e: &dyn std::fmt::Display| CliError::Input {
        path: PathBuf::from(reference),
        detail: e.to_string(),
    };
    let class = growth_class(&d).map_err(|e| bad(&e))?;
    let slices: Vec<String> = slice_counts(&d, max_len)
        .map_err(|e| bad(&e))?
        .iter()
        .map(|c| c.to_string())
        .collect();
    let doc = json!({ "class": class, "slices": slices });
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    );
    Ok(0)
}

fn audit(
    kind: &str,
    args: &[String],
    seed: u64,
    probes: usize,
    out_dir: Option<&Path>,
) -> Result<i32, CliError> {
    let (setup, domain) = setup_from_args(kind, args)?;
    let words = probe_words(&domain, probes, seed);
    let audits = audit_setups(std::slice::from_ref(&setup), &words, DEFAULT_AUDIT_STATES);
    let report = &audits[0].report;
    let text = audit_json(&audits, &words, seed, 0);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
            path: dir.to_path_buf(),
            detail: e.to_string(),
        })?;
        let p = dir.join("audit.json");
        std::fs::write(&p, &text).map_err(|e| CliError::Io {
            path: p.clone(),
            detail: e.to_string(),
        })?;
    }
    println!(
        "{}: {} states, {} transitions, {} violations",
        setup.name(),
        report.states_checked,
        report.transitions_checked,
        report.violations.len()
    );
    for v in report.violations.iter().take(5) {
        eprintln!("  {}", v);
    }
    Ok(if report.passed() { 0 } else { 1 })
}
