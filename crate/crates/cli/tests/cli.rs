use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use automart::dyadic::Dyadic;
use num_bigint::BigInt;
use serde_json::Value;
use tempfile::TempDir;

fn automart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_automart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn run(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", config, "--out-dir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    automart(&args)
}

const DIAGONAL: &str = "\
[experiment]
kind = diagonalize
words = 30

[inputs]
setups = regular-bettor:builtin:0*1*, subset-inside:builtin:(00)*, subset-outside:builtin:1(0|1)*, family-learner
";

fn diagonal_run(tmp: &TempDir) -> std::path::PathBuf {
    let cfg = write(tmp.path(), "diag.ini", DIAGONAL);
    let out = tmp.path().join("out");
    let o = run(&cfg, &out, &[]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    out
}

fn certificate(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap()
}

#[test]
fn regular_bettor_trace_ends_at_three_halves_to_the_forty() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "r.ini",
        "[experiment]\nkind = regular-bettor\nsteps = 40\n\n[inputs]\nlanguage = builtin:0*1*\n",
    );
    let o = run(&cfg, tmp.path(), &[]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let trace: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("trace.json")).unwrap()).unwrap();
    let rows = trace.as_array().unwrap();
    assert_eq!(rows.len(), 41);
    let last: Dyadic = rows[40]["capital"].as_str().unwrap().parse().unwrap();
    assert_eq!(last, Dyadic::new(BigInt::from(3).pow(40), 40));
    let csv = fs::read_to_string(tmp.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().count(), 42);
    let audit: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("audit.json")).unwrap()).unwrap();
    assert_eq!(audit["passed"], Value::Bool(true));
}

#[test]
fn threshold_flag_decides_the_exit_status() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "r.ini",
        "[experiment]\nkind = regular-bettor\nsteps = 10\n\n[inputs]\nlanguage = builtin:(00)*\n",
    );
    // (3/2)^10 is about 57.7
    assert_eq!(
        status(&run(&cfg, tmp.path(), &["--threshold", "57/2^0"])),
        0
    );
    assert_eq!(
        status(&run(&cfg, tmp.path(), &["--threshold", "58/2^0"])),
        1
    );
    assert_eq!(status(&run(&cfg, tmp.path(), &["--threshold", "half"])), 2);
}

#[test]
fn diagonalize_replays_bit_exactly() {
    let tmp = TempDir::new().unwrap();
    let out = diagonal_run(&tmp);
    let cfg = tmp.path().join("diag.ini");
    let o = run(cfg.to_str().unwrap(), &out, &["--replay"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));

    let trace = out.join("certificate.json");
    let text = fs::read_to_string(&trace).unwrap();
    fs::write(&trace, text.replacen("\"bit\": 0", "\"bit\": 1", 1)).unwrap();
    let o = run(cfg.to_str().unwrap(), &out, &["--replay"]);
    assert_eq!(status(&o), 1);
    assert!(stderr(&o).contains("certificate.json"));
}

#[test]
fn identical_configs_give_identical_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "diag.ini", DIAGONAL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(status(&run(&cfg, &a, &["--seed", "11"])), 0);
    assert_eq!(status(&run(&cfg, &b, &["--seed", "11"])), 0);
    for name in ["certificate.json", "audit.json", "experiment.ini"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{}",
            name
        );
    }
    let cfg = write(
        tmp.path(),
        "t.ini",
        "[experiment]\nkind = tm-dynamic\nsteps = 50\n\n[inputs]\ntm = builtin:0^n1^n\n",
    );
    assert_eq!(status(&run(&cfg, &a, &[])), 0);
    assert_eq!(status(&run(&cfg, &b, &[])), 0);
    for name in ["trace.csv", "trace.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap()
        );
    }
}

#[test]
fn missing_automaton_file_exits_two_naming_the_path() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "m.ini",
        "[experiment]\nkind = regular-bettor\n\n[inputs]\nlanguage = nowhere.json\n",
    );
    let o = run(&cfg, tmp.path(), &[]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("nowhere.json"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_two_with_a_line_number() {
    let tmp = TempDir::new().unwrap();
    for (text, line) in [
        ("[experiment]\nkind = regular-bettor\nstep = 4\n", "line 3"),
        ("[experiment]\nkind = regular-bettor\nsteps = 0\n", "line 3"),
        ("[experiment]\nkind = regular-bettor\n[other]\n", "line 3"),
        ("kind = regular-bettor\n", "line 1"),
    ] {
        let cfg = write(tmp.path(), "bad.ini", text);
        let o = run(&cfg, tmp.path(), &[]);
        assert_eq!(status(&o), 2, "{}", text);
        assert!(stderr(&o).contains(line), "{}", stderr(&o));
    }
    assert_eq!(status(&automart(&["run"])), 2);
    assert_eq!(status(&automart(&["frobnicate"])), 2);
}

#[test]
fn verify_accepts_a_fresh_certificate() {
    let tmp = TempDir::new().unwrap();
    let out = diagonal_run(&tmp);
    let o = automart(&["verify", out.join("certificate.json").to_str().unwrap()]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
}

#[test]
fn verify_names_the_word_with_a_flipped_bit() {
    let tmp = TempDir::new().unwrap();
    let out = diagonal_run(&tmp);
    let mut cert = certificate(&out);
    let entry = &mut cert["words"][5];
    let word = entry["w"].as_str().unwrap().to_string();
    let bit = entry["bit"].as_u64().unwrap();
    entry["bit"] = Value::from(1 - bit);
    let p = write(&out, "flipped.json", &cert.to_string());
    let o = automart(&["verify", &p]);
    assert_eq!(status(&o), 1);
    assert!(
        stderr(&o).contains(&format!("{:?}", word)),
        "{}",
        stderr(&o)
    );
}

#[test]
fn verify_rejects_a_capital_above_two() {
    let tmp = TempDir::new().unwrap();
    let out = diagonal_run(&tmp);
    let mut cert = certificate(&out);
    cert["words"][3]["capital"] = Value::from("17/2^3");
    let p = write(&out, "raised.json", &cert.to_string());
    let o = automart(&["verify", &p]);
    assert_eq!(status(&o), 1);
    assert!(stderr(&o).contains("17/2^3"), "{}", stderr(&o));
}

#[test]
fn verify_exits_two_on_a_malformed_certificate() {
    let tmp = TempDir::new().unwrap();
    let out = diagonal_run(&tmp);
    let p = write(&out, "broken.json", "{\"words\": [");
    assert_eq!(status(&automart(&["verify", &p])), 2);
    assert_eq!(
        status(&automart(&["verify", "/nonexistent/certificate.json"])),
        2
    );
}

#[test]
fn growth_prints_class_and_slices() {
    let o = automart(&["growth", "builtin:0*|1*", "--max-len", "4"]);
    assert_eq!(status(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["class"]["class"], "BoundedSlices");
    assert_eq!(doc["class"]["bound"], 2);
    assert_eq!(doc["slices"], serde_json::json!(["1", "2", "2", "2", "2"]));
}

#[test]
fn audit_subcommand_writes_a_report() {
    let tmp = TempDir::new().unwrap();
    let o = automart(&[
        "audit",
        "subset-bettor",
        "builtin:(00)*",
        "outside",
        "--out-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("audit.json")).unwrap()).unwrap();
    assert_eq!(doc["passed"], Value::Bool(true));
    assert!(doc["setups"][0]["transitions_checked"].as_u64().unwrap() > 0);
    assert_eq!(
        status(&automart(&[
            "audit",
            "subset-bettor",
            "builtin:(00)*",
            "sideways"
        ])),
        2
    );
    assert_eq!(status(&automart(&["audit", "roulette"])), 2);
}
