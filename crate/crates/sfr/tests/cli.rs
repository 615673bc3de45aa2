//! End-to-end tests of the `sfr` binary: flag plumbing, output formats, and
//! the exit-code contract (0 ok, 1 failed check/alert, 2 usage, 3 bad input).

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfr"))
}

fn write_corpus(dir: &tempfile::TempDir, name: &str, lines: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, lines).unwrap();
    path
}

#[test]
fn score_text_output_and_footer() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(
        &dir,
        "c.jsonl",
        concat!(
            "{\"id\":\"a\",\"lang\":\"hi\",\"hypothesis\":\"नमस्ते दुनिया\"}\n",
            "{\"id\":\"b\",\"lang\":\"hi\",\"hypothesis\":\"hello\"}\n",
            "{\"id\":\"c\",\"lang\":\"hi\",\"hypothesis\":\"...\"}\n",
        ),
    );
    let out = bin().arg("score").arg(&corpus).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("corpus: utterances=3 null=1 mean_sfr=0.5000 weighted_sfr=0.7059"));
    assert!(text.lines().any(|l| l.starts_with('c') && l.ends_with("null")));
}

#[test]
fn score_jsonl_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(
        &dir,
        "c.jsonl",
        "{\"id\":\"a\",\"lang\":\"bn\",\"hypothesis\":\"বাংলা\"}\n",
    );
    let out = bin()
        .args(["score", "--format", "jsonl"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["sfr"], 1.0);
    assert_eq!(lines[1]["corpus"]["null_count"], 0);
}

#[test]
fn unknown_language_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(&dir, "c.jsonl", "{\"lang\":\"xx\",\"hypothesis\":\"hi\"}\n");
    let out = bin().arg("score").arg(&corpus).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    // The error must list the known languages.
    for lang in ["ps", "ur", "hi", "bn", "ml", "so"] {
        assert!(err.contains(lang), "missing {lang} in: {err}");
    }
}

#[test]
fn malformed_jsonl_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(&dir, "c.jsonl", "{not json}\n");
    let out = bin().arg("score").arg(&corpus).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reports_wer_and_cer() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(
        &dir,
        "c.jsonl",
        "{\"id\":\"a\",\"lang\":\"hi\",\"hypothesis\":\"नमस्ते\",\"reference\":\"नमस्ते दुनिया\"}\n",
    );
    let out = bin()
        .args(["eval", "--format", "csv"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("utterance_id,sfr,wer,cer\n"));
    assert!(text.contains("a,1,0.5,"));
}

#[test]
fn report_builtin_matrix_text() {
    let out = bin().args(["report", "--builtin-matrix"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("collapse: 18/53 evaluated pairs below 10.0% (34.0%; 95% Wilson CI 23-47%)"));
    assert!(text.contains("threshold-insensitive interval: [7.2%, 13.0%] (gap 5.8 points)"));
    assert!(text.contains("bimodality: 18 below 10%, 5 intermediate, 30 above 90%"));
    // Recomputed means that disagree with the published table are called out.
    assert!(text.contains("note: whisper: recomputed mean SFR 50.9 differs from published 53.3"));
    assert!(text.contains("note: all: recomputed mean SFR 61.0 differs from published 62.9"));
}

#[test]
fn report_from_matrix_csv_and_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_corpus(
        &dir,
        "m.csv",
        "model,language,sfr,wer\nm-a,hi,99.0,20.0\nm-a,bn,2.0,150.0\n",
    );
    let scatter = dir.path().join("scatter.csv");
    let out = bin()
        .args(["report", "--matrix"])
        .arg(&matrix)
        .arg("--scatter")
        .arg(&scatter)
        .output()
        .unwrap();
    assert!(out.status.success());
    let scatter_text = std::fs::read_to_string(&scatter).unwrap();
    assert!(scatter_text.contains("m-a,hi,20,99,false,ideal"));
    assert!(scatter_text.contains("m-a,bn,150,2,true,script-collapse"));
}

#[test]
fn report_without_a_source_is_a_usage_error() {
    let out = bin().arg("report").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_stream_alerts_deterministically() {
    let run = || {
        let mut child = bin()
            .args([
                "audit",
                "--window",
                "4",
                "--min-fill",
                "4",
                "--no-timestamp",
                "--fail-on-alert",
            ])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        let mut stdin = child.stdin.take().unwrap();
        for _ in 0..8 {
            writeln!(stdin, "{{\"lang\":\"hi\",\"hypothesis\":\"hello\"}}").unwrap();
        }
        drop(stdin);
        child.wait_with_output().unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(1), "alert fired with --fail-on-alert");
    assert_eq!(first.stdout, second.stdout, "alert output must be deterministic");
    let alerts: Vec<serde_json::Value> = String::from_utf8(first.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0]["language"], "hi");
    assert_eq!(alerts[0]["window_mean"], 0.0);
    assert!(alerts[0].get("timestamp").is_none());
}

#[test]
fn audit_clean_stream_exits_zero() {
    let mut child = bin()
        .args(["audit", "--window", "4", "--min-fill", "4", "--fail-on-alert"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    for _ in 0..8 {
        writeln!(stdin, "{{\"lang\":\"hi\",\"hypothesis\":\"नमस्ते\"}}").unwrap();
    }
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_passes_on_builtins() {
    let out = bin().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("12 checks, 0 failures"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn scripts_override_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let scripts = dir.path().join("scripts.toml");
    std::fs::write(
        &scripts,
        concat!(
            "[el]\n",
            "script = \"Greek\"\n",
            "ranges = [\"0370-03FF\"]\n",
            "normalization = \"latin_lowercase\"\n",
        ),
    )
    .unwrap();
    let corpus = write_corpus(
        &dir,
        "c.jsonl",
        "{\"id\":\"g\",\"lang\":\"el\",\"hypothesis\":\"γειά σου\"}\n",
    );
    let out = bin()
        .args(["score", "--format", "csv"])
        .arg(&corpus)
        .arg("--scripts")
        .arg(&scripts)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("g,7,7,1"));
}

#[test]
fn taxonomy_groups_by_model() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(
        &dir,
        "c.jsonl",
        concat!(
            "{\"id\":\"a\",\"lang\":\"hi\",\"model\":\"m1\",\"hypothesis\":\"नमस्ते\"}\n",
            "{\"id\":\"b\",\"lang\":\"hi\",\"model\":\"m1\",\"hypothesis\":\"hello there\"}\n",
            "{\"id\":\"c\",\"lang\":\"hi\",\"model\":\"m2\",\"hypothesis\":\"সালাম\"}\n",
        ),
    );
    let out = bin()
        .args(["taxonomy", "--format", "csv"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("m1,2,1,0,1,0,50,0,50,0"));
    assert!(text.contains("m2,1,0,0,0,1,0,0,0,100"));
}
