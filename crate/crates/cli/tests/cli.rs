use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mpemba_cli::config::{ExperimentConfig, RunConfig};
use mpemba_cli::Experiment;

fn mpemba(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpemba"))
        .args(args)
        .env("MPEMBA_THREADS", threads)
        .output()
        .unwrap()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let run_a = mpemba(&["coherence-rr", "--out", a.to_str().unwrap()], "1");
    let run_b = mpemba(&["coherence-rr", "--out", b.to_str().unwrap()], "3");
    assert!(
        run_a.status.success(),
        "{}",
        String::from_utf8_lossy(&run_a.stderr)
    );
    assert!(run_b.status.success());
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "coherence_rr_config.json",
            "coherence_rr_setup1.csv",
            "coherence_rr_setup2.csv",
            "coherence_rr_verdict.json"
        ]
    );
    assert_eq!(fa, fb);
}

#[test]
fn csv_header_and_config_echo() {
    let tmp = tempfile::tempdir().unwrap();
    let out = mpemba(
        &[
            "coherence-rr",
            "--out",
            tmp.path().to_str().unwrap(),
            "--seed",
            "11",
        ],
        "1",
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("coherence_rr_setup1.csv")).unwrap();
    let mut lines = csv.lines();
    let meta = lines.next().unwrap();
    assert!(
        meta.starts_with(
            "# format=trajectory-pair version=1 experiment=coherence-rr config_sha256="
        ),
        "{meta}"
    );
    assert!(meta.ends_with(" seed=11"));
    assert_eq!(lines.next().unwrap(), "t,value_a,value_b,steady");

    // The echoed config reproduces the run and hashes to the recorded digest.
    let echoed = RunConfig::load(&tmp.path().join("coherence_rr_config.json")).unwrap();
    assert_eq!(echoed.seed, 11);
    assert!(meta.contains(&echoed.hash()));
    let verdict: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("coherence_rr_verdict.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(verdict["format"], "mpemba-verdict");
    assert_eq!(verdict["passed"], true);
    assert_eq!(verdict["verdict"]["reversed"], true);
}

#[test]
fn check_mode_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("never");
    let out = mpemba(
        &["spectrum-dump", "--check", "--out", dir.to_str().unwrap()],
        "1",
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok   model: bi-orthogonality"));
    assert!(!dir.exists());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"version": 1}"#).unwrap();
    assert_eq!(
        mpemba(
            &[
                "spectrum-dump",
                "--config",
                bad.to_str().unwrap(),
                "--check"
            ],
            "1"
        )
        .status
        .code(),
        Some(2)
    );

    let mut cfg = RunConfig::default_for(Experiment::SpectrumDump);
    let wrong = tmp.path().join("wrong.json");
    fs::write(&wrong, cfg.to_json()).unwrap();
    assert_eq!(
        mpemba(
            &["trace-rr", "--config", wrong.to_str().unwrap(), "--check"],
            "1"
        )
        .status
        .code(),
        Some(2)
    );

    // Zero coupling leaves a degenerate spectrum, which is a failed check.
    if let ExperimentConfig::SpectrumDump(ref mut s) = cfg.experiment {
        if let mpemba_cli::config::ModelSpec::Single(ref mut p) = s.model {
            p.coupling = 0.0;
        }
    }
    let degenerate = tmp.path().join("degenerate.json");
    fs::write(&degenerate, cfg.to_json()).unwrap();
    let out = mpemba(
        &[
            "spectrum-dump",
            "--config",
            degenerate.to_str().unwrap(),
            "--check",
        ],
        "1",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL model: non-degenerate spectrum"));
}

#[test]
fn default_config_round_trips() {
    for e in Experiment::ALL {
        let out = mpemba(&["default-config", e.name()], "1");
        assert!(out.status.success());
        let cfg = RunConfig::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(cfg, RunConfig::default_for(e));
    }
    assert_eq!(
        mpemba(&["default-config", "nope"], "1").status.code(),
        Some(2)
    );
}
