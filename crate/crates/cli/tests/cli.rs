use std::path::Path;
use std::process::{Command, Output};

fn qsplit(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsplit"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QSPLIT_OUT")
        .output()
        .expect("binary runs")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).expect("report exists")
}

#[test]
fn run_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(&["run", "coherence_revival", "--param", "n=3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let txt = read(dir.path().join("coherence_revival.report.txt"));
    let line = txt.lines().find(|l| l.starts_with("quantity p_up_x ")).unwrap();
    assert!(line.contains("expected=1e0") && line.ends_with("pass=true"), "{line}");
    assert!(txt.contains("param n 3"));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path().join("coherence_revival.report.json"))).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["params"]["n"], 3);
}

#[test]
fn unknown_scenario_lists_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(&["run", "no_such_thing"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no_such_thing") && err.contains("coherence_revival") && err.contains("acceptance_suite"));
}

#[test]
fn unknown_and_invalid_parameters_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(&["run", "coherence_revival", "-p", "steps=4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"steps\""));
    let out = qsplit(&["run", "bell_recording", "-p", "basis_b=w"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("basis_b"));
    let out = qsplit(&["run", "coherence_revival", "-p", "n=13"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // One pair per round cannot beat a 1% error rate.
    let out = qsplit(&["run", "jsq_signaling", "-p", "n_pairs=1", "-p", "n_rounds=200"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("empirical_error_excess"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "scenario = \"bell_recording\"\nseed = 4\n[params]\nbasis_b = \"angles:1.1,0.3\"\nc1 = [0.6, 0.0]\nc2 = \"0,0.8\"\n",
    )
    .unwrap();
    let out = qsplit(&["run", "--config", cfg.to_str().unwrap(), "-p", "basis_b2=x", "--seed", "9"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let txt = read(dir.path().join("bell_recording.report.txt"));
    assert!(txt.contains("seed 9"));
    assert!(txt.contains("param basis_b \"angles:1.1,0.3\""));
    assert!(txt.contains("param basis_b2 \"x\""));
    assert!(txt.contains("param c2 [0.0,0.8]"));

    std::fs::write(&cfg, "scenario = \"bell_recording\"\ncolour = 1\n").unwrap();
    let out = qsplit(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = qsplit(&["run", "jsq_signaling", "--seed", "3", "-p", "n_rounds=300"], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["jsq_signaling.report.txt", "jsq_signaling.report.json"] {
        assert_eq!(std::fs::read(a.path().join(file)).unwrap(), std::fs::read(b.path().join(file)).unwrap());
    }
}

#[test]
fn every_scenario_runs_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(&["suite", "--exclude", "acceptance_suite"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 2 * 10);
}

#[test]
fn acceptance_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(&["run", "acceptance_suite", "-p", "criteria=1,2,6"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let txt = read(dir.path().join("acceptance_suite.report.txt"));
    assert_eq!(txt.lines().filter(|l| l.starts_with("quantity criterion_")).count(), 3);
    let out = qsplit(&["run", "acceptance_suite", "-p", "criteria=12"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_emits_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsplit(
        &["sweep-delta-plus", "-p", "method=closed_form", "-p", "n_s=3", "-p", "n_eta=2", "-p", "masses=0,1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let txt = read(dir.path().join("sweep_delta_plus.report.txt"));
    assert_eq!(txt.lines().filter(|l| l.starts_with("row kind=spacelike ")).count(), 12);
    let json: serde_json::Value = serde_json::from_str(&read(dir.path().join("sweep_delta_plus.report.json"))).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_qsplit"))
        .args(["run", "wigner_friend", "-p", "variant=3"])
        .env("QSPLIT_OUT", dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(dir.path().join("wigner_friend_3.report.json").exists());
}
