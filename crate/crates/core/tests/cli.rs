//! The binary's exit codes and its schema-stable JSON output.

use std::path::PathBuf;
use std::process::Command;

use periodlab::cli::{run_classify, run_conjecture_sweep, ClassifyOptions};
use periodlab::distinction::Verdict;

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn periodlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_periodlab"))
        .args(args)
        .env_remove("PERIODLAB_CATALOG")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn classify_json_matches_golden() {
    let (code, stdout) = periodlab(&["--json", "classify", "St(3,q8)", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, golden("classify_st3_q8.json"));
    let report = run_classify("St(3,q8)", None, ClassifyOptions { oracle: true });
    assert_eq!(format!("{}\n", report.to_json()), stdout);
}

#[test]
fn parse_error_json_matches_golden() {
    let (code, stdout) = periodlab(&["--json", "classify", "St(2 q8)"]);
    assert_eq!(code, 2);
    assert_eq!(stdout, golden("classify_parse_error.json"));
}

#[test]
fn exit_codes() {
    assert_eq!(periodlab(&["classify", "St(2,q8)"]).0, 1);
    assert_eq!(periodlab(&["classify", "chi3 (+) chi3bar", "--oracle"]).0, 1);
    assert_eq!(periodlab(&["--catalog", "/nonexistent.toml", "classify", "q8"]).0, 3);
    assert_eq!(periodlab(&["verify-matrices", "--max-n", "3", "--max-k", "4"]).0, 0);
}

#[test]
fn user_catalog_from_file() {
    let dir = std::env::temp_dir().join(format!("periodlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.toml");
    std::fs::write(
        &path,
        "[cuspidal.rho]\ndim = 2\ntype = \"symplectic\"\nmodel = \"q8\"\n",
    )
    .unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(
        periodlab(&["--catalog", path, "classify", "St(3,rho)", "--oracle"]).0,
        0
    );
    let (code, stdout) = periodlab(&["--catalog", path, "classify", "q8"]);
    assert_eq!(code, 2, "{stdout}");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "[cuspidal.rho]\ndim = 2\ntype = \"orthogonal\"\nmodel = \"q8\"\n").unwrap();
    let (code, stdout) = periodlab(&["--catalog", bad.to_str().unwrap(), "classify", "rho"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("1:1"), "{stdout}");
}

#[test]
fn sweep_rejects_every_control() {
    let report = run_conjecture_sweep(None, 8);
    assert_eq!(report.exit_code, 0);
    assert_eq!(report.oracle_agreement, Some(true));
    let controls: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("control."))
        .collect();
    for kind in ["duplicate", "orthogonal", "dual_pair"] {
        assert!(
            controls.iter().any(|c| c.name.starts_with(&format!("control.{kind}["))),
            "{kind}"
        );
    }
    assert!(controls.iter().all(|c| c.verdict == Verdict::Pass));
    assert!(controls.iter().any(|c| c.name == "control.dual_pair[chi3 (+) chi3bar]"));
}
