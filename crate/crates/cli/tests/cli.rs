use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stirlab(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirlab"))
        .env("STIRLAB_CACHE", cache)
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = stirlab(args, dir.path());
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn stdout(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn rules_file(dir: &Path, text: &str) -> String {
    let path = dir.join("rules.txt");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn files_in(dir: &Path) -> usize {
    fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn enumerate_lists_objects() {
    assert_eq!(
        stdout(&["enumerate", "--class", "stirling", "--n", "2"]),
        "1122\n1221\n2211\n"
    );
    assert_eq!(stdout(&["enumerate", "--class", "stirling", "--n", "1"]), "11\n");
    assert_eq!(
        stdout(&["enumerate", "--class", "matching", "--n", "2"])
            .lines()
            .count(),
        3
    );
    let signed = stdout(&["enumerate", "--class", "signed", "--n", "2"]);
    assert_eq!(signed.lines().count(), 8);
    assert!(signed.lines().any(|l| l.starts_with('-')));
}

#[test]
fn enumerate_respects_the_bound() {
    let (code, out, err) = run(&["enumerate", "--class", "stirling", "--n", "9"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("stirlab: "), "{err}");
    assert_eq!(
        stdout(&["--bound", "3", "enumerate", "--class", "stirling", "--n", "3"])
            .lines()
            .count(),
        15
    );
    assert_eq!(
        run(&["--bound", "3", "enumerate", "--class", "stirling", "--n", "4"]).0,
        2
    );
}

#[test]
fn stats_distributions() {
    assert_eq!(
        stdout(&["stats", "--class", "stirling", "--n", "2", "--stats", "fap"]),
        "{1:1,2:1,3:1}\n"
    );
    assert_eq!(
        stdout(&["stats", "--class", "signed", "--n", "1", "--stats", "fdes"]),
        "{0:1,1:1}\n"
    );
    let p3 = stdout(&["stats", "--class", "stirling", "--n", "3", "--stats", "lap,dasc,dp"]);
    for entry in [
        "(1,2,0):1",
        "(1,0,2):1",
        "(2,1,0):4",
        "(2,0,1):4",
        "(1,1,1):2",
        "(2,0,0):2",
        "(3,0,0):1",
    ] {
        assert!(p3.contains(entry), "{entry} missing from {p3}");
    }
    assert_eq!(
        run(&["stats", "--class", "stirling", "--n", "2", "--stats", "fdes"]).0,
        2
    );
}

#[test]
fn stats_csv_and_json() {
    let csv = stdout(&[
        "--format", "csv", "stats", "--class", "stirling", "--n", "2", "--stats", "lap,dp",
    ]);
    assert_eq!(csv, "lap,dp,count\n1,0,1\n1,1,1\n2,0,1\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format", "json", "stats", "--class", "signed", "--n", "1", "--stats", "fdes",
    ]))
    .unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
    assert_eq!(json["rows"][1]["values"][0], 1);
}

#[test]
fn poly_families() {
    assert_eq!(stdout(&["poly", "--name", "T", "--n", "2"]), "x + x^2 + x^3\n");
    assert_eq!(stdout(&["poly", "--name", "N", "--n", "0"]), "1\n");
    assert_eq!(
        stdout(&["poly", "--name", "G", "--n", "3"]),
        "2*x^2 + x^3 + 4*x^2*y + x*y^2\n"
    );
    assert_eq!(stdout(&["poly", "--name", "P", "--n", "2"]), "x^2 + x*y + x*z\n");
    assert_eq!(run(&["poly", "--name", "Q", "--n", "2"]).0, 2);
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "poly", "--name", "T", "--n", "2"])).unwrap();
    assert_eq!(json["poly"]["coeffs"], serde_json::json!(["0", "1", "1", "1"]));
}

#[test]
fn grammar_derivations() {
    let dir = tempfile::tempdir().unwrap();
    let flag = rules_file(dir.path(), "x -> x*y*z; y -> y*z^2; z -> y^2*z");
    assert_eq!(
        stdout(&["grammar", "--rules", &flag, "--start", "x*y"]),
        "x*y^2*z + x*y*z^2\n"
    );

    let uvw = rules_file(dir.path(), "u -> u*v*w; v -> 2*u*w; w -> u*w");
    assert_eq!(
        stdout(&["grammar", "--rules", &uvw, "--start", "w", "--order", "0"]),
        "w\n"
    );

    let lap = rules_file(dir.path(), "x -> x*z*q; y -> y*z*p; z -> x*y*z; p -> x*y*z; q -> x*y*z");
    assert_eq!(
        stdout(&["grammar", "--rules", &lap, "--start", "z", "--order", "2"]),
        "p*x*y*z^2 + q*x*y*z^2 + x^2*y^2*z\n"
    );

    let broken = rules_file(dir.path(), "x -> ");
    assert_eq!(run(&["grammar", "--rules", &broken, "--start", "x"]).0, 2);
    assert_eq!(run(&["grammar", "--rules", "/no/such/file", "--start", "x"]).0, 2);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "--identity", "gamma-eulerian", "--max-n", "7"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS gamma-eulerian"), "{out}");
    let (code, _, err) = run(&["verify", "--identity", "no-such"]);
    assert_eq!(code, 2);
    assert!(err.contains("no-such"), "{err}");
    assert_eq!(run(&["verify", "--identity", "gamma-eulerian", "--max-n", "9"]).0, 2);
    assert_eq!(run(&["verify"]).0, 2);
}

#[test]
fn verify_all_report() {
    let (code, out, _) = run(&["verify", "--all", "--max-n", "5"]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    assert!(last.ends_with("identities hold"), "{last}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format", "json", "verify", "--all", "--max-n", "4", "--scope", "tables",
    ]))
    .unwrap();
    let results = json.as_array().unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r["pass"] == true));
}

#[test]
fn output_is_byte_stable() {
    let args = ["stats", "--class", "stirling", "--n", "5", "--stats", "lap,dasc,dp"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["--jobs", "2", "enumerate", "--class", "signed", "--n", "4"];
    assert_eq!(stdout(&args), stdout(&args[2..]));
}

#[test]
fn cache_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = stirlab(
        &[
            "--cache-dir",
            flag_dir.path().to_str().unwrap(),
            "poly",
            "--name",
            "T",
            "--n",
            "4",
        ],
        env_dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(files_in(env_dir.path()), 0);
    assert!(files_in(flag_dir.path()) > 0);

    let out = stirlab(&["poly", "--name", "T", "--n", "4"], env_dir.path());
    assert!(out.status.success());
    assert!(files_in(env_dir.path()) > 0);
}
