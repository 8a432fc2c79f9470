use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use endokalc::cli::schema::{document_of, parse_document};
use endokalc::cli::SEED_ENV;
use endokalc::Error;

const BIN: &str = env!("CARGO_BIN_EXE_endokalc");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove(SEED_ENV).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const FILES: [&str; 4] = ["minimal.json", "chain.json", "adams.json", "localized.json"];

#[test]
fn sample_outputs() {
    let v = json(&["bounds", "ns", "--s", "2"]);
    assert_eq!(v["n_s"], 24);
    assert_eq!(v["oracle_agrees"], true);
    assert!(stdout(&run(&["bounds", "ns", "--s", "2"])).starts_with("N_2 = 24\n"));

    let v = json(&["fixtures", "sl1", "--p", "3"]);
    assert_eq!(v["degenerate_derivative"], 3);
    assert_eq!(v["ck_mismatches"], serde_json::json!([]));

    let v = json(&["chern", "verify", "--rank", "2", "--trunc", "8"]);
    assert_eq!(v["duality"]["total_class_matches"], true);
    assert_eq!(v["duality"]["whitney_splits"], serde_json::json!([[1, 1]]));

    assert_eq!(json(&["bounds", "bott", "--i", "0"])["bound"], 2);
    assert_eq!(json(&["bounds", "euler", "--d", "2", "--p", "3"])["bound"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bounds", "ns", "--s", "4"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "ns", "--s", "0"]).status.code(), Some(2));
    assert_eq!(run(&["chern", "verify", "--rank", "2", "--trunc", "3"]).status.code(), Some(2));
    assert_eq!(run(&["endo", "report", "/nonexistent/file.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data("adams.json")).unwrap().replace("[0, [1, 2]]", "[0, 1]");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["adams", "check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert_eq!(run(&["adams", "check", data("adams.json").to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn reports_on_data_files() {
    for f in FILES {
        let path = data(f);
        let p = path.to_str().unwrap();
        for cmd in [vec!["endo", "report", p], vec!["endo", "classify", p], vec!["endo", "props", p]] {
            let o = run(&cmd);
            assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
        }
        let v = json(&["endo", "derive", p, "--s", "1"]);
        assert_eq!(v["s"], 1);
    }
    let v = json(&["adams", "sigma", data("adams.json").to_str().unwrap()]);
    assert_eq!(v["k"], 2);
}

#[test]
fn json_output_is_deterministic() {
    let chain = data("chain.json");
    for args in [
        vec!["--format", "json", "endo", "props", "--random", "5"],
        vec!["--format", "json", "fixtures", "bso", "--n", "3"],
        vec!["--format", "json", "endo", "report", chain.to_str().unwrap()],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_environment_overrides_flag() {
    let args = ["--format", "json", "--seed", "5", "endo", "props", "--random", "4"];
    let by_flag = run(&args).stdout;
    let by_env = Command::new(BIN)
        .args(["--format", "json", "--seed", "99", "endo", "props", "--random", "4"])
        .env(SEED_ENV, "5")
        .output()
        .unwrap();
    assert_eq!(by_flag, by_env.stdout);
    let default = run(&["--format", "json", "endo", "props", "--random", "4"]).stdout;
    assert_ne!(by_flag, default);
    let bad = Command::new(BIN).args(["endo", "props", "--random", "1"]).env(SEED_ENV, "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["--format", "json", "--out", out.to_str().unwrap(), "bounds", "ns", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["n_s"], 24);
}

#[test]
fn documents_round_trip() {
    for f in FILES {
        let text = std::fs::read_to_string(data(f)).unwrap();
        let doc = parse_document(&text).unwrap();
        let written = document_of(&doc);
        let again = parse_document(&written.to_string()).unwrap();
        assert_eq!(doc.endo.table(), again.endo.table(), "{f}");
        assert_eq!(written, document_of(&again), "{f}");
        assert_eq!(doc.adams.is_some(), again.adams.is_some());
        if let (Some(a), Some(b)) = (&doc.adams, &again.adams) {
            assert_eq!(a.k(), b.k());
            for (p, q) in a.psi_maps().iter().zip(b.psi_maps()) {
                assert!(p.equals(q));
            }
        }
    }
}

#[test]
fn shape_errors_name_the_location() {
    let text = std::fs::read_to_string(data("chain.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["maps"][0]["matrix"] = serde_json::json!([[1, 2, 3]]);
    match parse_document(&v.to_string()) {
        Err(Error::ParseError { location, message }) => {
            assert_eq!(location, "/maps/0/matrix");
            assert!(message.contains("map from 0"), "{message}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shape.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = run(&["endo", "report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/maps/0/matrix"));

    let mut missing = serde_json::from_str::<serde_json::Value>(&text).unwrap();
    missing["modules"].as_array_mut().unwrap().pop();
    assert!(matches!(parse_document(&missing.to_string()), Err(Error::ParseError { .. })));
}
