use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn segtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segtop")).args(args).output().expect("segtop runs")
}

fn on(file: &str, args: &[&str]) -> Output {
    let path = corpus(file);
    let mut all = vec!["--workspace", path.to_str().unwrap()];
    all.extend_from_slice(args);
    segtop(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

const CORPUS: [&str; 5] = ["finset.json", "c2-sets.json", "s3-sets.json", "sierpinski.json", "nerves.json"];

#[test]
fn every_corpus_file_validates() {
    for f in CORPUS {
        let o = on(f, &["validate"]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn declared_checks_hold() {
    for f in ["finset.json", "c2-sets.json", "sierpinski.json", "nerves.json"] {
        let o = on(f, &["run"]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn s3_natural_action_to_the_point_is_univalent_and_not_mono() {
    let o = on("s3-sets.json", &["--json", "check-univalent", "natural-to-point"]);
    let r = &json(&o)["result"]["report"];
    assert_eq!(r["mono"], false);
    assert_eq!(r["univalent"], true, "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn four_univalent_finite_set_maps() {
    let o = on("finset.json", &["--json", "enumerate-univalent", "--max-size", "2", "--expect-count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["count"], 4);
}

#[test]
fn broken_nerve_names_the_failed_identity() {
    let o = on("nerves.json", &["check-segal", "broken-z3-nerve"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("d1d2 = d1d1 on X3"), "{}", stdout(&o));
    let o = on("nerves.json", &["check-segal", "broken-z3-nerve", "--expect", "false"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn completeness_of_nerves() {
    assert_eq!(on("nerves.json", &["check-complete", "chain2"]).status.code(), Some(0));
    let o = on("nerves.json", &["--json", "check-complete", "walking-iso"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["equivalences"], serde_json::json!([4]));
}

#[test]
fn reports_do_not_depend_on_parallelism() {
    let runs: Vec<Vec<u8>> = ["1", "4", "1"]
        .iter()
        .map(|p| on("finset.json", &["--json", "--parallel", p, "poset", "--max-size", "2"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    let runs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|p| on("c2-sets.json", &["--parallel", p, "enumerate-univalent", "--max-size", "2"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn classification_and_nerve_commands() {
    let o = on("sierpinski.json", &["--json", "classify", "true"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["univalent"], true);
    let o = on("finset.json", &["--json", "nerve", "one-into-two"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["levels"].as_array().unwrap().len(), 4);
    assert_eq!(on("finset.json", &["classify", "ab-to-one"]).status.code(), Some(2));
}

#[test]
fn errors_carry_positions_and_names() {
    let dir = std::env::temp_dir().join(format!("segtop-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"version\": 1,\n  \"index\": finset\n}\n").unwrap();
    let o = segtop(&["--workspace", bad.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let unresolved = dir.join("unresolved.json");
    std::fs::write(
        &unresolved,
        r#"{"version": 1, "index": "finset", "presheaves": {"a": {"set": ["x"]}},
            "maps": {"f": {"dom": "a", "cod": "b", "map": []}}}"#,
    )
    .unwrap();
    let o = segtop(&["--workspace", unresolved.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no presheaf named b"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn resource_bound_is_reported() {
    let o = on("s3-sets.json", &["--bound", "100", "check-univalent", "natural-to-point"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource bound"));
}
