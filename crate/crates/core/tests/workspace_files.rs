use std::path::PathBuf;

use segal_topos::io::{to_canonical_string, Workspace};
use segal_topos::DEFAULT_BOUND;

fn bundled() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.display().to_string(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn bundled_workspaces_load_and_reserialize_stably() {
    let files = bundled();
    assert!(files.len() >= 5);
    for (name, text) in files {
        let ws = Workspace::from_str(&text, DEFAULT_BOUND).unwrap_or_else(|e| panic!("{name}: {e}"));
        let canon = to_canonical_string(&ws.to_json());
        let again = Workspace::from_str(&canon, DEFAULT_BOUND).unwrap();
        assert_eq!(to_canonical_string(&again.to_json()), canon, "{name}");
        assert_eq!(again.checks, ws.checks, "{name}");
    }
}

#[test]
fn bundled_checks_evaluate_deterministically() {
    for (name, text) in bundled() {
        let ws = Workspace::from_str(&text, DEFAULT_BOUND).unwrap();
        for (check, c) in &ws.checks {
            assert_eq!(ws.evaluate(c), ws.evaluate(c), "{name} {check}");
        }
    }
}
