//! Acceptance: the full pipeline run twice with identical seeds produces
//! byte-identical outputs within the time budget.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

fn run(args: &[&str], dir: &Path) {
    let out = Command::new(env!("CARGO_BIN_EXE_electra"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "electra {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

/// sample -> normalize -> stats/map/domains/rules, all into `dir`.
fn pipeline(dir: &Path) {
    run(
        &[
            "sample", "--culture", "walsh_sp", "-m", "20", "-n", "24", "--count", "6", "--seed",
            "11", "--out", "raw",
        ],
        dir,
    );
    run(
        &[
            "normalize", "raw", "-m", "15", "-n", "30", "--count", "6", "--seed", "13", "--out",
            "norm",
        ],
        dir,
    );
    run(&["stats", "norm", "--json", "--out", "stats.jsonl"], dir);
    run(
        &[
            "map", "norm", "--compass", "--iterations", "400", "--seed", "17", "--out",
            "points.csv",
        ],
        dir,
    );
    run(
        &[
            "domains", "norm", "--distances", "--max-budget", "2", "--json", "--out",
            "domains.jsonl",
        ],
        dir,
    );
    run(&["rules", "norm", "--pairwise", "--csv", "--out", "rules.csv"], dir);
}

fn snapshot(dir: &Path, into: &mut Vec<(String, Vec<u8>)>, root: &Path) {
    let mut entries: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        if path.is_dir() {
            snapshot(&path, into, root);
        } else {
            let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
            into.push((rel, fs::read(&path).unwrap()));
        }
    }
}

#[test]
fn criterion_11_end_to_end_determinism() {
    let start = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    pipeline(a.path());
    pipeline(b.path());

    let mut fa = Vec::new();
    let mut fb = Vec::new();
    snapshot(a.path(), &mut fa, a.path());
    snapshot(b.path(), &mut fb, b.path());
    assert!(!fa.is_empty());
    assert_eq!(
        fa.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        fb.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "file sets differ"
    );
    for ((name, bytes_a), (_, bytes_b)) in fa.iter().zip(&fb) {
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "pipeline took {elapsed:?}");
    println!(
        "[PASS] criterion 11: pipeline byte-identical across runs ({} files) in {elapsed:?}",
        fa.len()
    );
}
