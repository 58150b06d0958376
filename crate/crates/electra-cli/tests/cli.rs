//! End-to-end checks of the CLI surface: formats, error records, and the
//! documented subcommand behaviors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn electra(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_electra"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn files_in(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

const GOOD: &str = "3\n1,red\n2,green\n3,blue\n3,3,2\n2: 1,2,3\n1: 3,2,1\n";
const INCOMPLETE: &str = "3\n1,a\n2,b\n3,c\n3,3,3\n1: 1,2,3\n1: 1,2\n1: 1\n";

#[test]
fn validate_accepts_good_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("good.soc"), GOOD).unwrap();
    let out = electra(&["validate", "good.soc"], dir.path());
    assert!(out.status.success(), "{out:?}");

    fs::write(dir.path().join("bad.soc"), "2\n1,a\n2,b\n1,1,1\n1: 1,1\n").unwrap();
    let out = electra(&["validate", "bad.soc"], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    let record: serde_json::Value = serde_json::from_str(stderr.lines().next().unwrap()).unwrap();
    assert_eq!(record["file"], "bad.soc");
    assert!(record["error"].as_str().unwrap().contains("duplicate candidate in vote"));
}

#[test]
fn validate_break_ties_flag_linearizes_groups() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tied.toc"), "3\n1,a\n2,b\n3,c\n1,1,1\n1: 1,{2,3}\n").unwrap();
    let strict = electra(&["validate", "tied.toc"], dir.path());
    assert!(!strict.status.success());
    let relaxed = electra(&["validate", "--break-ties", "tied.toc"], dir.path());
    assert!(relaxed.status.success(), "{relaxed:?}");
}

#[test]
fn stats_json_has_summary_fields() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("good.soc"), GOOD).unwrap();
    let out = electra(&["stats", "good.soc", "--json"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let record: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(record["file"], "good");
    assert_eq!(record["m"], 3);
    assert_eq!(record["n"], 3);
    assert_eq!(record["summary"]["max_kt"], 3);
    assert_eq!(record["summary"]["kemeny_score"], 3);
    assert_eq!(record["budget"]["two_pow_m"]["display"], "8");
}

#[test]
fn complete_subcommand_outputs_a_complete_election() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("partial.soi"), INCOMPLETE).unwrap();
    let out = electra(
        &["complete", "--effort", "8", "--seed", "3", "partial.soi", "full.soc"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(dir.path().join("full.soc")).unwrap();
    let election = electra::election::parse_election(&text).unwrap();
    assert!(election.is_complete());
    // Optimum biclique keeps voters {0,1} and candidates {a,b}.
    assert_eq!(election.num_voters() * election.num_candidates(), 4);
}

#[test]
fn rules_on_identity_directory_has_full_winner_consensus() {
    let dir = tempfile::tempdir().unwrap();
    let sampled = dir.path().join("ident");
    let out = electra(
        &[
            "sample", "--culture", "identity", "-m", "6", "-n", "9", "--count", "5", "--seed",
            "21", "--out", "ident",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    assert_eq!(files_in(&sampled).len(), 5);

    let out = electra(&["rules", "ident", "--pairwise"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines().filter(|l| l.starts_with("consensus,")) {
        let cols: Vec<&str> = line.split(',').collect();
        let measure = cols[1];
        let value: f64 = cols[4].parse().unwrap();
        if measure != "spearman" {
            assert_eq!(value, 1.0, "{line}");
        }
    }
}

#[test]
fn map_emits_points_with_tags_and_compass() {
    let dir = tempfile::tempdir().unwrap();
    let out = electra(
        &[
            "sample", "--culture", "impartial", "-m", "6", "-n", "8", "--count", "3", "--seed",
            "5", "--out", "data",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = electra(
        &["map", "data", "--compass", "--iterations", "200", "--seed", "1", "--out", "pts.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(dir.path().join("pts.csv")).unwrap();
    assert!(text.starts_with("id,x,y,dataset_tag\n"));
    assert!(text.contains(",data\n") || text.contains(",data\r\n"));
    assert!(text.lines().any(|l| l.starts_with("identity,")));
    assert!(text.lines().any(|l| l.starts_with("path_identity_uniformity_0.5,")));
}

#[test]
fn distances_matrix_is_square_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.soc"), GOOD).unwrap();
    fs::write(dir.path().join("b.soc"), GOOD).unwrap();
    let out = electra(
        &["distances", "a.soc", "b.soc", "--out", "d.csv", "--groups-out", "g.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "label,a,b");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("a,0,"));
    let groups = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(groups.starts_with("tag_a,tag_b,avg_distance\n"));
}

#[test]
fn domains_json_reports_membership_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ident.soc"), "2\n1,a\n2,b\n2,2,1\n2: 1,2\n").unwrap();
    let out = electra(&["domains", "ident.soc", "--distances", "--json"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rec: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(rec["single_peaked"], true);
    assert!(rec["axis"].is_array());
    assert_eq!(rec["single_crossing"], true);
    assert_eq!(rec["group_separable"], true);
    assert_eq!(rec["value_restricted"], true);
    assert!(rec["distances"].as_array().unwrap().iter().all(|d| d["k"] == 0));
}

#[test]
fn venn_csv_counts_sum_to_election_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = electra(
        &[
            "sample", "--culture", "impartial", "-m", "5", "-n", "5", "--count", "4", "--seed",
            "9", "--out", "v",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = electra(&["venn", "v", "--max-budget", "2"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut per_key: std::collections::BTreeMap<(String, String), u64> = Default::default();
    for line in stdout.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split(',').collect();
        *per_key
            .entry((cols[0].to_string(), cols[1].to_string()))
            .or_default() += cols[3].parse::<u64>().unwrap();
    }
    assert!(per_key.values().all(|&total| total == 4));
}

#[test]
fn timeseries_emits_original_and_shuffled_rows() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.soc"), GOOD).unwrap();
    let out = electra(
        &["timeseries", "t.soc", "--shuffle-baseline", "--seed", "4"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("t,original,"));
    assert!(lines[2].starts_with("t,shuffled,"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = electra(
        &[
            "sample", "--culture", "impartial", "-m", "8", "-n", "10", "--count", "6", "--seed",
            "33", "--out", "data",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let one = electra(&["stats", "data", "--jobs", "1"], dir.path());
    let four = electra(&["stats", "data", "--jobs", "4"], dir.path());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn normalize_produces_fixed_shape_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = electra(
        &[
            "sample", "--culture", "impartial", "-m", "18", "-n", "11", "--count", "2", "--seed",
            "2", "--out", "raw",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = electra(
        &[
            "normalize", "raw", "-m", "15", "-n", "30", "--count", "3", "--seed", "6", "--out",
            "norm",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let files = files_in(&dir.path().join("norm"));
    assert_eq!(files.len(), 3);
    for f in files {
        let e = electra::election::parse_election(&fs::read_to_string(f).unwrap()).unwrap();
        assert_eq!(e.num_candidates(), 15);
        assert_eq!(e.num_voters(), 30);
        assert!(e.is_complete());
    }
}
