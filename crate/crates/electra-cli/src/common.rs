//! Shared CLI plumbing: input collection, parallel parsing, error records,
//! and output helpers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use electra::election::{parse_election_with_ties, Election, TieBreak};

/// Machine-readable error record printed to stderr, one JSON object per
/// line.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub file: String,
    pub error: String,
}

pub fn report_error(file: &Path, error: impl std::fmt::Display) {
    let record = ErrorRecord {
        file: file.display().to_string(),
        error: error.to_string(),
    };
    eprintln!("{}", serde_json::to_string(&record).expect("serializable record"));
}

/// Builds the rayon pool honoring `--jobs` with the `ELECTRA_JOBS`
/// environment variable as fallback.
pub fn thread_pool(jobs: Option<usize>) -> rayon::ThreadPool {
    let jobs = jobs
        .or_else(|| std::env::var("ELECTRA_JOBS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

/// One parsed input file.
pub struct Input {
    pub path: PathBuf,
    /// File stem used as the election id in outputs.
    pub id: String,
    /// Parent directory name, used as the dataset tag.
    pub tag: String,
    pub election: Election,
}

const ELECTION_EXTENSIONS: [&str; 4] = ["soc", "soi", "toc", "toi"];

/// Expands directories to the election files they contain (by extension).
fn collect_files(paths: &[PathBuf]) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            if let Ok(entries) = fs::read_dir(path) {
                for entry in entries.flatten() {
                    let p = entry.path();
                    let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
                    if p.is_file() && ELECTION_EXTENSIONS.contains(&ext) {
                        files.push(p);
                    }
                }
            }
        } else {
            files.push(path.clone());
        }
    }
    files
}

/// Reads and parses all files in deterministic (sorted-path) order, in
/// parallel. Directories expand to the election files inside them. Parse
/// failures become stderr records; returns `None` when any file failed.
pub fn read_elections(paths: &[PathBuf], pool: &rayon::ThreadPool, tie_break: TieBreak) -> Option<Vec<Input>> {
    let mut sorted: Vec<PathBuf> = collect_files(paths);
    sorted.sort();
    let results: Vec<Result<Input, (PathBuf, String)>> = pool.install(|| {
        sorted
            .par_iter()
            .map(|path| {
                let text = fs::read_to_string(path).map_err(|e| (path.clone(), e.to_string()))?;
                let election = parse_election_with_ties(&text, tie_break)
                    .map_err(|e| (path.clone(), e.to_string()))?;
                Ok(Input {
                    id: path.file_stem().map_or_else(
                        || path.display().to_string(),
                        |s| s.to_string_lossy().into_owned(),
                    ),
                    tag: path
                        .parent()
                        .and_then(Path::file_name)
                        .map_or_else(|| "-".to_string(), |s| s.to_string_lossy().into_owned()),
                    path: path.clone(),
                    election,
                })
            })
            .collect()
    });
    let mut inputs = Vec::with_capacity(results.len());
    let mut failed = false;
    for r in results {
        match r {
            Ok(input) => inputs.push(input),
            Err((path, error)) => {
                report_error(&path, error);
                failed = true;
            }
        }
    }
    if failed {
        None
    } else {
        Some(inputs)
    }
}

/// Writes to the given path, or to stdout when no path is given.
pub fn write_output(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(path, content)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

/// Formats a float for CSV output: `.` decimal separator, shortest
/// round-trip representation.
pub fn csv_f64(x: f64) -> String {
    format!("{x}")
}
