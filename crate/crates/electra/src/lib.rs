//! Election analysis toolkit.
//!
//! The crate covers the full pipeline for studying collections of
//! preference profiles:
//!
//! - [`election`]: the data model, PrefLib-style parsing/serialization,
//!   restriction, and frequency matrices;
//! - [`preprocess`]: completing incomplete elections via the
//!   maximum-edge-biclique reduction and drawing normalized samples;
//! - [`metrics`]: Kendall tau machinery, similarity summaries, an exact
//!   Kemeny solver, correlations, part intersections, and temporal measures;
//! - [`mapel`]: the positionwise distance, compass elections, distance
//!   matrices, and the 2-D map embedding;
//! - [`domains`]: recognition of single-peaked, single-crossing,
//!   group-separable, and value-restricted elections, forbidden
//!   configurations, and exact deletion distances;
//! - [`rules`]: voting rules, Condorcet analysis, and consensus measures;
//! - [`cultures`]: synthetic election samplers.
//!
//! ```
//! use electra::election::Election;
//! use electra::metrics::similarity_summary;
//! use electra::rules::{apply_rule, Rule};
//!
//! let e = Election::complete(vec![vec![0, 1, 2], vec![0, 1, 2], vec![1, 0, 2]])?;
//! let summary = similarity_summary(&e)?;
//! assert_eq!(summary.kemeny_score, 1);
//!
//! let outcome = apply_rule(&e, Rule::Borda)?;
//! assert_eq!(outcome.lex_winner, 0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

// Candidate/voter pair loops keep explicit indices throughout.
#![allow(clippy::needless_range_loop)]

pub mod cultures;
pub mod domains;
pub mod election;
pub mod mapel;
pub mod metrics;
pub mod preprocess;
pub mod rules;

pub use election::{parse_election, write_election, Election, ElectionKind, FrequencyMatrix, Vote};
