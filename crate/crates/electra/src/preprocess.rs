//! Raw-to-complete conversion via the maximum-edge-biclique reduction,
//! relevance filtering, and normalized sampling.
//!
//! An incomplete election induces a bipartite graph between voters and
//! candidates (an edge when the vote ranks the candidate). A complete
//! sub-election keeping voters `V'` and candidates `C'` is exactly a
//! biclique, and maximizing `|V'| * |C'|` keeps as much of the election as
//! possible without perturbing any pairwise comparison.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::election::{Election, ElectionError, Vote};

#[derive(Debug, Error, PartialEq)]
pub enum PreprocessError {
    #[error("need at least {required} candidates, election has {got}")]
    TooFewCandidates { required: usize, got: usize },
    #[error("operation requires a complete election")]
    IncompleteElection,
    #[error(transparent)]
    Election(#[from] ElectionError),
}

/// Candidate sets as packed bitsets, one word-chunk vector per voter.
struct Bitsets {
    words: usize,
    sets: Vec<Vec<u64>>,
}

impl Bitsets {
    fn from_election(e: &Election) -> Bitsets {
        let words = e.num_candidates().div_ceil(64);
        let sets = e
            .votes()
            .iter()
            .map(|v| {
                let mut set = vec![0u64; words];
                for &c in v.ranking() {
                    set[c / 64] |= 1 << (c % 64);
                }
                set
            })
            .collect();
        Bitsets { words, sets }
    }

    /// Number of voters whose vote covers every candidate in `cset`.
    fn cover_count(&self, cset: &[u64]) -> usize {
        self.sets
            .iter()
            .filter(|s| (0..self.words).all(|w| cset[w] & !s[w] == 0))
            .count()
    }
}

fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

/// Completes a possibly incomplete election by keeping a voter subset and a
/// candidate subset forming a large biclique (every kept voter ranks every
/// kept candidate). Kept votes keep their pairwise orders verbatim.
///
/// Randomized greedy with hill-climbing local search and `effort` restarts;
/// deterministic for a fixed seed. Already complete elections are returned
/// unchanged.
pub fn complete_election(e: &Election, effort: usize, seed: u64) -> Result<Election, PreprocessError> {
    if e.is_complete() {
        return Ok(e.clone());
    }
    let m = e.num_candidates();
    let bits = Bitsets::from_election(e);
    let effort = effort.max(1);

    let mut best_set: Vec<u64> = Vec::new();
    let mut best_score = 0usize;

    let densest = (0..e.num_voters())
        .max_by_key(|&v| (e.vote(v).len(), std::cmp::Reverse(v)))
        .unwrap();

    for restart in 0..effort {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ restart as u64);
        let seed_voter = if restart == 0 {
            densest
        } else {
            rng.random_range(0..e.num_voters())
        };
        let mut current = bits.sets[seed_voter].clone();
        let mut size = popcount(&current);
        let mut score = bits.cover_count(&current) * size;

        let mut moves: Vec<usize> = (0..m).collect();
        loop {
            moves.shuffle(&mut rng);
            let mut improved = false;
            for &c in &moves {
                let (w, b) = (c / 64, 1u64 << (c % 64));
                let inside = current[w] & b != 0;
                if inside && size == 1 {
                    continue;
                }
                current[w] ^= b;
                let new_size = if inside { size - 1 } else { size + 1 };
                let new_score = bits.cover_count(&current) * new_size;
                if new_score > score {
                    score = new_score;
                    size = new_size;
                    improved = true;
                } else {
                    current[w] ^= b;
                }
            }
            // Admission moves: shrink the kept candidates to the
            // intersection with one outside vote, re-admitting that voter
            // (and possibly others) at once. Single-candidate moves cannot
            // cross this valley.
            for v in 0..e.num_voters() {
                let covers = (0..bits.words).all(|w| current[w] & !bits.sets[v][w] == 0);
                if covers {
                    continue;
                }
                let shrunk: Vec<u64> =
                    (0..bits.words).map(|w| current[w] & bits.sets[v][w]).collect();
                let new_size = popcount(&shrunk);
                if new_size == 0 {
                    continue;
                }
                let new_score = bits.cover_count(&shrunk) * new_size;
                if new_score > score {
                    score = new_score;
                    size = new_size;
                    current = shrunk;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if score > best_score {
            best_score = score;
            best_set = current;
        }
    }

    let keep_candidates: BTreeSet<usize> =
        (0..m).filter(|&c| best_set[c / 64] & (1 << (c % 64)) != 0).collect();
    let keep_voters: BTreeSet<usize> = (0..e.num_voters())
        .filter(|&v| (0..bits.words).all(|w| best_set[w] & !bits.sets[v][w] == 0))
        .collect();
    Ok(e.restrict(Some(&keep_candidates), Some(&keep_voters))?)
}

/// An election is relevant when it has at least `min_candidates` candidates.
pub fn is_relevant(e: &Election, min_candidates: usize) -> bool {
    e.num_candidates() >= min_candidates
}

/// Default relevance threshold.
pub const RELEVANT_MIN_CANDIDATES: usize = 15;

/// Normalized sample size defaults.
pub const NORMALIZED_CANDIDATES: usize = 15;
pub const NORMALIZED_VOTERS: usize = 30;

/// Draws a normalized election from a complete one: `m_out` candidates
/// uniformly without replacement, then `n_out` votes uniformly with
/// replacement, each restricted to the chosen candidates. One seeded
/// generator drives both draws in that fixed order.
pub fn normalize_sample(
    e: &Election,
    m_out: usize,
    n_out: usize,
    seed: u64,
) -> Result<Election, PreprocessError> {
    if !e.is_complete() {
        return Err(PreprocessError::IncompleteElection);
    }
    let m = e.num_candidates();
    if m < m_out {
        return Err(PreprocessError::TooFewCandidates { required: m_out, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept: BTreeSet<usize> = rand::seq::index::sample(&mut rng, m, m_out).into_iter().collect();
    let mut remap = vec![usize::MAX; m];
    let mut labels = Vec::with_capacity(m_out);
    for (new, &old) in kept.iter().enumerate() {
        remap[old] = new;
        labels.push(e.labels()[old].clone());
    }
    let n = e.num_voters();
    let mut votes = Vec::with_capacity(n_out);
    for _ in 0..n_out {
        let source = e.vote(rng.random_range(0..n));
        let ranking: Vec<usize> = source
            .ranking()
            .iter()
            .filter(|&&c| remap[c] != usize::MAX)
            .map(|&c| remap[c])
            .collect();
        votes.push(Vote::new(ranking));
    }
    Ok(Election::new(labels, votes)?)
}
