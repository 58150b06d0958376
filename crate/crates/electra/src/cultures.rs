//! Synthetic election generators used by tests, demos, and the `sample`
//! subcommand: impartial culture, the Walsh and Conitzer single-peaked
//! samplers, and realizable compass elections.
//!
//! All samplers are bit-deterministic under a fixed seed. When sampling in
//! parallel, derive per-task seeds as `seed ^ task_index`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::election::{default_labels, Election, Vote};

#[derive(Debug, Error, PartialEq)]
pub enum CulturesError {
    #[error("antagonism requires an even number of voters, got {n}")]
    OddAntagonism { n: usize },
    #[error("need m >= 1 and n >= 1, got m={m}, n={n}")]
    EmptyShape { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Culture {
    /// Votes drawn i.i.d. uniformly over all permutations.
    Impartial,
    /// Uniform over the votes single-peaked on a fixed axis: the vote is
    /// built from the bottom, taking the leftmost or rightmost remaining
    /// axis candidate with probability one half.
    WalshSp,
    /// Uniform top choice on the axis, then the prefix grows left or right
    /// with probability one half.
    ConitzerSp,
    /// Every voter casts the same uniformly drawn permutation.
    Identity,
    /// Half the voters cast a uniformly drawn permutation, half its reverse.
    Antagonism,
}

impl Culture {
    pub fn name(self) -> &'static str {
        match self {
            Culture::Impartial => "impartial",
            Culture::WalshSp => "walsh_sp",
            Culture::ConitzerSp => "conitzer_sp",
            Culture::Identity => "identity",
            Culture::Antagonism => "antagonism",
        }
    }
}

impl std::str::FromStr for Culture {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "impartial" => Ok(Culture::Impartial),
            "walsh_sp" => Ok(Culture::WalshSp),
            "conitzer_sp" => Ok(Culture::ConitzerSp),
            "identity" => Ok(Culture::Identity),
            "antagonism" => Ok(Culture::Antagonism),
            other => Err(format!("unknown culture {other:?}")),
        }
    }
}

/// Samples an election from the given culture. The single-peaked cultures
/// use the fixed axis `0 < 1 < ... < m-1`.
pub fn sample_culture(kind: Culture, m: usize, n: usize, seed: u64) -> Result<Election, CulturesError> {
    if m == 0 || n == 0 {
        return Err(CulturesError::EmptyShape { m, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let votes: Vec<Vote> = match kind {
        Culture::Impartial => (0..n).map(|_| Vote::new(random_permutation(m, &mut rng))).collect(),
        Culture::WalshSp => (0..n).map(|_| Vote::new(walsh_vote(m, &mut rng))).collect(),
        Culture::ConitzerSp => (0..n).map(|_| Vote::new(conitzer_vote(m, &mut rng))).collect(),
        Culture::Identity => {
            let base = random_permutation(m, &mut rng);
            (0..n).map(|_| Vote::new(base.clone())).collect()
        }
        Culture::Antagonism => {
            if !n.is_multiple_of(2) {
                return Err(CulturesError::OddAntagonism { n });
            }
            let base = random_permutation(m, &mut rng);
            let reversed: Vec<usize> = base.iter().rev().copied().collect();
            (0..n / 2)
                .map(|_| Vote::new(base.clone()))
                .chain((0..n / 2).map(|_| Vote::new(reversed.clone())))
                .collect()
        }
    };
    Ok(Election::new(default_labels(m), votes).expect("sampled votes are valid"))
}

/// Frequency matrix of the uniformity election. Realizing it as votes
/// would need all m! permutations, so only the matrix form exists.
pub fn uniformity_matrix(m: usize) -> Result<crate::election::FrequencyMatrix, crate::mapel::MapelError> {
    crate::mapel::compass_matrix(crate::mapel::CompassSpec::Pure {
        kind: crate::mapel::CompassKind::Uniformity,
        m,
    })
}

/// Frequency matrix of the stratification election (even `m` only); same
/// matrix-only rationale as [`uniformity_matrix`].
pub fn stratification_matrix(m: usize) -> Result<crate::election::FrequencyMatrix, crate::mapel::MapelError> {
    crate::mapel::compass_matrix(crate::mapel::CompassSpec::Pure {
        kind: crate::mapel::CompassKind::Stratification,
        m,
    })
}

fn random_permutation(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    perm
}

fn walsh_vote(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut ranking = vec![0usize; m];
    let (mut lo, mut hi) = (0usize, m - 1);
    for slot in (0..m).rev() {
        let take_left = lo == hi || rng.random::<bool>();
        if take_left {
            ranking[slot] = lo;
            lo += 1;
        } else {
            ranking[slot] = hi;
            hi -= 1;
        }
    }
    ranking
}

fn conitzer_vote(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let peak = rng.random_range(0..m);
    let mut ranking = Vec::with_capacity(m);
    ranking.push(peak);
    let (mut lo, mut hi) = (peak, peak);
    while ranking.len() < m {
        let go_left = if lo == 0 {
            false
        } else if hi == m - 1 {
            true
        } else {
            rng.random::<bool>()
        };
        if go_left {
            lo -= 1;
            ranking.push(lo);
        } else {
            hi += 1;
            ranking.push(hi);
        }
    }
    ranking
}
