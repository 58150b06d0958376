//! Vote similarity machinery: Kendall tau distance, pairwise similarity
//! summaries, an exact Kemeny solver, correlation coefficients, part-based
//! intersections, temporal measures, and the parameterized-algorithm budget
//! report.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::election::{Election, Vote};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("votes are not over the same candidate set")]
    MismatchedCandidates,
    #[error("operation requires a complete election")]
    IncompleteElection,
    #[error("operation requires at least {required} voters, got {got}")]
    TooFewVoters { required: usize, got: usize },
    #[error("Kemeny instance too large: {m} candidates exceeds the guard of {guard}")]
    InstanceTooLarge { m: usize, guard: usize },
    #[error("correlation is undefined: {side} input has zero variance")]
    UndefinedCorrelation { side: &'static str },
    #[error("inputs must have equal length >= 2")]
    BadCorrelationInput,
}

/// Kendall tau distance between two complete votes over the same candidate
/// set: the number of candidate pairs the two votes order oppositely.
/// Merge-sort inversion counting, O(m log m).
pub fn kendall_tau(u: &Vote, v: &Vote) -> Result<u64, MetricsError> {
    if u.len() != v.len() {
        return Err(MetricsError::MismatchedCandidates);
    }
    let m = u.len();
    let mut pos = vec![usize::MAX; m];
    for (p, &c) in v.ranking().iter().enumerate() {
        if c >= m || pos[c] != usize::MAX {
            return Err(MetricsError::MismatchedCandidates);
        }
        pos[c] = p;
    }
    let mut seq = Vec::with_capacity(m);
    for &c in u.ranking() {
        if c >= m || pos[c] == usize::MAX {
            return Err(MetricsError::MismatchedCandidates);
        }
        seq.push(pos[c]);
        pos[c] = usize::MAX;
    }
    let mut buf = vec![0usize; m];
    Ok(count_inversions(&mut seq, &mut buf))
}

fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = count_inversions(&mut seq[..mid], buf);
    inv += count_inversions(&mut seq[mid..], buf);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    while i < mid {
        buf[k] = seq[i];
        i += 1;
        k += 1;
    }
    while j < n {
        buf[k] = seq[j];
        j += 1;
        k += 1;
    }
    seq.copy_from_slice(&buf[..n]);
    inv
}

/// For each ordered candidate pair `(c, d)`, the number of votes ranking `d`
/// above `c`: the cost of placing `c` above `d` in a central order.
fn disagreement_counts(e: &Election) -> Result<Vec<Vec<u64>>, MetricsError> {
    let positions = e.positions().map_err(|_| MetricsError::IncompleteElection)?;
    let m = e.num_candidates();
    let mut dis = vec![vec![0u64; m]; m];
    for pos in &positions {
        for c in 0..m {
            for d in c + 1..m {
                if pos[c] < pos[d] {
                    dis[d][c] += 1;
                } else {
                    dis[c][d] += 1;
                }
            }
        }
    }
    Ok(dis)
}

/// The four similarity measures of one election.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilaritySummary {
    /// Maximum KT-distance among all vote pairs.
    pub max_kt: u64,
    /// Average KT-distance among all vote pairs.
    pub avg_kt: f64,
    /// Candidate pairs on whose ordering not all votes agree.
    pub disagreeing_pairs: u64,
    /// Minimum summed KT-distance of a central order to all votes.
    pub kemeny_score: u64,
}

/// Computes all four similarity measures. Requires a complete election with
/// at least two voters, and at most [`KEMENY_GUARD`] candidates for the
/// Kemeny component.
pub fn similarity_summary(e: &Election) -> Result<SimilaritySummary, MetricsError> {
    if !e.is_complete() {
        return Err(MetricsError::IncompleteElection);
    }
    let n = e.num_voters();
    if n < 2 {
        return Err(MetricsError::TooFewVoters { required: 2, got: n });
    }
    let mut max_kt = 0u64;
    let mut total = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let d = kendall_tau(e.vote(i), e.vote(j))?;
            max_kt = max_kt.max(d);
            total += d;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let dis = disagreement_counts(e)?;
    let m = e.num_candidates();
    let mut disagreeing_pairs = 0u64;
    for c in 0..m {
        for d in c + 1..m {
            if dis[c][d] > 0 && dis[d][c] > 0 {
                disagreeing_pairs += 1;
            }
        }
    }
    let (kemeny_score, _) = kemeny(e)?;
    Ok(SimilaritySummary {
        max_kt,
        avg_kt: total as f64 / pairs,
        disagreeing_pairs,
        kemeny_score,
    })
}

/// Largest candidate count accepted by the exact Kemeny solver.
pub const KEMENY_GUARD: usize = 24;

/// Exact Kemeny score and an optimal central order, via dynamic programming
/// over candidate subsets with precomputed pairwise disagreement weights
/// (O(2^m) states). Among all optimal rankings, the lexicographically
/// smallest candidate sequence is returned.
pub fn kemeny(e: &Election) -> Result<(u64, Vote), MetricsError> {
    if !e.is_complete() {
        return Err(MetricsError::IncompleteElection);
    }
    let m = e.num_candidates();
    if m > KEMENY_GUARD {
        return Err(MetricsError::InstanceTooLarge { m, guard: KEMENY_GUARD });
    }
    let dis = disagreement_counts(e)?;
    // total_dis[c]: cost of placing c above everything else.
    let total_dis: Vec<u64> = (0..m).map(|c| dis[c].iter().sum()).collect();

    let full: usize = (1usize << m) - 1;
    // g[s]: minimum completion cost when the candidate set `s` already
    // occupies the top |s| positions.
    let mut g = vec![u32::MAX; full + 1];
    g[full] = 0;
    for s in (0..full).rev() {
        let mut best = u32::MAX;
        for c in 0..m {
            if s & (1 << c) != 0 {
                continue;
            }
            let mut cost = total_dis[c];
            for d in 0..m {
                if s & (1 << d) != 0 {
                    cost -= dis[c][d];
                }
            }
            let val = g[s | (1 << c)] + cost as u32;
            if val < best {
                best = val;
            }
        }
        g[s] = best;
    }

    let mut ranking = Vec::with_capacity(m);
    let mut s = 0usize;
    while s != full {
        for c in 0..m {
            if s & (1 << c) != 0 {
                continue;
            }
            let mut cost = total_dis[c];
            for d in 0..m {
                if s & (1 << d) != 0 {
                    cost -= dis[c][d];
                }
            }
            if g[s | (1 << c)] + cost as u32 == g[s] {
                ranking.push(c);
                s |= 1 << c;
                break;
            }
        }
    }
    Ok((g[0] as u64, Vote::new(ranking)))
}

/// Pearson correlation coefficient of two equally long samples.
/// Zero variance on either side is a typed error, never NaN.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricsError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(MetricsError::BadCorrelationInput);
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 {
        return Err(MetricsError::UndefinedCorrelation { side: "first" });
    }
    if var_y == 0.0 {
        return Err(MetricsError::UndefinedCorrelation { side: "second" });
    }
    Ok((cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation of two strict rankings over the same candidate
/// set: `1 - 6 * sum(d^2) / (m (m^2 - 1))` over per-candidate position
/// differences `d`.
pub fn spearman_rank(r1: &Vote, r2: &Vote) -> Result<f64, MetricsError> {
    if r1.len() != r2.len() {
        return Err(MetricsError::MismatchedCandidates);
    }
    let m = r1.len();
    if m < 2 {
        return Err(MetricsError::BadCorrelationInput);
    }
    let mut pos = vec![usize::MAX; m];
    for (p, &c) in r2.ranking().iter().enumerate() {
        if c >= m || pos[c] != usize::MAX {
            return Err(MetricsError::MismatchedCandidates);
        }
        pos[c] = p;
    }
    let mut sum_d2 = 0u64;
    let mut seen = vec![false; m];
    for (p, &c) in r1.ranking().iter().enumerate() {
        if c >= m || seen[c] {
            return Err(MetricsError::MismatchedCandidates);
        }
        seen[c] = true;
        let d = p as i64 - pos[c] as i64;
        sum_d2 += (d * d) as u64;
    }
    let m = m as f64;
    Ok(1.0 - 6.0 * sum_d2 as f64 / (m * (m * m - 1.0)))
}

/// Statistics for one part (top/middle/bottom) of the votes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartStats {
    /// First and last position of the part, 1-based inclusive.
    pub positions: (usize, usize),
    /// Mean over vote pairs of how many candidates the part holds in both.
    pub pairwise: f64,
    /// Candidates appearing in the part of every vote.
    pub total: u64,
    /// Average KT-distance between vote pairs restricted to the candidates
    /// counted by `total`; absent when fewer than two such candidates exist.
    pub restricted_avg_kt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartIntersections {
    pub top: PartStats,
    pub middle: PartStats,
    pub bottom: PartStats,
    /// True for the canonical 15-candidate layout (positions 1-8, 5-12,
    /// 8-15); other sizes scale the part proportionally.
    pub canonical: bool,
}

/// Part boundaries as 0-based half-open ranges `(start, end)`.
fn part_ranges(m: usize) -> [(usize, usize); 3] {
    let s = (8 * m).div_ceil(15);
    let mid_start = (m - s).div_ceil(2);
    [(0, s), (mid_start, mid_start + s), (m - s, m)]
}

/// Per-part pairwise and total intersection measures over vote prefixes.
/// For 15 candidates the parts cover positions 1-8 (top), 5-12 (middle),
/// and 8-15 (bottom); other candidate counts use parts of size
/// `ceil(8m/15)` placed analogously and are flagged non-canonical.
pub fn part_intersections(e: &Election) -> Result<PartIntersections, MetricsError> {
    if !e.is_complete() {
        return Err(MetricsError::IncompleteElection);
    }
    let n = e.num_voters();
    if n < 2 {
        return Err(MetricsError::TooFewVoters { required: 2, got: n });
    }
    let m = e.num_candidates();
    let ranges = part_ranges(m);
    let positions = e.positions().map_err(|_| MetricsError::IncompleteElection)?;

    let mut stats = Vec::with_capacity(3);
    for &(start, end) in &ranges {
        // membership[v][c]: candidate c lies in this part of vote v.
        let member: Vec<Vec<bool>> = positions
            .iter()
            .map(|pos| (0..m).map(|c| (start..end).contains(&pos[c])).collect())
            .collect();
        let mut pair_total = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                pair_total += (0..m).filter(|&c| member[i][c] && member[j][c]).count() as u64;
            }
        }
        let shared: Vec<usize> = (0..m).filter(|&c| member.iter().all(|mv| mv[c])).collect();
        let restricted_avg_kt = if shared.len() >= 2 {
            // Discordant pairs inside the shared set, counted directly on the
            // original votes.
            let mut total = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    for (ai, &a) in shared.iter().enumerate() {
                        for &b in &shared[ai + 1..] {
                            let in_i = positions[i][a] < positions[i][b];
                            let in_j = positions[j][a] < positions[j][b];
                            if in_i != in_j {
                                total += 1;
                            }
                        }
                    }
                }
            }
            Some(total as f64 / (n * (n - 1) / 2) as f64)
        } else {
            None
        };
        stats.push(PartStats {
            positions: (start + 1, end),
            pairwise: pair_total as f64 / (n * (n - 1) / 2) as f64,
            total: shared.len() as u64,
            restricted_avg_kt,
        });
    }
    let bottom = stats.pop().unwrap();
    let middle = stats.pop().unwrap();
    let top = stats.pop().unwrap();
    Ok(PartIntersections {
        top,
        middle,
        bottom,
        canonical: m == 15,
    })
}

/// Temporal similarity measures of an election whose vote order is the
/// temporal order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalProfile {
    /// Mean over candidate pairs of how often the pair's ordering swaps
    /// between successive votes.
    pub avg_ordering_change: f64,
    pub max_ordering_change: u64,
    /// Summed swap count over all pairs; equals the summed KT-distance of
    /// all successive vote pairs.
    pub ordering_change_total: u64,
    /// Per position: number of successive vote pairs where the candidate in
    /// that position changes.
    pub fluctuation_per_position: Vec<u64>,
    /// Mean of the per-position fluctuation counts over positions.
    pub avg_fluctuation: f64,
    /// Pearson correlation between KT-distance and temporal distance over
    /// all vote pairs; `None` when undefined (e.g. a constant sequence).
    pub kt_temporal_pcc: Option<f64>,
    /// True when the vote order was shuffled before measuring.
    pub shuffled: bool,
}

/// Computes the temporal profile. With `shuffled`, the vote order is first
/// permuted by a seeded generator to obtain the random baseline.
pub fn temporal_profile(
    e: &Election,
    shuffled: bool,
    seed: u64,
) -> Result<TemporalProfile, MetricsError> {
    if !e.is_complete() {
        return Err(MetricsError::IncompleteElection);
    }
    let n = e.num_voters();
    if n < 2 {
        return Err(MetricsError::TooFewVoters { required: 2, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    if shuffled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
    }
    let votes: Vec<&Vote> = order.iter().map(|&i| e.vote(i)).collect();
    let m = e.num_candidates();
    let positions: Vec<Vec<usize>> = votes
        .iter()
        .map(|v| {
            let mut pos = vec![0usize; m];
            for (p, &c) in v.ranking().iter().enumerate() {
                pos[c] = p;
            }
            pos
        })
        .collect();

    let mut max_change = 0u64;
    let mut change_total = 0u64;
    for c in 0..m {
        for d in c + 1..m {
            let mut changes = 0u64;
            for i in 0..n - 1 {
                let before = positions[i][c] < positions[i][d];
                let after = positions[i + 1][c] < positions[i + 1][d];
                if before != after {
                    changes += 1;
                }
            }
            max_change = max_change.max(changes);
            change_total += changes;
        }
    }
    let pairs = (m * (m - 1) / 2) as f64;

    let mut fluctuation = vec![0u64; m];
    for i in 0..n - 1 {
        for p in 0..m {
            if votes[i][p] != votes[i + 1][p] {
                fluctuation[p] += 1;
            }
        }
    }
    let avg_fluctuation = fluctuation.iter().sum::<u64>() as f64 / m as f64;

    let mut kts = Vec::with_capacity(n * (n - 1) / 2);
    let mut gaps = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            kts.push(kendall_tau(votes[i], votes[j])? as f64);
            // Temporal distance: votes in between plus one.
            gaps.push((j - i) as f64);
        }
    }
    // Undefined with fewer than two pairs or zero variance.
    let kt_temporal_pcc = match pearson(&kts, &gaps) {
        Ok(r) => Some(r),
        Err(MetricsError::UndefinedCorrelation { .. }) | Err(MetricsError::BadCorrelationInput) => {
            None
        }
        Err(other) => return Err(other),
    };

    Ok(TemporalProfile {
        avg_ordering_change: change_total as f64 / pairs,
        max_ordering_change: max_change,
        ordering_change_total: change_total,
        fluctuation_per_position: fluctuation,
        avg_fluctuation,
        kt_temporal_pcc,
        shuffled,
    })
}

/// One exponential magnitude from the parameterized-running-time report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Magnitude {
    pub log10: f64,
    /// Rounded decimal rendering; scientific notation above 10^15.
    pub display: String,
}

impl Magnitude {
    fn from_log10(log10: f64) -> Magnitude {
        let display = if log10 < 15.0 {
            format!("{}", 10f64.powf(log10).round() as u64)
        } else {
            let exp = log10.floor();
            format!("{:.2}e{}", 10f64.powf(log10 - exp), exp as i64)
        };
        Magnitude { log10, display }
    }

    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }
}

/// Exponential factors of the three parameterized Kemeny algorithms for one
/// election: 2^m (candidates), 1.53^k (Kemeny score), and 16^d (average
/// KT-distance).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterBudget {
    pub two_pow_m: Magnitude,
    pub one53_pow_k: Magnitude,
    pub sixteen_pow_d: Magnitude,
}

pub fn parameter_budget(summary: &SimilaritySummary, m: usize) -> ParameterBudget {
    ParameterBudget {
        two_pow_m: Magnitude::from_log10(m as f64 * 2f64.log10()),
        one53_pow_k: Magnitude::from_log10(summary.kemeny_score as f64 * 1.53f64.log10()),
        sixteen_pow_d: Magnitude::from_log10(summary.avg_kt * 16f64.log10()),
    }
}
