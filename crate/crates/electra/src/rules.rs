//! Voting rules, Condorcet analysis, and winner/ranking consensus measures.
//!
//! Every rule computes a score or elimination process, returns all
//! highest-score candidates as winners, a lexicographic winner (smallest
//! candidate index among the winners), and the induced weak-order ranking
//! used by the ranking-consensus analysis.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::election::Election;
use crate::metrics::{kemeny, pearson, MetricsError};

#[derive(Debug, Error, PartialEq)]
pub enum RulesError {
    #[error("no election in the input admits the required Condorcet winner")]
    EmptyEligibleSet,
    #[error("election list is empty")]
    EmptyInput,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Plurality,
    PluralityRunoff,
    Borda,
    Copeland,
    Hare,
    Kemeny,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::Plurality,
        Rule::PluralityRunoff,
        Rule::Borda,
        Rule::Copeland,
        Rule::Hare,
        Rule::Kemeny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Plurality => "plurality",
            Rule::PluralityRunoff => "plurality_runoff",
            Rule::Borda => "borda",
            Rule::Copeland => "copeland",
            Rule::Hare => "hare",
            Rule::Kemeny => "kemeny",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

/// Rule-specific evidence of how the outcome was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RuleTrace {
    /// Final per-candidate scores (Plurality, Borda, Copeland).
    Scores(Vec<i64>),
    Runoff {
        first_round: Vec<u64>,
        survivors: Vec<usize>,
        /// Second-round scores, indexed like `survivors`.
        second_round: Vec<u64>,
    },
    Hare {
        /// Eliminated candidates in order of elimination.
        elimination: Vec<usize>,
        survivors: Vec<usize>,
    },
    Kemeny {
        score: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub winners: BTreeSet<usize>,
    /// Smallest candidate index among the winners.
    pub lex_winner: usize,
    /// Induced weak order: tie groups from best to worst, each ascending.
    pub ranking: Vec<Vec<usize>>,
    pub trace: RuleTrace,
}

fn plurality_scores(e: &Election, remaining: Option<&[bool]>) -> Vec<u64> {
    let m = e.num_candidates();
    let mut scores = vec![0u64; m];
    for vote in e.votes() {
        let top = vote
            .ranking()
            .iter()
            .find(|&&c| remaining.is_none_or(|r| r[c]))
            .expect("some candidate remains");
        scores[*top] += 1;
    }
    scores
}

/// Groups candidates by descending score; equal scores tie.
fn ranking_from_scores<S: Ord + Copy>(scores: &[S]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for c in order {
        match groups.last_mut() {
            Some(g) if scores[g[0]] == scores[c] => g.push(c),
            _ => groups.push(vec![c]),
        }
    }
    groups
}

fn argmax_set<S: Ord + Copy>(scores: &[S]) -> BTreeSet<usize> {
    let best = scores.iter().max().expect("nonempty scores");
    (0..scores.len()).filter(|&c| scores[c] == *best).collect()
}

/// Applies a voting rule to a complete election.
pub fn apply_rule(e: &Election, rule: Rule) -> Result<RuleOutcome, RulesError> {
    if !e.is_complete() {
        return Err(RulesError::Metrics(MetricsError::IncompleteElection));
    }
    let m = e.num_candidates();
    let outcome = match rule {
        Rule::Plurality => {
            let scores = plurality_scores(e, None);
            let winners = argmax_set(&scores);
            RuleOutcome {
                rule,
                lex_winner: *winners.first().unwrap(),
                ranking: ranking_from_scores(&scores),
                winners,
                trace: RuleTrace::Scores(scores.iter().map(|&s| s as i64).collect()),
            }
        }
        Rule::Borda => {
            let positions = e.positions().expect("checked complete");
            let mut scores = vec![0u64; m];
            for pos in &positions {
                for c in 0..m {
                    scores[c] += (m - 1 - pos[c]) as u64;
                }
            }
            let winners = argmax_set(&scores);
            RuleOutcome {
                rule,
                lex_winner: *winners.first().unwrap(),
                ranking: ranking_from_scores(&scores),
                winners,
                trace: RuleTrace::Scores(scores.iter().map(|&s| s as i64).collect()),
            }
        }
        Rule::Copeland => {
            let beats = pairwise_wins(e);
            let n = e.num_voters() as u64;
            let mut scores = vec![0i64; m];
            for c in 0..m {
                for d in c + 1..m {
                    if 2 * beats[c][d] > n {
                        scores[c] += 1;
                        scores[d] -= 1;
                    } else if 2 * beats[d][c] > n {
                        scores[d] += 1;
                        scores[c] -= 1;
                    }
                }
            }
            let winners = argmax_set(&scores);
            if cfg!(debug_assertions) {
                if let (Some(strong), _) = condorcet_winners(e) {
                    debug_assert!(winners.contains(&strong));
                }
            }
            RuleOutcome {
                rule,
                lex_winner: *winners.first().unwrap(),
                ranking: ranking_from_scores(&scores),
                winners,
                trace: RuleTrace::Scores(scores),
            }
        }
        Rule::PluralityRunoff => runoff(e),
        Rule::Hare => hare(e),
        Rule::Kemeny => {
            let (score, central) = kemeny(e)?;
            let winners: BTreeSet<usize> = [central[0]].into();
            RuleOutcome {
                rule,
                lex_winner: central[0],
                ranking: central.ranking().iter().map(|&c| vec![c]).collect(),
                winners,
                trace: RuleTrace::Kemeny { score },
            }
        }
    };
    Ok(outcome)
}

/// First round by plurality score. With more than two candidates tied at
/// the top, exactly those survive; otherwise everyone holding the highest
/// or second-highest score value survives. The second round is plurality
/// among the survivors. Eliminated candidates rank below the survivors by
/// their first-round score.
fn runoff(e: &Election) -> RuleOutcome {
    let m = e.num_candidates();
    let first = plurality_scores(e, None);
    let top = argmax_set(&first);
    let survivors: Vec<usize> = if top.len() > 2 {
        top.iter().copied().collect()
    } else {
        let best = *first.iter().max().unwrap();
        let second = first.iter().copied().filter(|&s| s < best).max();
        (0..m)
            .filter(|&c| first[c] == best || second.is_some_and(|s| first[c] == s))
            .collect()
    };
    let mut alive = vec![false; m];
    for &c in &survivors {
        alive[c] = true;
    }
    let full_second = plurality_scores(e, Some(&alive));
    let second_round: Vec<u64> = survivors.iter().map(|&c| full_second[c]).collect();

    let best_second = *second_round.iter().max().unwrap();
    let winners: BTreeSet<usize> = survivors
        .iter()
        .zip(&second_round)
        .filter(|&(_, &s)| s == best_second)
        .map(|(&c, _)| c)
        .collect();

    // Survivor groups by second-round score, then eliminated groups by
    // first-round score.
    let mut ranking: Vec<Vec<usize>> = Vec::new();
    let mut surv_sorted: Vec<usize> = survivors.clone();
    surv_sorted.sort_by(|&a, &b| full_second[b].cmp(&full_second[a]).then(a.cmp(&b)));
    for c in surv_sorted {
        match ranking.last_mut() {
            Some(g) if alive[g[0]] && full_second[g[0]] == full_second[c] => g.push(c),
            _ => ranking.push(vec![c]),
        }
    }
    let mut elim: Vec<usize> = (0..m).filter(|&c| !alive[c]).collect();
    elim.sort_by(|&a, &b| first[b].cmp(&first[a]).then(a.cmp(&b)));
    let survivor_groups = ranking.len();
    for c in elim {
        match ranking.last_mut() {
            Some(g) if !alive[g[0]] && first[g[0]] == first[c] => g.push(c),
            _ => ranking.push(vec![c]),
        }
    }
    debug_assert!(ranking.len() >= survivor_groups);

    RuleOutcome {
        rule: Rule::PluralityRunoff,
        lex_winner: *winners.first().unwrap(),
        winners,
        ranking,
        trace: RuleTrace::Runoff { first_round: first, survivors, second_round },
    }
}

/// Iterative elimination of a lowest-plurality-score candidate; ties among
/// the lowest are broken by deleting the one the first voter ranks worst.
/// When all remaining candidates share the same score they all win. The
/// reverse elimination order induces the ranking.
fn hare(e: &Election) -> RuleOutcome {
    let m = e.num_candidates();
    let first_voter_pos = {
        let mut pos = vec![0usize; m];
        for (p, &c) in e.vote(0).ranking().iter().enumerate() {
            pos[c] = p;
        }
        pos
    };
    let mut alive = vec![true; m];
    let mut alive_count = m;
    let mut elimination = Vec::new();
    loop {
        let scores = plurality_scores(e, Some(&alive));
        let alive_scores: Vec<u64> = (0..m).filter(|&c| alive[c]).map(|c| scores[c]).collect();
        let min = *alive_scores.iter().min().unwrap();
        let max = *alive_scores.iter().max().unwrap();
        if min == max {
            break;
        }
        let doomed = (0..m)
            .filter(|&c| alive[c] && scores[c] == min)
            .max_by_key(|&c| first_voter_pos[c])
            .unwrap();
        alive[doomed] = false;
        alive_count -= 1;
        elimination.push(doomed);
        debug_assert!(alive_count >= 1);
    }
    let survivors: Vec<usize> = (0..m).filter(|&c| alive[c]).collect();
    let winners: BTreeSet<usize> = survivors.iter().copied().collect();
    let mut ranking: Vec<Vec<usize>> = vec![survivors.clone()];
    for &c in elimination.iter().rev() {
        ranking.push(vec![c]);
    }
    RuleOutcome {
        rule: Rule::Hare,
        lex_winner: *winners.first().unwrap(),
        winners,
        ranking,
        trace: RuleTrace::Hare { elimination, survivors },
    }
}

/// `beats[c][d]`: number of voters preferring `c` to `d`.
fn pairwise_wins(e: &Election) -> Vec<Vec<u64>> {
    let m = e.num_candidates();
    let positions = e.positions().expect("complete election");
    let mut beats = vec![vec![0u64; m]; m];
    for pos in &positions {
        for c in 0..m {
            for d in c + 1..m {
                if pos[c] < pos[d] {
                    beats[c][d] += 1;
                } else {
                    beats[d][c] += 1;
                }
            }
        }
    }
    beats
}

/// Strong Condorcet winner (beats every other candidate by strict
/// majority; unique when it exists) and the weak Condorcet winners (never
/// beaten by strict majority).
pub fn condorcet_winners(e: &Election) -> (Option<usize>, BTreeSet<usize>) {
    let m = e.num_candidates();
    let n = e.num_voters() as u64;
    let beats = pairwise_wins(e);
    let mut strong = None;
    let mut weak = BTreeSet::new();
    for c in 0..m {
        let wins_all = (0..m).all(|d| d == c || 2 * beats[c][d] > n);
        let never_loses = (0..m).all(|d| d == c || 2 * beats[d][c] <= n);
        if wins_all && m > 1 {
            strong = strong.or(Some(c));
        }
        if m == 1 {
            strong = Some(c);
        }
        if never_loses {
            weak.insert(c);
        }
    }
    (strong, weak)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CondorcetNotion {
    Strong,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondorcetEfficiency {
    /// Fraction of eligible elections where the rule's winner set contains
    /// a Condorcet winner of the requested notion.
    pub efficiency: f64,
    /// Fraction of all elections admitting such a winner.
    pub admitting_fraction: f64,
    pub eligible: usize,
}

pub fn condorcet_efficiency(
    elections: &[Election],
    rule: Rule,
    notion: CondorcetNotion,
) -> Result<CondorcetEfficiency, RulesError> {
    if elections.is_empty() {
        return Err(RulesError::EmptyInput);
    }
    let mut eligible = 0usize;
    let mut selected = 0usize;
    for e in elections {
        let (strong, weak) = condorcet_winners(e);
        let targets: BTreeSet<usize> = match notion {
            CondorcetNotion::Strong => strong.into_iter().collect(),
            CondorcetNotion::Weak => weak,
        };
        if targets.is_empty() {
            continue;
        }
        eligible += 1;
        let outcome = apply_rule(e, rule)?;
        if outcome.winners.intersection(&targets).next().is_some() {
            selected += 1;
        }
    }
    if eligible == 0 {
        return Err(RulesError::EmptyEligibleSet);
    }
    Ok(CondorcetEfficiency {
        efficiency: selected as f64 / eligible as f64,
        admitting_fraction: eligible as f64 / elections.len() as f64,
        eligible,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsensusMeasure {
    Lexicographic,
    NonemptyOverlap,
    NormalizedOverlap,
}

impl ConsensusMeasure {
    pub const ALL: [ConsensusMeasure; 3] = [
        ConsensusMeasure::Lexicographic,
        ConsensusMeasure::NonemptyOverlap,
        ConsensusMeasure::NormalizedOverlap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConsensusMeasure::Lexicographic => "lexicographic",
            ConsensusMeasure::NonemptyOverlap => "nonempty_overlap",
            ConsensusMeasure::NormalizedOverlap => "normalized_overlap",
        }
    }
}

/// Average winner agreement of two rules over a set of elections. All
/// three measures coincide on elections where both rules return a unique
/// winner.
pub fn winner_consensus(
    elections: &[Election],
    rule_a: Rule,
    rule_b: Rule,
    measure: ConsensusMeasure,
) -> Result<f64, RulesError> {
    if elections.is_empty() {
        return Err(RulesError::EmptyInput);
    }
    let mut total = 0.0;
    for e in elections {
        let a = apply_rule(e, rule_a)?;
        let b = apply_rule(e, rule_b)?;
        total += match measure {
            ConsensusMeasure::Lexicographic => {
                if a.lex_winner == b.lex_winner {
                    1.0
                } else {
                    0.0
                }
            }
            ConsensusMeasure::NonemptyOverlap => {
                if a.winners.intersection(&b.winners).next().is_some() {
                    1.0
                } else {
                    0.0
                }
            }
            ConsensusMeasure::NormalizedOverlap => {
                let inter = a.winners.intersection(&b.winners).count() as f64;
                let union = a.winners.union(&b.winners).count() as f64;
                inter / union
            }
        };
    }
    Ok(total / elections.len() as f64)
}

/// Average ranks of a weak order: candidates in one tie group share the
/// mean of the positions the group occupies (1-based).
pub fn average_ranks(ranking: &[Vec<usize>], m: usize) -> Vec<f64> {
    let mut ranks = vec![0.0; m];
    let mut taken = 0usize;
    for group in ranking {
        let g = group.len() as f64;
        let avg = taken as f64 + (g + 1.0) / 2.0;
        for &c in group {
            ranks[c] = avg;
        }
        taken += group.len();
    }
    ranks
}

/// Mean Spearman correlation between the two rules' induced rankings,
/// with ties resolved to average ranks. A fully tied ranking carries no
/// ordering information and contributes zero.
pub fn ranking_consensus(elections: &[Election], rule_a: Rule, rule_b: Rule) -> Result<f64, RulesError> {
    if elections.is_empty() {
        return Err(RulesError::EmptyInput);
    }
    let mut total = 0.0;
    for e in elections {
        let m = e.num_candidates();
        let a = average_ranks(&apply_rule(e, rule_a)?.ranking, m);
        let b = average_ranks(&apply_rule(e, rule_b)?.ranking, m);
        total += match pearson(&a, &b) {
            Ok(r) => r,
            Err(MetricsError::UndefinedCorrelation { .. }) | Err(MetricsError::BadCorrelationInput) => 0.0,
            Err(other) => return Err(other.into()),
        };
    }
    Ok(total / elections.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TieReport {
    pub rule: Rule,
    /// Fraction of all elections with two or more winners.
    pub tied_fraction: f64,
    /// Same fraction restricted to elections without a strong Condorcet
    /// winner; `None` when every election has one.
    pub tied_fraction_no_strong_condorcet: Option<f64>,
}

pub fn tie_report(elections: &[Election], rules: &[Rule]) -> Result<Vec<TieReport>, RulesError> {
    if elections.is_empty() {
        return Err(RulesError::EmptyInput);
    }
    let no_strong: Vec<&Election> = elections
        .iter()
        .filter(|e| condorcet_winners(e).0.is_none())
        .collect();
    let mut out = Vec::new();
    for &rule in rules {
        let mut tied = 0usize;
        for e in elections {
            if apply_rule(e, rule)?.winners.len() >= 2 {
                tied += 1;
            }
        }
        let mut tied_nc = 0usize;
        for e in &no_strong {
            if apply_rule(e, rule)?.winners.len() >= 2 {
                tied_nc += 1;
            }
        }
        out.push(TieReport {
            rule,
            tied_fraction: tied as f64 / elections.len() as f64,
            tied_fraction_no_strong_condorcet: if no_strong.is_empty() {
                None
            } else {
                Some(tied_nc as f64 / no_strong.len() as f64)
            },
        });
    }
    Ok(out)
}
