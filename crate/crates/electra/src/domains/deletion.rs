//! Exact voter/candidate deletion distances to restricted domains.
//!
//! One engine covers all domain/mode combinations via implicit hitting set:
//! repeatedly solve a minimum hitting set over the voter (or candidate)
//! tuples of forbidden configurations found so far, test the residual
//! election with the domain's recognizer, and on rejection add a fresh
//! configuration from the residual. A feasible hitting set of the collected
//! sets is optimal, because every valid deletion set must hit them all.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::election::Election;

use super::configurations::{find_configuration, ConfigKind};
use super::group_separable::{detect_group_separable, PartitionTree};
use super::single_crossing::detect_single_crossing;
use super::single_peaked::{detect_single_peaked, Axis, SpTieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    SinglePeaked,
    SingleCrossing,
    GroupSeparable,
    ValueRestricted,
}

impl Domain {
    pub const ALL: [Domain; 4] = [
        Domain::SinglePeaked,
        Domain::SingleCrossing,
        Domain::GroupSeparable,
        Domain::ValueRestricted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::SinglePeaked => "single_peaked",
            Domain::SingleCrossing => "single_crossing",
            Domain::GroupSeparable => "group_separable",
            Domain::ValueRestricted => "value_restricted",
        }
    }

    /// The forbidden configurations characterizing the domain.
    pub fn config_kinds(self) -> &'static [ConfigKind] {
        match self {
            Domain::SinglePeaked => &[ConfigKind::Alpha, ConfigKind::Worst],
            Domain::SingleCrossing => &[ConfigKind::Gamma, ConfigKind::Delta],
            Domain::GroupSeparable => &[ConfigKind::Beta, ConfigKind::Medium],
            Domain::ValueRestricted => &[ConfigKind::Value],
        }
    }

    /// Membership test with certificate. Value-restriction is defined by
    /// the absence of its configuration and carries no certificate.
    pub fn recognize(self, e: &Election) -> Option<Certificate> {
        match self {
            Domain::SinglePeaked => {
                detect_single_peaked(e, SpTieBreak::GreedyFixed).map(Certificate::Axis)
            }
            Domain::SingleCrossing => detect_single_crossing(e).map(Certificate::VoterOrder),
            Domain::GroupSeparable => detect_group_separable(e).map(Certificate::PartitionTree),
            Domain::ValueRestricted => {
                if find_configuration(e, ConfigKind::Value).is_none() {
                    Some(Certificate::None)
                } else {
                    None
                }
            }
        }
    }

    pub fn is_member(self, e: &Election) -> bool {
        self.recognize(e).is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeletionMode {
    Voters,
    Candidates,
}

impl DeletionMode {
    pub const ALL: [DeletionMode; 2] = [DeletionMode::Voters, DeletionMode::Candidates];

    pub fn name(self) -> &'static str {
        match self {
            DeletionMode::Voters => "voters",
            DeletionMode::Candidates => "candidates",
        }
    }
}

/// Certificate for the residual election, in original index space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Certificate {
    Axis(Axis),
    VoterOrder(Vec<usize>),
    PartitionTree(PartitionTree),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeletionResult {
    pub domain: Domain,
    pub mode: DeletionMode,
    pub k: usize,
    pub deleted: BTreeSet<usize>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DeletionOutcome {
    Exact(DeletionResult),
    /// The optimum exceeds the given budget; `lower_bound` is a proven
    /// lower bound on the true distance.
    ExceedsBudget { lower_bound: usize },
}

impl DeletionOutcome {
    pub fn exact_k(&self) -> Option<usize> {
        match self {
            DeletionOutcome::Exact(r) => Some(r.k),
            DeletionOutcome::ExceedsBudget { .. } => None,
        }
    }
}

/// Minimum number of voters (or candidates) to delete so the residual
/// election joins the domain, with a certificate. With a budget, returns
/// `ExceedsBudget` as soon as the optimum provably exceeds it. Panics on
/// incomplete elections.
pub fn deletion_distance(
    e: &Election,
    domain: Domain,
    mode: DeletionMode,
    budget: Option<usize>,
) -> DeletionOutcome {
    assert!(e.is_complete(), "operation requires a complete election");
    let mut sets: Vec<Vec<usize>> = Vec::new();
    loop {
        let hs = match min_hitting_set(&sets, budget) {
            HsResult::Optimal(hs) => hs,
            HsResult::ExceedsBudget => {
                return DeletionOutcome::ExceedsBudget {
                    lower_bound: budget.expect("budget exceeded implies a budget") + 1,
                }
            }
        };
        let deleted: BTreeSet<usize> = hs.iter().copied().collect();
        let (residual, kept) = delete(e, &deleted, mode);
        if let Some(cert) = domain.recognize(&residual) {
            let certificate = remap_certificate(cert, &kept, mode);
            return DeletionOutcome::Exact(DeletionResult {
                domain,
                mode,
                k: deleted.len(),
                deleted,
                certificate,
            });
        }
        let witness = domain
            .config_kinds()
            .iter()
            .find_map(|&kind| find_configuration(&residual, kind))
            .expect("recognizer rejected but no forbidden configuration exists");
        let set: BTreeSet<usize> = match mode {
            DeletionMode::Voters => witness.voters.iter().map(|&v| kept.voters[v]).collect(),
            DeletionMode::Candidates => {
                witness.candidates.iter().map(|&c| kept.candidates[c]).collect()
            }
        };
        sets.push(set.into_iter().collect());
    }
}

struct Kept {
    voters: Vec<usize>,
    candidates: Vec<usize>,
}

fn delete(e: &Election, deleted: &BTreeSet<usize>, mode: DeletionMode) -> (Election, Kept) {
    let (keep_voters, keep_candidates): (Vec<usize>, Vec<usize>) = match mode {
        DeletionMode::Voters => (
            (0..e.num_voters()).filter(|v| !deleted.contains(v)).collect(),
            (0..e.num_candidates()).collect(),
        ),
        DeletionMode::Candidates => (
            (0..e.num_voters()).collect(),
            (0..e.num_candidates()).filter(|c| !deleted.contains(c)).collect(),
        ),
    };
    let kv: BTreeSet<usize> = keep_voters.iter().copied().collect();
    let kc: BTreeSet<usize> = keep_candidates.iter().copied().collect();
    let residual = e
        .restrict(Some(&kc), Some(&kv))
        .expect("hitting sets never empty the election");
    (residual, Kept { voters: keep_voters, candidates: keep_candidates })
}

fn remap_certificate(cert: Certificate, kept: &Kept, mode: DeletionMode) -> Certificate {
    match cert {
        Certificate::Axis(axis) => {
            Certificate::Axis(Axis::new(axis.order().iter().map(|&c| kept.candidates[c]).collect()))
        }
        Certificate::VoterOrder(order) => {
            Certificate::VoterOrder(order.into_iter().map(|v| kept.voters[v]).collect())
        }
        Certificate::PartitionTree(tree) => {
            fn remap(node: PartitionTree, cands: &[usize]) -> PartitionTree {
                match node {
                    PartitionTree::Leaf(c) => PartitionTree::Leaf(cands[c]),
                    PartitionTree::Node(l, r) => PartitionTree::Node(
                        Box::new(remap(*l, cands)),
                        Box::new(remap(*r, cands)),
                    ),
                }
            }
            let _ = mode;
            Certificate::PartitionTree(remap(tree, &kept.candidates))
        }
        Certificate::None => Certificate::None,
    }
}

enum HsResult {
    Optimal(Vec<usize>),
    ExceedsBudget,
}

/// Exact minimum hitting set by branch and bound with a disjoint-set
/// packing lower bound. Deterministic: elements are explored in ascending
/// order and the first best-size solution is kept.
fn min_hitting_set(sets: &[Vec<usize>], budget: Option<usize>) -> HsResult {
    if sets.is_empty() {
        return HsResult::Optimal(Vec::new());
    }
    let greedy = greedy_hitting_set(sets);
    let cap = budget.unwrap_or(usize::MAX);
    let mut best: Option<Vec<usize>> = if greedy.len() <= cap { Some(greedy) } else { None };

    let mut chosen: Vec<usize> = Vec::new();
    let mut hits: Vec<usize> = vec![0; sets.len()];
    branch(sets, cap, &mut chosen, &mut hits, &mut best);
    match best {
        Some(hs) => HsResult::Optimal(hs),
        None => HsResult::ExceedsBudget,
    }
}

fn branch(
    sets: &[Vec<usize>],
    cap: usize,
    chosen: &mut Vec<usize>,
    hits: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    let best_len = best.as_ref().map_or(usize::MAX, Vec::len);
    let limit = cap.min(best_len.saturating_sub(1));
    if chosen.len() + packing_bound(sets, hits) > limit {
        return;
    }
    // Branch on the smallest unhit set.
    let target = (0..sets.len())
        .filter(|&i| hits[i] == 0)
        .min_by_key(|&i| (sets[i].len(), i));
    let Some(target) = target else {
        let mut sol = chosen.clone();
        sol.sort_unstable();
        *best = Some(sol);
        return;
    };
    for &elem in &sets[target] {
        chosen.push(elem);
        for (i, set) in sets.iter().enumerate() {
            if set.contains(&elem) {
                hits[i] += 1;
            }
        }
        branch(sets, cap, chosen, hits, best);
        chosen.pop();
        for (i, set) in sets.iter().enumerate() {
            if set.contains(&elem) {
                hits[i] -= 1;
            }
        }
    }
}

/// Count of pairwise disjoint unhit sets: each needs its own element.
fn packing_bound(sets: &[Vec<usize>], hits: &[usize]) -> usize {
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut count = 0;
    for (i, set) in sets.iter().enumerate() {
        if hits[i] == 0 && set.iter().all(|x| !used.contains(x)) {
            used.extend(set.iter().copied());
            count += 1;
        }
    }
    count
}

fn greedy_hitting_set(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut hit = vec![false; sets.len()];
    let mut chosen = Vec::new();
    while hit.iter().any(|&h| !h) {
        let mut counts: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for (i, set) in sets.iter().enumerate() {
            if !hit[i] {
                for &x in set {
                    *counts.entry(x).or_insert(0) += 1;
                }
            }
        }
        let (&elem, _) = counts.iter().max_by_key(|&(&x, &c)| (c, std::cmp::Reverse(x))).unwrap();
        chosen.push(elem);
        for (i, set) in sets.iter().enumerate() {
            if !hit[i] && set.contains(&elem) {
                hit[i] = true;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}
