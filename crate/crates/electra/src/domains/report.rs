//! Aggregated membership, deletion-distance, Venn-overlap, and correlation
//! reporting over a collection of elections.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::election::Election;
use crate::metrics::{pearson, MetricsError};

use super::deletion::{deletion_distance, DeletionMode, DeletionOutcome, Domain};

/// Candidate-deletion thresholds of the Venn overlap tables.
pub const CANDIDATE_VENN_THRESHOLDS: [usize; 4] = [0, 1, 2, 3];
/// Voter-deletion thresholds of the Venn overlap tables.
pub const VOTER_VENN_THRESHOLDS: [usize; 4] = [0, 2, 4, 6];

#[derive(Debug, Clone, Copy)]
pub struct DomainReportOptions {
    /// Budget for candidate deletion distances; raised to the largest
    /// candidate Venn threshold when smaller. `None` computes exactly.
    pub candidate_budget: Option<usize>,
    /// Budget for voter deletion distances; raised to the largest voter
    /// Venn threshold when smaller. `None` computes exactly.
    pub voter_budget: Option<usize>,
}

impl Default for DomainReportOptions {
    fn default() -> Self {
        DomainReportOptions {
            candidate_budget: Some(*CANDIDATE_VENN_THRESHOLDS.last().unwrap()),
            voter_budget: Some(*VOTER_VENN_THRESHOLDS.last().unwrap()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceRecord {
    pub domain: Domain,
    pub mode: DeletionMode,
    /// Exact distance, or `None` when the budget was exceeded.
    pub k: Option<usize>,
    /// Equals `k` when exact, otherwise a proven lower bound.
    pub lower_bound: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElectionDomainRecord {
    pub id: String,
    pub single_peaked: bool,
    pub single_crossing: bool,
    pub group_separable: bool,
    pub value_restricted: bool,
    pub distances: Vec<DistanceRecord>,
}

/// Exclusive Venn region counts over (single-peaked, single-crossing,
/// group-separable) membership within a deletion-distance threshold.
#[derive(Debug, Clone, Serialize)]
pub struct VennCounts {
    pub mode: DeletionMode,
    pub threshold: usize,
    pub regions: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistancePcc {
    pub mode: DeletionMode,
    pub domain_a: Domain,
    pub domain_b: Domain,
    /// `None` when undefined (zero variance) or fewer than two elections
    /// had both distances resolved.
    pub pcc: Option<f64>,
    pub elections_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainReport {
    pub elections: Vec<ElectionDomainRecord>,
    pub venn: Vec<VennCounts>,
    pub distance_pcc: Vec<DistancePcc>,
}

const VENN_DOMAINS: [Domain; 3] =
    [Domain::SinglePeaked, Domain::SingleCrossing, Domain::GroupSeparable];

fn region_key(sp: bool, sc: bool, gs: bool) -> String {
    let mut parts = Vec::new();
    if sp {
        parts.push("sp");
    }
    if sc {
        parts.push("sc");
    }
    if gs {
        parts.push("gs");
    }
    if parts.is_empty() {
        "none".to_string()
    } else {
        parts.join("_")
    }
}

/// Memberships and deletion distances for one election, the per-item unit
/// of [`domain_report`]. Elections are independent, so callers may compute
/// records in parallel and aggregate with [`aggregate_domain_report`].
pub fn election_domain_record(
    id: &str,
    e: &Election,
    options: DomainReportOptions,
) -> ElectionDomainRecord {
    let cand_budget = options
        .candidate_budget
        .map(|b| b.max(*CANDIDATE_VENN_THRESHOLDS.last().unwrap()));
    let voter_budget = options.voter_budget.map(|b| b.max(*VOTER_VENN_THRESHOLDS.last().unwrap()));

    let mut distances = Vec::new();
    for domain in Domain::ALL {
        for mode in DeletionMode::ALL {
            let budget = match mode {
                DeletionMode::Candidates => cand_budget,
                DeletionMode::Voters => voter_budget,
            };
            let record = match deletion_distance(e, domain, mode, budget) {
                DeletionOutcome::Exact(r) => DistanceRecord {
                    domain,
                    mode,
                    k: Some(r.k),
                    lower_bound: r.k,
                },
                DeletionOutcome::ExceedsBudget { lower_bound } => DistanceRecord {
                    domain,
                    mode,
                    k: None,
                    lower_bound,
                },
            };
            distances.push(record);
        }
    }
    let distance_zero = |domain: Domain| {
        distances
            .iter()
            .any(|r| r.domain == domain && r.k == Some(0))
    };
    ElectionDomainRecord {
        id: id.to_string(),
        single_peaked: distance_zero(Domain::SinglePeaked),
        single_crossing: distance_zero(Domain::SingleCrossing),
        group_separable: distance_zero(Domain::GroupSeparable),
        value_restricted: distance_zero(Domain::ValueRestricted),
        distances,
    }
}

/// Memberships, deletion distances, Venn overlap counts at the standard
/// thresholds, and pairwise correlation of distances for a set of
/// elections. Panics when an election is incomplete.
pub fn domain_report(items: &[(String, Election)], options: DomainReportOptions) -> DomainReport {
    let elections = items
        .iter()
        .map(|(id, e)| election_domain_record(id, e, options))
        .collect();
    aggregate_domain_report(elections)
}

/// Builds the Venn tables and distance correlations from per-election
/// records.
pub fn aggregate_domain_report(elections: Vec<ElectionDomainRecord>) -> DomainReport {

    let within = |rec: &ElectionDomainRecord, domain: Domain, mode: DeletionMode, t: usize| {
        rec.distances
            .iter()
            .find(|r| r.domain == domain && r.mode == mode)
            .is_some_and(|r| r.k.is_some_and(|k| k <= t))
    };

    let mut venn = Vec::new();
    for (mode, thresholds) in [
        (DeletionMode::Candidates, CANDIDATE_VENN_THRESHOLDS.as_slice()),
        (DeletionMode::Voters, VOTER_VENN_THRESHOLDS.as_slice()),
    ] {
        for &t in thresholds {
            let mut regions: BTreeMap<String, u64> = BTreeMap::new();
            for sp in [false, true] {
                for sc in [false, true] {
                    for gs in [false, true] {
                        regions.insert(region_key(sp, sc, gs), 0);
                    }
                }
            }
            for rec in &elections {
                let key = region_key(
                    within(rec, Domain::SinglePeaked, mode, t),
                    within(rec, Domain::SingleCrossing, mode, t),
                    within(rec, Domain::GroupSeparable, mode, t),
                );
                *regions.get_mut(&key).unwrap() += 1;
            }
            venn.push(VennCounts { mode, threshold: t, regions });
        }
    }

    let mut distance_pcc = Vec::new();
    for mode in DeletionMode::ALL {
        for (i, &da) in VENN_DOMAINS.iter().enumerate() {
            for &db in &VENN_DOMAINS[i + 1..] {
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for rec in &elections {
                    let ka = rec
                        .distances
                        .iter()
                        .find(|r| r.domain == da && r.mode == mode)
                        .and_then(|r| r.k);
                    let kb = rec
                        .distances
                        .iter()
                        .find(|r| r.domain == db && r.mode == mode)
                        .and_then(|r| r.k);
                    if let (Some(a), Some(b)) = (ka, kb) {
                        xs.push(a as f64);
                        ys.push(b as f64);
                    }
                }
                let pcc = match pearson(&xs, &ys) {
                    Ok(r) => Some(r),
                    Err(MetricsError::UndefinedCorrelation { .. })
                    | Err(MetricsError::BadCorrelationInput) => None,
                    Err(other) => unreachable!("unexpected pearson error: {other}"),
                };
                distance_pcc.push(DistancePcc {
                    mode,
                    domain_a: da,
                    domain_b: db,
                    pcc,
                    elections_used: xs.len(),
                });
            }
        }
    }

    DomainReport { elections, venn, distance_pcc }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identity_inputs_fill_the_center() {
        let e = Election::complete(vec![vec![0, 1, 2]; 3]).unwrap();
        let items: Vec<(String, Election)> =
            (0..3).map(|i| (format!("e{i}"), e.clone())).collect();
        let report = domain_report(&items, DomainReportOptions::default());
        for rec in &report.elections {
            assert!(rec.single_peaked && rec.single_crossing && rec.group_separable);
            assert!(rec.value_restricted);
        }
        for v in &report.venn {
            assert_eq!(v.regions["sp_sc_gs"], 3, "{:?} t={}", v.mode, v.threshold);
        }
    }

    #[test]
    fn three_cycle_is_outside_all_domains_at_distance_zero() {
        let e = Election::complete(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        let report = domain_report(&[("c".to_string(), e)], DomainReportOptions::default());
        let rec = &report.elections[0];
        assert!(!rec.single_peaked && !rec.single_crossing && !rec.group_separable);
        assert!(!rec.value_restricted);
        let venn0 = report
            .venn
            .iter()
            .find(|v| v.mode == DeletionMode::Candidates && v.threshold == 0)
            .unwrap();
        assert_eq!(venn0.regions["none"], 1);
    }

    #[test]
    fn within_counts_are_monotone_in_threshold() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let mut items = Vec::new();
        for i in 0..6 {
            let mut votes = Vec::new();
            for _ in 0..4 {
                let mut v: Vec<usize> = (0..5).collect();
                v.shuffle(&mut rng);
                votes.push(v);
            }
            items.push((format!("e{i}"), Election::complete(votes).unwrap()));
        }
        let report = domain_report(&items, DomainReportOptions::default());
        for mode in DeletionMode::ALL {
            let mut prev = 0u64;
            let thresholds: Vec<usize> = report
                .venn
                .iter()
                .filter(|v| v.mode == mode)
                .map(|v| v.threshold)
                .collect();
            for t in thresholds {
                let v = report
                    .venn
                    .iter()
                    .find(|v| v.mode == mode && v.threshold == t)
                    .unwrap();
                // Total elections within distance t of single-peakedness.
                let total: u64 = v
                    .regions
                    .iter()
                    .filter(|(k, _)| k.contains("sp"))
                    .map(|(_, &c)| c)
                    .sum();
                assert!(total >= prev);
                prev = total;
            }
        }
    }
}
