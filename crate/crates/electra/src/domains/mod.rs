//! Restricted preference domains: recognition of single-peaked,
//! single-crossing, group-separable, and value-restricted elections,
//! forbidden-configuration search, exact deletion distances, and the
//! degeneracy statistics built on top of them.
//!
//! Recognition functions require complete elections (they panic otherwise,
//! matching the stated preconditions) and return independently verified
//! certificates: an axis, a voter order, or a partition tree.

mod configurations;
mod deletion;
mod group_separable;
mod report;
mod single_crossing;
mod single_peaked;

pub use configurations::{find_configuration, witness_holds, ConfigKind, ForbiddenConfigurationWitness};
pub use deletion::{
    deletion_distance, Certificate, DeletionMode, DeletionOutcome, DeletionResult, Domain,
};
pub use group_separable::{detect_group_separable, verify_partition_tree, PartitionTree};
pub use report::{
    aggregate_domain_report, domain_report, election_domain_record, DistancePcc, DomainReport,
    DomainReportOptions, ElectionDomainRecord, VennCounts, CANDIDATE_VENN_THRESHOLDS,
    VOTER_VENN_THRESHOLDS,
};
pub use single_crossing::{detect_single_crossing, is_single_crossing_order};
pub use single_peaked::{detect_single_peaked, is_single_peaked_with_axis, Axis, SpTieBreak};

use crate::election::Election;

pub(crate) fn positions_of(e: &Election) -> Vec<Vec<usize>> {
    e.positions().expect("operation requires a complete election")
}

/// Histogram of voters' top-choice ranks along `axis` (index = axis
/// position), plus the number of distinct top choices.
pub fn axis_statistics(e: &Election, axis: &Axis) -> (Vec<u64>, usize) {
    let m = e.num_candidates();
    assert_eq!(axis.order().len(), m, "axis must cover all candidates");
    let mut rank_of = vec![0usize; m];
    for (r, &c) in axis.order().iter().enumerate() {
        rank_of[c] = r;
    }
    let mut histogram = vec![0u64; m];
    let mut tops = vec![false; m];
    for vote in e.votes() {
        let top = vote.top_choice();
        histogram[rank_of[top]] += 1;
        tops[top] = true;
    }
    (histogram, tops.iter().filter(|&&t| t).count())
}

/// Fraction of candidate pairs whose relative order changes at least once
/// between consecutive votes along the given voter order.
pub fn changing_pairs_fraction(e: &Election, order: &[usize]) -> f64 {
    let positions = positions_of(e);
    let m = e.num_candidates();
    if m < 2 {
        return 0.0;
    }
    let mut changing = 0u64;
    for c in 0..m {
        for d in c + 1..m {
            let flips = order.windows(2).any(|w| {
                (positions[w[0]][c] < positions[w[0]][d])
                    != (positions[w[1]][c] < positions[w[1]][d])
            });
            if flips {
                changing += 1;
            }
        }
    }
    changing as f64 / (m * (m - 1) / 2) as f64
}
