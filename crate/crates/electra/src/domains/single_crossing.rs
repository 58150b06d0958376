//! Single-crossing recognition.
//!
//! Along a single-crossing voter order every candidate pair flips at most
//! once, so the set of voters disagreeing with the leftmost voter on any
//! pair forms a suffix. Hence KT-distances to the leftmost voter are
//! non-decreasing along the order, and voters at equal distance cast
//! identical votes. Recognition therefore tries every voter as the
//! leftmost anchor, sorts by KT-distance to it, and verifies the sorted
//! order; some anchor succeeds iff a single-crossing order exists.

use crate::election::Election;
use crate::metrics::kendall_tau;

use super::positions_of;

/// Checks that every candidate pair's relative order changes at most once
/// along the given voter order.
pub fn is_single_crossing_order(e: &Election, order: &[usize]) -> bool {
    let m = e.num_candidates();
    let n = e.num_voters();
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    let positions = positions_of(e);
    for c in 0..m {
        for d in c + 1..m {
            let mut flips = 0;
            for w in order.windows(2) {
                let before = positions[w[0]][c] < positions[w[0]][d];
                let after = positions[w[1]][c] < positions[w[1]][d];
                if before != after {
                    flips += 1;
                    if flips > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Finds a voter order under which every candidate pair's order changes at
/// most once, or `None` when no such order exists. The returned order is
/// verified before returning. Panics on incomplete elections.
pub fn detect_single_crossing(e: &Election) -> Option<Vec<usize>> {
    assert!(e.is_complete(), "operation requires a complete election");
    let n = e.num_voters();
    if n <= 2 {
        return Some((0..n).collect());
    }
    for anchor in 0..n {
        let mut order: Vec<usize> = (0..n).collect();
        let dist: Vec<u64> = (0..n)
            .map(|v| kendall_tau(e.vote(anchor), e.vote(v)).expect("uniform candidate set"))
            .collect();
        order.sort_by_key(|&v| (dist[v], v));
        if is_single_crossing_order(e, &order) {
            return Some(order);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Election;

    fn brute_force_sc(e: &Election) -> bool {
        let n = e.num_voters();
        let mut order: Vec<usize> = (0..n).collect();
        fn rec(order: &mut Vec<usize>, k: usize, e: &Election) -> bool {
            if k == order.len() {
                return is_single_crossing_order(e, order);
            }
            for i in k..order.len() {
                order.swap(k, i);
                if rec(order, k + 1, e) {
                    order.swap(k, i);
                    return true;
                }
                order.swap(k, i);
            }
            false
        }
        rec(&mut order, 0, e)
    }

    #[test]
    fn tiny_elections_are_single_crossing() {
        let e = Election::complete(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(detect_single_crossing(&e), Some(vec![0, 1]));
    }

    #[test]
    fn identity_election_is_single_crossing() {
        let e = Election::complete(vec![vec![1, 0, 2]; 4]).unwrap();
        let order = detect_single_crossing(&e).unwrap();
        assert!(is_single_crossing_order(&e, &order));
    }

    #[test]
    fn three_cycle_is_not_single_crossing() {
        let e = Election::complete(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert!(!brute_force_sc(&e));
        assert_eq!(detect_single_crossing(&e), None);
    }

    #[test]
    fn matches_voter_order_brute_force_on_small_instances() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.random_range(2..=4);
            let n = rng.random_range(3..=5);
            let mut votes = Vec::new();
            for _ in 0..n {
                let mut v: Vec<usize> = (0..m).collect();
                v.shuffle(&mut rng);
                votes.push(v);
            }
            let e = Election::complete(votes).unwrap();
            let expected = brute_force_sc(&e);
            let got = detect_single_crossing(&e);
            assert_eq!(got.is_some(), expected, "{:?}", e.votes());
            if let Some(order) = got {
                assert!(is_single_crossing_order(&e, &order));
            }
        }
    }
}
