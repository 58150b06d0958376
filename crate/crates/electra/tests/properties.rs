//! Property tests for the structural invariants: round-trips, metric laws,
//! stochasticity, and permutation invariance.

use std::collections::BTreeSet;

use proptest::prelude::*;

use electra::election::{parse_election, write_election, Election};
use electra::mapel::{compass_matrix, positionwise_distance, CompassKind, CompassSpec};
use electra::metrics::{kemeny, kendall_tau, spearman_rank};

fn complete_election(max_m: usize, max_n: usize) -> impl Strategy<Value = Election> {
    (1..=max_m).prop_flat_map(move |m| {
        prop::collection::vec(Just((0..m).collect::<Vec<usize>>()).prop_shuffle(), 1..=max_n)
            .prop_map(|votes| Election::complete(votes).unwrap())
    })
}

fn incomplete_election(max_m: usize, max_n: usize) -> impl Strategy<Value = Election> {
    (1..=max_m).prop_flat_map(move |m| {
        prop::collection::vec(
            (Just((0..m).collect::<Vec<usize>>()).prop_shuffle(), 1..=m)
                .prop_map(|(mut v, len)| {
                    v.truncate(len);
                    v
                }),
            1..=max_n,
        )
        .prop_map(move |votes| Election::incomplete(m, votes).unwrap())
    })
}

fn subset(bound: usize) -> impl Strategy<Value = BTreeSet<usize>> {
    prop::collection::btree_set(0..bound, 1..=bound)
}

proptest! {
    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_election(&text);
    }

    #[test]
    fn parser_never_panics_on_format_shaped_input(
        m in 1usize..6,
        lines in prop::collection::vec("[0-9,:{} ]{0,20}", 0..8),
    ) {
        let mut text = format!("{m}\n");
        for i in 0..m {
            text.push_str(&format!("{},c{}\n", i + 1, i));
        }
        for line in lines {
            text.push_str(&line);
            text.push('\n');
        }
        let _ = parse_election(&text);
    }

    #[test]
    fn write_parse_round_trips_complete(e in complete_election(6, 6)) {
        prop_assert_eq!(parse_election(&write_election(&e)).unwrap(), e);
    }

    #[test]
    fn write_parse_round_trips_incomplete(e in incomplete_election(6, 6)) {
        prop_assert_eq!(parse_election(&write_election(&e)).unwrap(), e);
    }

    #[test]
    fn frequency_matrix_is_doubly_stochastic(e in complete_election(8, 12)) {
        prop_assert!(e.frequency_matrix().unwrap().is_doubly_stochastic(1e-9));
    }

    #[test]
    fn kendall_tau_is_a_metric(e in complete_election(7, 3)) {
        let u = e.vote(0);
        let v = e.vote(e.num_voters().min(2) - 1);
        let w = e.vote(e.num_voters() / 2);
        let duv = kendall_tau(u, v).unwrap();
        let dvu = kendall_tau(v, u).unwrap();
        prop_assert_eq!(duv, dvu);
        prop_assert_eq!(kendall_tau(u, u).unwrap(), 0);
        prop_assert!((duv == 0) == (u == v));
        let duw = kendall_tau(u, w).unwrap();
        let dwv = kendall_tau(w, v).unwrap();
        prop_assert!(duv <= duw + dwv);
        let m = e.num_candidates() as u64;
        prop_assert!(duv <= m * (m - 1) / 2);
    }

    #[test]
    fn restrict_composes_with_intersection(
        e in complete_election(6, 6),
        raw_a in subset(6),
        raw_b in subset(6),
        raw_va in subset(6),
        raw_vb in subset(6),
    ) {
        let m = e.num_candidates();
        let n = e.num_voters();
        let a: BTreeSet<usize> = raw_a.into_iter().map(|x| x % m).collect();
        let va: BTreeSet<usize> = raw_va.into_iter().map(|x| x % n).collect();
        let first = e.restrict(Some(&a), Some(&va)).unwrap();

        // Second restriction in the reindexed space of the first.
        let b: BTreeSet<usize> =
            raw_b.into_iter().map(|x| x % first.num_candidates()).collect();
        let vb: BTreeSet<usize> =
            raw_vb.into_iter().map(|x| x % first.num_voters()).collect();
        let twice = first.restrict(Some(&b), Some(&vb)).unwrap();

        let a_sorted: Vec<usize> = a.iter().copied().collect();
        let va_sorted: Vec<usize> = va.iter().copied().collect();
        let combined_c: BTreeSet<usize> = b.iter().map(|&i| a_sorted[i]).collect();
        let combined_v: BTreeSet<usize> = vb.iter().map(|&i| va_sorted[i]).collect();
        let once = e.restrict(Some(&combined_c), Some(&combined_v)).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn positionwise_is_a_pseudometric(
        a in complete_election(5, 6),
        b in complete_election(5, 6),
        c in complete_election(5, 6),
    ) {
        // Align candidate counts by reusing the smallest m.
        let m = a.num_candidates().min(b.num_candidates()).min(c.num_candidates());
        let keep: BTreeSet<usize> = (0..m).collect();
        let fa = a.restrict(Some(&keep), None).unwrap().frequency_matrix().unwrap();
        let fb = b.restrict(Some(&keep), None).unwrap().frequency_matrix().unwrap();
        let fc = c.restrict(Some(&keep), None).unwrap().frequency_matrix().unwrap();
        let dab = positionwise_distance(&fa, &fb).unwrap();
        let dba = positionwise_distance(&fb, &fa).unwrap();
        let dac = positionwise_distance(&fa, &fc).unwrap();
        let dcb = positionwise_distance(&fc, &fb).unwrap();
        prop_assert!(positionwise_distance(&fa, &fa).unwrap().abs() < 1e-12);
        prop_assert!((dab - dba).abs() < 1e-9);
        prop_assert!(dab >= 0.0);
        prop_assert!(dab <= dac + dcb + 1e-9);
    }

    #[test]
    fn positionwise_is_permutation_invariant(
        e in complete_election(5, 6),
        other in complete_election(5, 6),
        relabel in Just((0..5usize).collect::<Vec<usize>>()).prop_shuffle(),
        reorder in Just((0..6usize).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let m = e.num_candidates().min(other.num_candidates());
        let keep: BTreeSet<usize> = (0..m).collect();
        let e = e.restrict(Some(&keep), None).unwrap();
        let other = other.restrict(Some(&keep), None).unwrap();
        let fe = e.frequency_matrix().unwrap();
        let fo = other.frequency_matrix().unwrap();
        let base = positionwise_distance(&fe, &fo).unwrap();

        let perm_m: Vec<usize> = relabel.iter().copied().filter(|&x| x < m).collect();
        let relabeled: Vec<Vec<usize>> = e
            .votes()
            .iter()
            .map(|v| v.ranking().iter().map(|&c| perm_m[c]).collect())
            .collect();
        let fr = Election::complete(relabeled).unwrap().frequency_matrix().unwrap();
        prop_assert!((positionwise_distance(&fr, &fo).unwrap() - base).abs() < 1e-9);

        let n = e.num_voters();
        let reordered: Vec<Vec<usize>> = reorder
            .iter()
            .filter(|&&i| i < n)
            .map(|&i| e.vote(i).ranking().to_vec())
            .chain((0..n).filter(|i| !reorder.contains(i)).map(|i| e.vote(i).ranking().to_vec()))
            .collect();
        let fv = Election::complete(reordered).unwrap().frequency_matrix().unwrap();
        prop_assert!((positionwise_distance(&fv, &fo).unwrap() - base).abs() < 1e-9);
    }

    #[test]
    fn kemeny_score_respects_bounds(e in complete_election(5, 6)) {
        let (score, _) = kemeny(&e).unwrap();
        let n = e.num_voters();
        let m = e.num_candidates();

        // Lower bound: every candidate pair costs at least its minority count.
        let positions = e.positions().unwrap();
        let mut lower = 0u64;
        let mut pair_sum = 0u64;
        for c in 0..m {
            for d in c + 1..m {
                let agree = positions.iter().filter(|p| p[c] < p[d]).count() as u64;
                lower += agree.min(n as u64 - agree);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                pair_sum += kendall_tau(e.vote(i), e.vote(j)).unwrap();
            }
        }
        prop_assert!(score >= lower);
        if n >= 2 {
            prop_assert!(score <= pair_sum);
        }
    }

    #[test]
    fn spearman_is_bounded_and_symmetric(e in complete_election(6, 2)) {
        prop_assume!(e.num_candidates() >= 2 && e.num_voters() >= 2);
        let r1 = e.vote(0);
        let r2 = e.vote(1);
        let s = spearman_rank(r1, r2).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
        prop_assert_eq!(spearman_rank(r2, r1).unwrap(), s);
        prop_assert_eq!(spearman_rank(r1, r1).unwrap(), 1.0);
        let rev = electra::Vote::new(r1.ranking().iter().rev().copied().collect());
        prop_assert_eq!(spearman_rank(r1, &rev).unwrap(), -1.0);
    }

    #[test]
    fn compass_paths_stay_doubly_stochastic(
        alpha in 0.0f64..=1.0,
        ai in 0usize..4,
        bi in 0usize..4,
        m in 2usize..=8,
    ) {
        let m = m * 2; // stratification needs even m
        let spec = CompassSpec::Path {
            a: CompassKind::ALL[ai],
            b: CompassKind::ALL[bi],
            alpha,
            m,
        };
        prop_assert!(compass_matrix(spec).unwrap().is_doubly_stochastic(1e-9));
    }
}
