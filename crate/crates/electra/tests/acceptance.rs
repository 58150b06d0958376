//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use electra::cultures::{sample_culture, Culture};
use electra::domains::{
    deletion_distance, detect_group_separable, detect_single_crossing, detect_single_peaked,
    find_configuration, ConfigKind, DeletionMode, DeletionOutcome, Domain, SpTieBreak,
};
use electra::election::{Election, Vote};
use electra::mapel::{
    compass_matrix, distance_matrix, embed_map, positionwise_distance, CompassKind, CompassSpec,
    DistanceMatrix, MapPoint,
};
use electra::metrics::{kemeny, kendall_tau, parameter_budget, similarity_summary, temporal_profile};
use electra::preprocess::complete_election;
use electra::rules::{
    apply_rule, condorcet_efficiency, condorcet_winners, winner_consensus, CondorcetNotion,
    ConsensusMeasure, Rule,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_election(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Election {
    let mut votes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<usize> = (0..m).collect();
        v.shuffle(rng);
        votes.push(v);
    }
    Election::complete(votes).unwrap()
}

fn pass(criterion: &str) {
    println!("[PASS] {criterion}");
}

/// Factorial brute-force Kemeny oracle: score every central order.
fn kemeny_brute_force(e: &Election) -> u64 {
    let m = e.num_candidates();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = u64::MAX;
    fn rec(perm: &mut Vec<usize>, k: usize, e: &Election, best: &mut u64) {
        if k == perm.len() {
            let center = Vote::new(perm.clone());
            let score: u64 = e
                .votes()
                .iter()
                .map(|v| kendall_tau(&center, v).unwrap())
                .sum();
            *best = (*best).min(score);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(perm, k + 1, e, best);
            perm.swap(k, i);
        }
    }
    rec(&mut perm, 0, e, &mut best);
    best
}

#[test]
fn criterion_01_kemeny_oracle_equivalence() {
    let start = Instant::now();
    let mut r = rng(101);
    for _ in 0..200 {
        let m = r.random_range(1..=6);
        let n = r.random_range(1..=10);
        let e = random_election(&mut r, m, n);
        let (score, ranking) = kemeny(&e).unwrap();
        let expected = kemeny_brute_force(&e);
        assert_eq!(score, expected, "{:?}", e.votes());
        let ranking_score: u64 = e
            .votes()
            .iter()
            .map(|v| kendall_tau(&ranking, v).unwrap())
            .sum();
        assert_eq!(ranking_score, score, "returned ranking is not optimal");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(&format!(
        "criterion 1: Kemeny equals factorial brute force on 200 random elections in {elapsed:?}"
    ));
}

#[test]
fn criterion_02_positionwise_diameter() {
    for m in 2..=20usize {
        let id = compass_matrix(CompassSpec::Pure { kind: CompassKind::Identity, m }).unwrap();
        let un = compass_matrix(CompassSpec::Pure { kind: CompassKind::Uniformity, m }).unwrap();
        let d = positionwise_distance(&id, &un).unwrap();
        let expected = ((m * m - 1) as f64) / 3.0;
        assert!((d - expected).abs() < 1e-9, "m={m}: {d} vs {expected}");
        if m == 15 {
            assert_eq!(format!("{d:.2}"), "74.67");
        }
    }
    pass("criterion 2: d(identity, uniformity) = (m^2-1)/3 for m in 2..=20; 74.67 at m=15");
}

#[test]
fn criterion_03_similarity_ordering_and_budget() {
    let mut r = rng(103);
    for _ in 0..1000 {
        let e = random_election(&mut r, 15, 30);
        let s = similarity_summary(&e).unwrap();
        assert!(s.avg_kt <= s.max_kt as f64 + 1e-12);
        assert!(s.max_kt <= s.disagreeing_pairs);
        assert!(s.disagreeing_pairs <= 105);
        assert!(s.kemeny_score <= 30 * s.max_kt);
        let budget = parameter_budget(&s, 15);
        assert_eq!(budget.two_pow_m.display, "32768");
    }
    pass("criterion 3: avg <= max <= disagreeing on 1000 random elections; 2^15 = 32768");
}

#[test]
fn criterion_04_domain_characterizations() {
    let mut r = rng(104);
    for _ in 0..500 {
        let m = r.random_range(1..=8);
        let n = r.random_range(1..=8);
        let e = random_election(&mut r, m, n);
        let absent = |kind| find_configuration(&e, kind).is_none();

        let sp = detect_single_peaked(&e, SpTieBreak::GreedyFixed).is_some();
        assert_eq!(sp, absent(ConfigKind::Alpha) && absent(ConfigKind::Worst));

        let sc = detect_single_crossing(&e).is_some();
        assert_eq!(sc, absent(ConfigKind::Gamma) && absent(ConfigKind::Delta));

        let gs = detect_group_separable(&e).is_some();
        assert_eq!(gs, absent(ConfigKind::Beta) && absent(ConfigKind::Medium));

        for kind in [ConfigKind::Best, ConfigKind::Worst, ConfigKind::Medium] {
            if absent(kind) {
                assert!(absent(ConfigKind::Value), "no {kind:?} must imply no value");
            }
        }
    }
    pass("criterion 4: recognizers match configuration pairs on 500 random elections");
}

/// Subset-enumeration deletion-distance oracle.
fn deletion_brute_force(e: &Election, domain: Domain, mode: DeletionMode) -> usize {
    let bound = match mode {
        DeletionMode::Voters => e.num_voters(),
        DeletionMode::Candidates => e.num_candidates(),
    };
    fn subsets(
        start: usize,
        k: usize,
        bound: usize,
        buf: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if buf.len() == k {
            return f(buf);
        }
        for x in start..bound {
            buf.push(x);
            if subsets(x + 1, k, bound, buf, f) {
                buf.pop();
                return true;
            }
            buf.pop();
        }
        false
    }
    for k in 0..bound {
        let mut buf = Vec::new();
        let found = subsets(0, k, bound, &mut buf, &mut |del| {
            let deleted: BTreeSet<usize> = del.iter().copied().collect();
            let (kc, kv): (BTreeSet<usize>, BTreeSet<usize>) = match mode {
                DeletionMode::Candidates => (
                    (0..e.num_candidates()).filter(|c| !deleted.contains(c)).collect(),
                    (0..e.num_voters()).collect(),
                ),
                DeletionMode::Voters => (
                    (0..e.num_candidates()).collect(),
                    (0..e.num_voters()).filter(|v| !deleted.contains(v)).collect(),
                ),
            };
            let residual = e.restrict(Some(&kc), Some(&kv)).unwrap();
            domain.is_member(&residual)
        });
        if found {
            return k;
        }
    }
    bound
}

#[test]
fn criterion_05_deletion_distance_exactness() {
    let mut r = rng(105);
    for _ in 0..200 {
        let m = r.random_range(2..=7);
        let n = r.random_range(2..=7);
        let e = random_election(&mut r, m, n);
        for domain in Domain::ALL {
            for mode in DeletionMode::ALL {
                let expected = deletion_brute_force(&e, domain, mode);
                match deletion_distance(&e, domain, mode, None) {
                    DeletionOutcome::Exact(res) => {
                        assert_eq!(res.k, expected, "{domain:?} {mode:?} {:?}", e.votes())
                    }
                    other => panic!("unexpected {other:?}"),
                }
                // Minimality from the other side: one less is infeasible.
                if expected > 0 {
                    match deletion_distance(&e, domain, mode, Some(expected - 1)) {
                        DeletionOutcome::ExceedsBudget { lower_bound } => {
                            assert_eq!(lower_bound, expected)
                        }
                        other => panic!("budget {} accepted: {other:?}", expected - 1),
                    }
                }
            }
        }
    }
    let cycle = Election::complete(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
    match deletion_distance(&cycle, Domain::SinglePeaked, DeletionMode::Voters, None) {
        DeletionOutcome::Exact(res) => assert_eq!(res.k, 1),
        other => panic!("unexpected {other:?}"),
    }
    pass("criterion 5: all eight deletion distances equal subset enumeration on 200 elections");
}

#[test]
fn criterion_06_median_voter_condorcet_chain() {
    let mut elections = Vec::new();
    for (i, kind) in [Culture::WalshSp, Culture::ConitzerSp].into_iter().enumerate() {
        for seed in 0..25u64 {
            for (m, n) in [(5, 5), (15, 29), (9, 15)] {
                let e = sample_culture(kind, m, n, seed * 31 + i as u64).unwrap();
                let (strong, weak) = condorcet_winners(&e);
                let strong = strong.expect("odd-voter single-peaked election lacks a strong Condorcet winner");
                assert!(weak.contains(&strong));
                let copeland = apply_rule(&e, Rule::Copeland).unwrap();
                assert!(copeland.winners.contains(&strong));
                assert_eq!(copeland.winners.len(), 1, "strong winner must be unique Copeland winner");
                elections.push(e);
            }
        }
    }
    let eff = condorcet_efficiency(&elections, Rule::Copeland, CondorcetNotion::Strong).unwrap();
    assert_eq!(eff.efficiency, 1.0);
    assert_eq!(eff.admitting_fraction, 1.0);
    pass("criterion 6: every odd-n SP sample has a strong Condorcet winner; Copeland efficiency 1.0");
}

#[test]
fn criterion_07_consensus_measure_coincidence() {
    let mut r = rng(107);
    let mut singleton_pairs = 0usize;
    for _ in 0..1000 {
        let m = r.random_range(2..=6);
        let n = r.random_range(2..=8);
        let e = random_election(&mut r, m, n);
        let outcomes: Vec<_> = Rule::ALL
            .into_iter()
            .map(|rule| apply_rule(&e, rule).unwrap())
            .collect();
        let es = [e];
        for a in 0..Rule::ALL.len() {
            for b in a + 1..Rule::ALL.len() {
                if outcomes[a].winners.len() != 1 || outcomes[b].winners.len() != 1 {
                    continue;
                }
                singleton_pairs += 1;
                let values: Vec<f64> = ConsensusMeasure::ALL
                    .into_iter()
                    .map(|measure| {
                        winner_consensus(&es, Rule::ALL[a], Rule::ALL[b], measure).unwrap()
                    })
                    .collect();
                assert_eq!(values[0], values[1]);
                assert_eq!(values[1], values[2]);
            }
        }
    }
    assert!(singleton_pairs > 1000, "only {singleton_pairs} singleton pairs seen");
    pass(&format!(
        "criterion 7: all three consensus measures coincide on {singleton_pairs} singleton-winner pairs"
    ));
}

#[test]
fn criterion_08_temporal_identity() {
    let mut r = rng(108);
    for _ in 0..200 {
        let m = r.random_range(2..=8);
        let n = r.random_range(2..=10);
        let e = random_election(&mut r, m, n);
        let t = temporal_profile(&e, false, 0).unwrap();
        let successive_kt: u64 = (0..n - 1)
            .map(|i| kendall_tau(e.vote(i), e.vote(i + 1)).unwrap())
            .sum();
        assert_eq!(t.ordering_change_total, successive_kt);
        let pairs = (m * (m - 1) / 2) as f64;
        assert!((t.avg_ordering_change * pairs - successive_kt as f64).abs() < 1e-9);
    }
    pass("criterion 8: avg ordering change times pair count equals summed successive KT");
}

#[test]
fn criterion_09_biclique_heuristic_quality() {
    let mut r = rng(109);
    let mut optimal = 0usize;
    for i in 0..100 {
        let m = r.random_range(2..=10);
        let n = r.random_range(2..=10);
        let mut votes = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v: Vec<usize> = (0..m).collect();
            v.shuffle(&mut r);
            let len = r.random_range(1..=m);
            v.truncate(len);
            votes.push(v);
        }
        let e = Election::incomplete(m, votes).unwrap();

        // Exhaustive maximum-edge-biclique oracle over candidate subsets.
        let masks: Vec<u64> = e
            .votes()
            .iter()
            .map(|v| v.ranking().iter().fold(0u64, |acc, &c| acc | 1 << c))
            .collect();
        let mut optimum = 0usize;
        for cset in 1u64..(1 << m) {
            let size = cset.count_ones() as usize;
            let cover = masks.iter().filter(|&&vm| cset & !vm == 0).count();
            optimum = optimum.max(size * cover);
        }

        let completed = complete_election(&e, 24, 1000 + i).unwrap();
        let edges = completed.num_voters() * completed.num_candidates();
        assert!(
            edges as f64 >= 0.9 * optimum as f64,
            "edges {edges} below 0.9 x optimum {optimum}"
        );
        assert!(edges <= optimum);
        if edges == optimum {
            optimal += 1;
        }
    }
    assert!(optimal >= 70, "optimum reached on only {optimal}/100");
    pass(&format!(
        "criterion 9: heuristic >= 0.9 x optimum on all 100, exactly optimal on {optimal}"
    ));
}

#[test]
fn criterion_10_embedding_sanity() {
    let d = DistanceMatrix {
        labels: vec!["a".into(), "b".into(), "c".into()],
        tags: vec![None, None, None],
        d: vec![
            vec![0.0, 3.0, 4.0],
            vec![3.0, 0.0, 5.0],
            vec![4.0, 5.0, 0.0],
        ],
    };
    let map = embed_map(&d, 1000, 20).unwrap();
    assert!(map.stress <= 0.01, "stress {}", map.stress);

    let again = embed_map(&d, 1000, 20).unwrap();
    for (p, q) in map.points.iter().zip(&again.points) {
        assert_eq!(p.0.to_bits(), q.0.to_bits());
        assert_eq!(p.1.to_bits(), q.1.to_bits());
    }
    pass(&format!(
        "criterion 10: (3,4,5) embeds with stress {:.5} <= 0.01; coordinates bit-identical",
        map.stress
    ));
}

#[test]
fn distance_matrix_and_compass_are_consistent() {
    // Supporting check used by the map pipeline: compass points keep the
    // configured diameter and the matrix stays symmetric.
    let mut r = rng(42);
    let points: Vec<MapPoint> = (0..4)
        .map(|i| MapPoint {
            label: format!("e{i}"),
            tag: Some("random".into()),
            matrix: random_election(&mut r, 6, 10).frequency_matrix().unwrap(),
        })
        .collect();
    let dm = distance_matrix(&points, true).unwrap();
    let bound = (36.0 - 1.0) / 3.0 + 1e-9;
    for i in 0..dm.len() {
        assert_eq!(dm.d[i][i], 0.0);
        for j in 0..dm.len() {
            assert!((dm.d[i][j] - dm.d[j][i]).abs() < 1e-9);
            assert!(dm.d[i][j] <= bound);
        }
    }
}
