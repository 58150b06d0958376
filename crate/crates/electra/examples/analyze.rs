//! Samples a handful of elections, then walks the main analyses: similarity
//! statistics, the map embedding, domain recognition, and rule comparison.

use electra::cultures::{sample_culture, Culture};
use electra::domains::{detect_single_peaked, SpTieBreak};
use electra::mapel::{distance_matrix, embed_map, MapPoint};
use electra::metrics::{parameter_budget, similarity_summary};
use electra::rules::{condorcet_winners, ranking_consensus, Rule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let elections: Vec<_> = (0..4)
        .map(|i| sample_culture(Culture::WalshSp, 15, 29, 42 ^ i).unwrap())
        .collect();

    for (i, e) in elections.iter().enumerate() {
        let s = similarity_summary(e)?;
        let b = parameter_budget(&s, e.num_candidates());
        println!(
            "election {i}: avg KT {:.2}, max KT {}, disagreeing pairs {}, Kemeny {}, 2^m = {}",
            s.avg_kt, s.max_kt, s.disagreeing_pairs, s.kemeny_score, b.two_pow_m.display
        );

        let axis = detect_single_peaked(e, SpTieBreak::GreedyFixed)
            .expect("samples are single-peaked by construction");
        let (strong, _) = condorcet_winners(e);
        println!(
            "  axis {:?}..., strong Condorcet winner {:?}",
            &axis.order()[..4],
            strong
        );
    }

    let points: Vec<MapPoint> = elections
        .iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(MapPoint {
                label: format!("walsh_{i}"),
                tag: Some("walsh".into()),
                matrix: e.frequency_matrix()?,
            })
        })
        .collect::<Result<_, electra::election::ElectionError>>()?;
    let dm = distance_matrix(&points, true)?;
    let map = embed_map(&dm, 1000, 7)?;
    println!("embedded {} points with stress {:.4}", map.points.len(), map.stress);

    let spearman = ranking_consensus(&elections, Rule::Borda, Rule::Copeland)?;
    println!("Borda vs Copeland mean Spearman: {spearman:.3}");
    Ok(())
}
