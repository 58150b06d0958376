//! Subcommand implementations.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use electra::cultures::{sample_culture, Culture};
use electra::domains::{
    aggregate_domain_report, deletion_distance, election_domain_record, DeletionMode,
    DeletionOutcome, Domain, DomainReportOptions, SpTieBreak,
};
use electra::election::{parse_election, write_election, TieBreak};
use electra::mapel::{distance_matrix, embed_map, DistanceMatrix, MapPoint};
use electra::metrics::{
    parameter_budget, pearson, similarity_summary, temporal_profile, MetricsError,
    ParameterBudget, SimilaritySummary, TemporalProfile,
};
use electra::preprocess::{complete_election, is_relevant, normalize_sample};
use electra::rules::{
    apply_rule, average_ranks, condorcet_winners, Rule, RuleOutcome,
};

use crate::common::{csv_f64, read_elections, report_error, thread_pool, write_output, Input};
use crate::{Format, Inputs};

fn tie_break(input: &Inputs) -> TieBreak {
    if input.break_ties {
        TieBreak::LowerIndexFirst
    } else {
        TieBreak::Reject
    }
}

fn read(input: &Inputs) -> Option<(Vec<Input>, rayon::ThreadPool)> {
    let pool = thread_pool(input.jobs);
    read_elections(&input.files, &pool, tie_break(input)).map(|inputs| (inputs, pool))
}

fn emit(out: Option<&Path>, content: &str) -> bool {
    match write_output(out, content) {
        Ok(()) => true,
        Err(e) => {
            report_error(out.unwrap_or_else(|| Path::new("-")), e);
            false
        }
    }
}

pub fn validate(input: &Inputs) -> bool {
    read(input).is_some()
}

pub fn complete(input: &Path, output: &Path, effort: usize, seed: u64) -> bool {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            report_error(input, e);
            return false;
        }
    };
    let election = match parse_election(&text) {
        Ok(e) => e,
        Err(e) => {
            report_error(input, e);
            return false;
        }
    };
    match complete_election(&election, effort, seed) {
        Ok(completed) => emit(Some(output), &write_election(&completed)),
        Err(e) => {
            report_error(input, e);
            false
        }
    }
}

pub fn normalize(
    input: &Inputs,
    m: usize,
    n: usize,
    count: usize,
    seed: u64,
    min_candidates: usize,
    out: &Path,
) -> bool {
    let Some((inputs, _pool)) = read(input) else {
        return false;
    };
    let eligible: Vec<&Input> = inputs
        .iter()
        .filter(|i| i.election.is_complete() && is_relevant(&i.election, min_candidates))
        .collect();
    if eligible.is_empty() {
        report_error(out, "no relevant complete election among the inputs");
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let source = eligible[rng.random_range(0..eligible.len())];
        // Per-sample seeds derive from the base seed by task index.
        let sample = match normalize_sample(&source.election, m, n, seed ^ i as u64) {
            Ok(s) => s,
            Err(e) => {
                report_error(&source.path, e);
                return false;
            }
        };
        let path = out.join(format!("normalized_{i:04}.soc"));
        if !emit(Some(&path), &write_election(&sample)) {
            return false;
        }
    }
    true
}

#[derive(Serialize)]
struct StatsRecord {
    file: String,
    m: usize,
    n: usize,
    summary: SimilaritySummary,
    budget: ParameterBudget,
    /// Positionwise distance from the identity election, the fifth
    /// similarity measure used in the correlation analysis.
    emd_from_identity: f64,
}

pub fn stats(input: &Inputs, format: &Format) -> bool {
    let Some((inputs, pool)) = read(input) else {
        return false;
    };
    let results: Vec<Result<StatsRecord, (String, MetricsError)>> = pool.install(|| {
        inputs
            .par_iter()
            .map(|i| {
                let summary = similarity_summary(&i.election)
                    .map_err(|e| (i.path.display().to_string(), e))?;
                let m = i.election.num_candidates();
                let budget = parameter_budget(&summary, m);
                let identity = electra::mapel::compass_matrix(electra::mapel::CompassSpec::Pure {
                    kind: electra::mapel::CompassKind::Identity,
                    m,
                })
                .expect("identity matrix exists for every m");
                let emd_from_identity = electra::mapel::positionwise_distance(
                    &i.election.frequency_matrix().expect("checked complete"),
                    &identity,
                )
                .expect("uniform size");
                Ok(StatsRecord {
                    file: i.id.clone(),
                    m,
                    n: i.election.num_voters(),
                    summary,
                    budget,
                    emd_from_identity,
                })
            })
            .collect()
    });
    let mut records = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err((file, e)) => {
                report_error(Path::new(&file), e);
                return false;
            }
        }
    }
    let content = if format.json {
        let mut s = String::new();
        for rec in &records {
            let _ = writeln!(s, "{}", serde_json::to_string(rec).expect("serializable"));
        }
        s
    } else {
        let mut s = String::from(
            "file,m,n,max_kt,avg_kt,disagreeing_pairs,kemeny_score,emd_from_identity,\
             two_pow_m,one53_pow_k,sixteen_pow_d,\
             log10_two_pow_m,log10_one53_pow_k,log10_sixteen_pow_d\n",
        );
        for r in &records {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.file,
                r.m,
                r.n,
                r.summary.max_kt,
                csv_f64(r.summary.avg_kt),
                r.summary.disagreeing_pairs,
                r.summary.kemeny_score,
                csv_f64(r.emd_from_identity),
                r.budget.two_pow_m.display,
                r.budget.one53_pow_k.display,
                r.budget.sixteen_pow_d.display,
                csv_f64(r.budget.two_pow_m.log10),
                csv_f64(r.budget.one53_pow_k.log10),
                csv_f64(r.budget.sixteen_pow_d.log10),
            );
        }
        s
    };
    emit(format.out.as_deref(), &content)
}

pub fn timeseries(input: &Inputs, shuffle_baseline: bool, seed: u64, out: Option<&Path>) -> bool {
    let Some((inputs, pool)) = read(input) else {
        return false;
    };
    type Row = (String, &'static str, TemporalProfile);
    let results: Vec<Result<Vec<Row>, (String, MetricsError)>> = pool.install(|| {
        inputs
            .par_iter()
            .map(|i| {
                let err = |e| (i.path.display().to_string(), e);
                let mut rows = vec![(
                    i.id.clone(),
                    "original",
                    temporal_profile(&i.election, false, seed).map_err(err)?,
                )];
                if shuffle_baseline {
                    rows.push((
                        i.id.clone(),
                        "shuffled",
                        temporal_profile(&i.election, true, seed).map_err(err)?,
                    ));
                }
                Ok(rows)
            })
            .collect()
    });
    let mut s = String::from(
        "file,variant,avg_ordering_change,max_ordering_change,ordering_change_total,\
         avg_fluctuation,kt_temporal_pcc,fluctuation_per_position\n",
    );
    for r in results {
        match r {
            Ok(rows) => {
                for (file, variant, t) in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        file,
                        variant,
                        csv_f64(t.avg_ordering_change),
                        t.max_ordering_change,
                        t.ordering_change_total,
                        csv_f64(t.avg_fluctuation),
                        t.kt_temporal_pcc.map(csv_f64).unwrap_or_default(),
                        t.fluctuation_per_position
                            .iter()
                            .map(u64::to_string)
                            .collect::<Vec<_>>()
                            .join(";"),
                    );
                }
            }
            Err((file, e)) => {
                report_error(Path::new(&file), e);
                return false;
            }
        }
    }
    emit(out, &s)
}

fn matrix_points(inputs: &[Input]) -> Option<Vec<MapPoint>> {
    let mut points = Vec::with_capacity(inputs.len());
    for i in inputs {
        match i.election.frequency_matrix() {
            Ok(matrix) => points.push(MapPoint {
                label: i.id.clone(),
                tag: Some(i.tag.clone()),
                matrix,
            }),
            Err(e) => {
                report_error(&i.path, e);
                return None;
            }
        }
    }
    Some(points)
}

fn build_distance_matrix(inputs: &[Input], compass: bool) -> Option<DistanceMatrix> {
    let points = matrix_points(inputs)?;
    match distance_matrix(&points, compass) {
        Ok(dm) => Some(dm),
        Err(e) => {
            report_error(Path::new("-"), e);
            None
        }
    }
}

pub fn map(input: &Inputs, compass: bool, iterations: usize, seed: u64, out: Option<&Path>) -> bool {
    let Some((inputs, _pool)) = read(input) else {
        return false;
    };
    let Some(dm) = build_distance_matrix(&inputs, compass) else {
        return false;
    };
    let embedded = match embed_map(&dm, iterations, seed) {
        Ok(e) => e,
        Err(e) => {
            report_error(Path::new("-"), e);
            return false;
        }
    };
    let mut s = String::from("id,x,y,dataset_tag\n");
    for (i, (x, y)) in embedded.points.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            dm.labels[i],
            csv_f64(*x),
            csv_f64(*y),
            dm.tags[i].as_deref().unwrap_or("-"),
        );
    }
    let _ = writeln!(s, "# stress,{}", csv_f64(embedded.stress));
    emit(out, &s)
}

pub fn distances(
    input: &Inputs,
    compass: bool,
    out: Option<&Path>,
    groups_out: Option<&Path>,
) -> bool {
    let Some((inputs, _pool)) = read(input) else {
        return false;
    };
    let Some(dm) = build_distance_matrix(&inputs, compass) else {
        return false;
    };
    let mut s = String::from("label");
    for label in &dm.labels {
        let _ = write!(s, ",{label}");
    }
    s.push('\n');
    for (i, row) in dm.d.iter().enumerate() {
        let _ = write!(s, "{}", dm.labels[i]);
        for &v in row {
            let _ = write!(s, ",{}", csv_f64(v));
        }
        s.push('\n');
    }
    if !emit(out, &s) {
        return false;
    }
    if let Some(path) = groups_out {
        let mut g = String::from("tag_a,tag_b,avg_distance\n");
        for (a, b, avg) in dm.group_averages() {
            let _ = writeln!(g, "{a},{b},{}", csv_f64(avg));
        }
        if !emit(Some(path), &g) {
            return false;
        }
    }
    true
}

#[derive(Serialize)]
struct DomainRecord {
    file: String,
    single_peaked: bool,
    axis: Option<Vec<usize>>,
    /// Histogram of voters' top-choice ranks along the axis, present for
    /// single-peaked elections.
    #[serde(skip_serializing_if = "Option::is_none")]
    axis_top_rank_histogram: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distinct_top_choices: Option<usize>,
    single_crossing: bool,
    voter_order: Option<Vec<usize>>,
    /// Fraction of candidate pairs changing order along the voter order,
    /// present for single-crossing elections.
    #[serde(skip_serializing_if = "Option::is_none")]
    changing_pairs_fraction: Option<f64>,
    group_separable: bool,
    partition_tree: Option<electra::domains::PartitionTree>,
    value_restricted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    distances: Option<Vec<DistanceJson>>,
}

#[derive(Serialize)]
struct DistanceJson {
    domain: Domain,
    mode: DeletionMode,
    k: Option<usize>,
    lower_bound: usize,
    deleted: Option<BTreeSet<usize>>,
}

pub fn domains(
    input: &Inputs,
    with_distances: bool,
    max_budget: Option<usize>,
    out: Option<&Path>,
) -> bool {
    let Some((inputs, pool)) = read(input) else {
        return false;
    };
    let records: Vec<DomainRecord> = pool.install(|| {
        inputs
            .par_iter()
            .map(|i| {
                let e = &i.election;
                let axis = electra::domains::detect_single_peaked(e, SpTieBreak::GreedyFixed);
                let voter_order = electra::domains::detect_single_crossing(e);
                let tree = electra::domains::detect_group_separable(e);
                let value_restricted = Domain::ValueRestricted.is_member(e);
                let distances = with_distances.then(|| {
                    let mut rows = Vec::new();
                    for domain in Domain::ALL {
                        for mode in DeletionMode::ALL {
                            let row = match deletion_distance(e, domain, mode, max_budget) {
                                DeletionOutcome::Exact(r) => DistanceJson {
                                    domain,
                                    mode,
                                    k: Some(r.k),
                                    lower_bound: r.k,
                                    deleted: Some(r.deleted),
                                },
                                DeletionOutcome::ExceedsBudget { lower_bound } => DistanceJson {
                                    domain,
                                    mode,
                                    k: None,
                                    lower_bound,
                                    deleted: None,
                                },
                            };
                            rows.push(row);
                        }
                    }
                    rows
                });
                let (axis_top_rank_histogram, distinct_top_choices) = axis
                    .as_ref()
                    .map(|a| electra::domains::axis_statistics(e, a))
                    .map_or((None, None), |(h, d)| (Some(h), Some(d)));
                let changing_pairs_fraction = voter_order
                    .as_ref()
                    .map(|o| electra::domains::changing_pairs_fraction(e, o));
                DomainRecord {
                    file: i.id.clone(),
                    single_peaked: axis.is_some(),
                    axis: axis.map(|a| a.order().to_vec()),
                    axis_top_rank_histogram,
                    distinct_top_choices,
                    single_crossing: voter_order.is_some(),
                    voter_order,
                    changing_pairs_fraction,
                    group_separable: tree.is_some(),
                    partition_tree: tree,
                    value_restricted,
                    distances,
                }
            })
            .collect()
    });
    let mut s = String::new();
    for rec in &records {
        let _ = writeln!(s, "{}", serde_json::to_string(rec).expect("serializable"));
    }
    emit(out, &s)
}

pub fn venn(input: &Inputs, max_budget: Option<usize>, format: &Format) -> bool {
    let Some((inputs, pool)) = read(input) else {
        return false;
    };
    let options = DomainReportOptions {
        candidate_budget: max_budget.or(DomainReportOptions::default().candidate_budget),
        voter_budget: max_budget.or(DomainReportOptions::default().voter_budget),
    };
    let records = pool.install(|| {
        inputs
            .par_iter()
            .map(|i| election_domain_record(&i.id, &i.election, options))
            .collect()
    });
    let report = aggregate_domain_report(records);
    let content = if format.json {
        format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
    } else {
        let mut s = String::from("mode,threshold,region,count\n");
        for v in &report.venn {
            for (region, count) in &v.regions {
                let _ = writeln!(s, "{},{},{},{}", v.mode.name(), v.threshold, region, count);
            }
        }
        for pcc in &report.distance_pcc {
            let _ = writeln!(
                s,
                "# pcc,{},{},{},{}",
                pcc.mode.name(),
                pcc.domain_a.name(),
                pcc.domain_b.name(),
                pcc.pcc.map(csv_f64).unwrap_or_default(),
            );
        }
        s
    };
    emit(format.out.as_deref(), &content)
}

struct ElectionRules {
    outcomes: Vec<RuleOutcome>,
    strong: Option<usize>,
    weak: BTreeSet<usize>,
}

#[derive(Serialize)]
struct RulesReport {
    condorcet: Vec<CondorcetRow>,
    ties: Vec<TieRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    consensus: Vec<ConsensusRow>,
}

#[derive(Serialize)]
struct CondorcetRow {
    notion: &'static str,
    admitting_fraction: f64,
    rule: Rule,
    efficiency: Option<f64>,
}

#[derive(Serialize)]
struct TieRow {
    rule: Rule,
    tied_fraction: f64,
    tied_fraction_no_strong_condorcet: Option<f64>,
}

#[derive(Serialize)]
struct ConsensusRow {
    rule_a: Rule,
    rule_b: Rule,
    measure: &'static str,
    value: f64,
}

pub fn rules(input: &Inputs, pairwise: bool, format: &Format) -> bool {
    let Some((inputs, pool)) = read(input) else {
        return false;
    };
    let per: Vec<Result<ElectionRules, (String, String)>> = pool.install(|| {
        inputs
            .par_iter()
            .map(|i| {
                let mut outcomes = Vec::with_capacity(Rule::ALL.len());
                for rule in Rule::ALL {
                    outcomes.push(
                        apply_rule(&i.election, rule)
                            .map_err(|e| (i.path.display().to_string(), e.to_string()))?,
                    );
                }
                let (strong, weak) = condorcet_winners(&i.election);
                Ok(ElectionRules { outcomes, strong, weak })
            })
            .collect()
    });
    let mut all = Vec::with_capacity(per.len());
    for r in per {
        match r {
            Ok(x) => all.push(x),
            Err((file, e)) => {
                report_error(Path::new(&file), e);
                return false;
            }
        }
    }
    let total = all.len() as f64;

    let mut condorcet = Vec::new();
    for (notion, targets) in [
        ("strong", false),
        ("weak", true),
    ] {
        let eligible: Vec<&ElectionRules> = all
            .iter()
            .filter(|x| if targets { !x.weak.is_empty() } else { x.strong.is_some() })
            .collect();
        let admitting = eligible.len() as f64 / total;
        for (ri, rule) in Rule::ALL.into_iter().enumerate() {
            let efficiency = if eligible.is_empty() {
                None
            } else {
                let hits = eligible
                    .iter()
                    .filter(|x| {
                        let winners = &x.outcomes[ri].winners;
                        if targets {
                            winners.intersection(&x.weak).next().is_some()
                        } else {
                            x.strong.is_some_and(|c| winners.contains(&c))
                        }
                    })
                    .count();
                Some(hits as f64 / eligible.len() as f64)
            };
            condorcet.push(CondorcetRow { notion, admitting_fraction: admitting, rule, efficiency });
        }
    }

    let mut ties = Vec::new();
    let no_strong: Vec<&ElectionRules> = all.iter().filter(|x| x.strong.is_none()).collect();
    for (ri, rule) in Rule::ALL.into_iter().enumerate() {
        let tied = all.iter().filter(|x| x.outcomes[ri].winners.len() >= 2).count();
        let tied_nc = no_strong.iter().filter(|x| x.outcomes[ri].winners.len() >= 2).count();
        ties.push(TieRow {
            rule,
            tied_fraction: tied as f64 / total,
            tied_fraction_no_strong_condorcet: if no_strong.is_empty() {
                None
            } else {
                Some(tied_nc as f64 / no_strong.len() as f64)
            },
        });
    }

    let mut consensus = Vec::new();
    if pairwise {
        for ai in 0..Rule::ALL.len() {
            for bi in ai + 1..Rule::ALL.len() {
                let mut lex = 0.0;
                let mut nonempty = 0.0;
                let mut normalized = 0.0;
                let mut spearman = 0.0;
                for x in &all {
                    let a = &x.outcomes[ai];
                    let b = &x.outcomes[bi];
                    if a.lex_winner == b.lex_winner {
                        lex += 1.0;
                    }
                    let inter = a.winners.intersection(&b.winners).count() as f64;
                    if inter > 0.0 {
                        nonempty += 1.0;
                    }
                    normalized += inter / a.winners.union(&b.winners).count() as f64;
                    let m = a.ranking.iter().map(Vec::len).sum::<usize>();
                    let ra = average_ranks(&a.ranking, m);
                    let rb = average_ranks(&b.ranking, m);
                    spearman += pearson(&ra, &rb).unwrap_or(0.0);
                }
                for (measure, sum) in [
                    ("lexicographic", lex),
                    ("nonempty_overlap", nonempty),
                    ("normalized_overlap", normalized),
                    ("spearman", spearman),
                ] {
                    consensus.push(ConsensusRow {
                        rule_a: Rule::ALL[ai],
                        rule_b: Rule::ALL[bi],
                        measure,
                        value: sum / total,
                    });
                }
            }
        }
    }

    let report = RulesReport { condorcet, ties, consensus };
    let content = if format.json {
        format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
    } else {
        let mut s = String::from("section,notion_or_measure,rule_a,rule_b,value\n");
        for row in &report.condorcet {
            let _ = writeln!(
                s,
                "condorcet_admitting,{},,,{}",
                row.notion,
                csv_f64(row.admitting_fraction)
            );
            let _ = writeln!(
                s,
                "condorcet_efficiency,{},{},,{}",
                row.notion,
                row.rule.name(),
                row.efficiency.map(csv_f64).unwrap_or_default()
            );
        }
        for row in &report.ties {
            let _ = writeln!(s, "ties,overall,{},,{}", row.rule.name(), csv_f64(row.tied_fraction));
            if let Some(f) = row.tied_fraction_no_strong_condorcet {
                let _ = writeln!(s, "ties,no_strong_condorcet,{},,{}", row.rule.name(), csv_f64(f));
            }
        }
        for row in &report.consensus {
            let _ = writeln!(
                s,
                "consensus,{},{},{},{}",
                row.measure,
                row.rule_a.name(),
                row.rule_b.name(),
                csv_f64(row.value)
            );
        }
        s
    };
    emit(format.out.as_deref(), &content)
}

pub fn sample(culture: &str, m: usize, n: usize, count: usize, seed: u64, out: &Path) -> bool {
    let kind: Culture = match culture.parse() {
        Ok(k) => k,
        Err(e) => {
            report_error(out, e);
            return false;
        }
    };
    for i in 0..count {
        let election = match sample_culture(kind, m, n, seed ^ i as u64) {
            Ok(e) => e,
            Err(e) => {
                report_error(out, e);
                return false;
            }
        };
        let path = out.join(format!("{}_{i:04}.soc", kind.name()));
        if !emit(Some(&path), &write_election(&election)) {
            return false;
        }
    }
    true
}
