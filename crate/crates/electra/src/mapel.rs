//! The map of elections: positionwise earth mover's distance between
//! frequency matrices, compass reference elections and their convex
//! combination paths, pairwise distance matrices, and a force-directed 2-D
//! embedding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::election::FrequencyMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum MapelError {
    #[error("matrix sizes differ: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("stratification requires an even number of candidates, got {m}")]
    OddStratification { m: usize },
    #[error("path mix parameter must lie in [0,1], got {alpha}")]
    BadAlpha { alpha: f64 },
    #[error("embedding requires at least two points")]
    TooFewPoints,
    #[error("candidate count must be positive")]
    EmptyMatrix,
}

/// The four extreme reference elections anchoring the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompassKind {
    Identity,
    Uniformity,
    Antagonism,
    Stratification,
}

impl CompassKind {
    pub const ALL: [CompassKind; 4] = [
        CompassKind::Identity,
        CompassKind::Uniformity,
        CompassKind::Antagonism,
        CompassKind::Stratification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CompassKind::Identity => "identity",
            CompassKind::Uniformity => "uniformity",
            CompassKind::Antagonism => "antagonism",
            CompassKind::Stratification => "stratification",
        }
    }
}

/// A compass election or a point on the path between two of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompassSpec {
    Pure { kind: CompassKind, m: usize },
    /// Convex combination `alpha * a + (1 - alpha) * b` after aligning the
    /// columns of `b` to `a`.
    Path { a: CompassKind, b: CompassKind, alpha: f64, m: usize },
}

/// Builds the frequency matrix of a compass election or path point.
pub fn compass_matrix(spec: CompassSpec) -> Result<FrequencyMatrix, MapelError> {
    match spec {
        CompassSpec::Pure { kind, m } => pure_compass(kind, m),
        CompassSpec::Path { a, b, alpha, m } => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(MapelError::BadAlpha { alpha });
            }
            let fa = pure_compass(a, m)?;
            let fb = pure_compass(b, m)?;
            Ok(mix_aligned(&fa, &fb, alpha))
        }
    }
}

fn pure_compass(kind: CompassKind, m: usize) -> Result<FrequencyMatrix, MapelError> {
    if m == 0 {
        return Err(MapelError::EmptyMatrix);
    }
    let rows = match kind {
        CompassKind::Identity => (0..m)
            .map(|p| (0..m).map(|c| if p == c { 1.0 } else { 0.0 }).collect())
            .collect(),
        CompassKind::Uniformity => vec![vec![1.0 / m as f64; m]; m],
        CompassKind::Antagonism => (0..m)
            .map(|p| {
                (0..m)
                    .map(|c| {
                        let mut x = 0.0;
                        if p == c {
                            x += 0.5;
                        }
                        if p == m - 1 - c {
                            x += 0.5;
                        }
                        x
                    })
                    .collect()
            })
            .collect(),
        CompassKind::Stratification => {
            if !m.is_multiple_of(2) {
                return Err(MapelError::OddStratification { m });
            }
            let half = m / 2;
            (0..m)
                .map(|p| {
                    (0..m)
                        .map(|c| if (p < half) == (c < half) { 2.0 / m as f64 } else { 0.0 })
                        .collect()
                })
                .collect()
        }
    };
    Ok(FrequencyMatrix::from_rows(rows))
}

/// Aligns the columns of `b` to `a` with the optimal EMD assignment, then
/// mixes the aligned matrices. Mixing doubly stochastic matrices keeps the
/// result doubly stochastic.
fn mix_aligned(a: &FrequencyMatrix, b: &FrequencyMatrix, alpha: f64) -> FrequencyMatrix {
    let m = a.size();
    let assignment = optimal_column_assignment(a, b);
    let rows = (0..m)
        .map(|p| {
            (0..m)
                .map(|c| alpha * a.get(p, c) + (1.0 - alpha) * b.get(p, assignment[c]))
                .collect()
        })
        .collect();
    FrequencyMatrix::from_rows(rows)
}

/// Earth mover's distance between two distributions over positions with
/// unit adjacent ground distance: the summed absolute prefix-sum difference.
pub fn emd_1d(a: &[f64], b: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for (x, y) in a.iter().zip(b) {
        prefix += x - y;
        total += prefix.abs();
    }
    total
}

/// Exact minimum-cost assignment (Hungarian algorithm with potentials,
/// O(m^3)). Returns the total cost and, per row, the assigned column.
fn hungarian(cost: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = cost.len();
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[matched[j] - 1] = j - 1;
    }
    let total = (0..n).map(|i| cost[i][assign[i]]).sum();
    (total, assign)
}

fn column_cost_matrix(f: &FrequencyMatrix, g: &FrequencyMatrix) -> Vec<Vec<f64>> {
    let m = f.size();
    let f_cols: Vec<Vec<f64>> = (0..m).map(|c| f.column(c)).collect();
    let g_cols: Vec<Vec<f64>> = (0..m).map(|c| g.column(c)).collect();
    f_cols
        .iter()
        .map(|fc| g_cols.iter().map(|gc| emd_1d(fc, gc)).collect())
        .collect()
}

fn optimal_column_assignment(f: &FrequencyMatrix, g: &FrequencyMatrix) -> Vec<usize> {
    hungarian(&column_cost_matrix(f, g)).1
}

/// Positionwise distance between two frequency matrices: the minimum over
/// column bijections of the summed 1-D earth mover's distances between
/// matched columns, solved exactly as an assignment problem.
pub fn positionwise_distance(f: &FrequencyMatrix, g: &FrequencyMatrix) -> Result<f64, MapelError> {
    if f.size() != g.size() {
        return Err(MapelError::DimensionMismatch { a: f.size(), b: g.size() });
    }
    Ok(hungarian(&column_cost_matrix(f, g)).0)
}

/// A frequency matrix annotated for the distance matrix and the map.
#[derive(Debug, Clone)]
pub struct MapPoint {
    pub label: String,
    /// Dataset tag used for per-group average distances.
    pub tag: Option<String>,
    pub matrix: FrequencyMatrix,
}

/// Symmetric pairwise positionwise distances with zero diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub tags: Vec<Option<String>>,
    pub d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Average distance between every ordered pair of tags; within one tag
    /// the average runs over distinct element pairs. Tags appear in first-
    /// occurrence order.
    pub fn group_averages(&self) -> Vec<(String, String, f64)> {
        let mut tags: Vec<String> = Vec::new();
        for t in self.tags.iter().flatten() {
            if !tags.iter().any(|x| x == t) {
                tags.push(t.clone());
            }
        }
        let members: Vec<Vec<usize>> = tags
            .iter()
            .map(|t| {
                (0..self.len())
                    .filter(|&i| self.tags[i].as_deref() == Some(t.as_str()))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for (ai, a) in tags.iter().enumerate() {
            for (bi, b) in tags.iter().enumerate() {
                let (sum, count) = if ai == bi {
                    let xs = &members[ai];
                    let mut sum = 0.0;
                    let mut count = 0usize;
                    for (k, &i) in xs.iter().enumerate() {
                        for &j in &xs[k + 1..] {
                            sum += self.d[i][j];
                            count += 1;
                        }
                    }
                    (sum, count)
                } else {
                    let mut sum = 0.0;
                    let mut count = 0usize;
                    for &i in &members[ai] {
                        for &j in &members[bi] {
                            sum += self.d[i][j];
                            count += 1;
                        }
                    }
                    (sum, count)
                };
                if count > 0 {
                    out.push((a.clone(), b.clone(), sum / count as f64));
                }
            }
        }
        out
    }
}

/// Path sample points added alongside the compass anchors.
pub const PATH_ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];

/// Compass anchors plus path samples for `m` candidates. Stratification and
/// its paths are skipped for odd `m`.
pub fn compass_points(m: usize) -> Result<Vec<MapPoint>, MapelError> {
    let kinds: Vec<CompassKind> = CompassKind::ALL
        .into_iter()
        .filter(|k| !(matches!(k, CompassKind::Stratification) && !m.is_multiple_of(2)))
        .collect();
    let mut points = Vec::new();
    for &kind in &kinds {
        points.push(MapPoint {
            label: kind.name().to_string(),
            tag: Some("compass".into()),
            matrix: compass_matrix(CompassSpec::Pure { kind, m })?,
        });
    }
    for (i, &a) in kinds.iter().enumerate() {
        for &b in &kinds[i + 1..] {
            for alpha in PATH_ALPHAS {
                points.push(MapPoint {
                    label: format!("path_{}_{}_{alpha}", a.name(), b.name()),
                    tag: Some("compass_path".into()),
                    matrix: compass_matrix(CompassSpec::Path { a, b, alpha, m })?,
                });
            }
        }
    }
    Ok(points)
}

/// All pairwise positionwise distances of the given points, optionally with
/// the compass anchors and path samples appended.
pub fn distance_matrix(points: &[MapPoint], include_compass: bool) -> Result<DistanceMatrix, MapelError> {
    let mut all: Vec<MapPoint> = points.to_vec();
    if include_compass {
        let m = points.first().map(|p| p.matrix.size()).ok_or(MapelError::TooFewPoints)?;
        all.extend(compass_points(m)?);
    }
    let k = all.len();
    if let Some(bad) = all.iter().find(|p| p.matrix.size() != all[0].matrix.size()) {
        return Err(MapelError::DimensionMismatch {
            a: all[0].matrix.size(),
            b: bad.matrix.size(),
        });
    }
    let mut d = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let dist = positionwise_distance(&all[i].matrix, &all[j].matrix)?;
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    Ok(DistanceMatrix {
        labels: all.iter().map(|p| p.label.clone()).collect(),
        tags: all.iter().map(|p| p.tag.clone()).collect(),
        d,
    })
}

/// A 2-D layout of a distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddedMap {
    pub points: Vec<(f64, f64)>,
    /// Normalized stress: sqrt(sum (|p_i - p_j| - d_ij)^2 / sum d_ij^2).
    pub stress: f64,
}

pub const DEFAULT_EMBED_ITERATIONS: usize = 1000;

/// Force-directed embedding: spring forces proportional to the difference
/// between layout and target distance, plus a 1/distance repulsion that
/// cools to zero over the iteration budget. Initial positions are
/// seed-uniform in the unit square; the layout is bit-deterministic for a
/// fixed seed.
pub fn embed_map(d: &DistanceMatrix, iterations: usize, seed: u64) -> Result<EmbeddedMap, MapelError> {
    let k = d.len();
    if k < 2 {
        return Err(MapelError::TooFewPoints);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..k).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();

    let scale = d
        .d
        .iter()
        .flat_map(|row| row.iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let iterations = iterations.max(1);
    let mut disp = vec![(0.0f64, 0.0f64); k];

    for t in 0..iterations {
        let progress = t as f64 / iterations as f64;
        let alpha = 0.4 * (1.0 - progress) + 0.05;
        let repulsion = 0.05 * scale * (1.0 - progress) * (1.0 - progress);
        let cap = scale * (0.5 * (1.0 - progress) + 0.01);

        disp.fill((0.0, 0.0));
        for i in 0..k {
            for j in i + 1..k {
                let (mut dx, mut dy) = (pos[j].0 - pos[i].0, pos[j].1 - pos[i].1);
                let mut dist = (dx * dx + dy * dy).sqrt();
                if dist < 1e-12 {
                    // Deterministic nudge for coincident points.
                    let angle = (i * k + j) as f64;
                    dx = angle.cos() * 1e-9;
                    dy = angle.sin() * 1e-9;
                    dist = 1e-9;
                }
                let spring = dist - d.d[i][j];
                let fx = spring * dx / dist - repulsion * dx / (dist * dist);
                let fy = spring * dy / dist - repulsion * dy / (dist * dist);
                disp[i].0 += fx;
                disp[i].1 += fy;
                disp[j].0 -= fx;
                disp[j].1 -= fy;
            }
        }
        let eta = alpha / (k - 1) as f64;
        for i in 0..k {
            let mut sx = disp[i].0 * eta;
            let mut sy = disp[i].1 * eta;
            let len = (sx * sx + sy * sy).sqrt();
            if len > cap {
                sx *= cap / len;
                sy *= cap / len;
            }
            pos[i].0 += sx;
            pos[i].1 += sy;
        }
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let dist = (dx * dx + dy * dy).sqrt();
            num += (dist - d.d[i][j]) * (dist - d.d[i][j]);
            den += d.d[i][j] * d.d[i][j];
        }
    }
    let stress = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok(EmbeddedMap { points: pos, stress })
}
