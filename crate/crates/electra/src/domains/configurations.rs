//! Forbidden-configuration search.
//!
//! Each restricted domain is characterized by the absence of a pair of
//! small voter/candidate patterns: single-peakedness by alpha and worst,
//! single-crossingness by gamma and delta, group-separability by beta and
//! medium, and value-restriction by the value configuration alone. The
//! search returns the lexicographically first witness by (voter tuple,
//! candidate tuple), or `None` after an exhaustive scan.

use serde::Serialize;

use crate::election::Election;

use super::positions_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Best,
    Worst,
    Medium,
    Value,
}

impl ConfigKind {
    pub const ALL: [ConfigKind; 8] = [
        ConfigKind::Alpha,
        ConfigKind::Beta,
        ConfigKind::Gamma,
        ConfigKind::Delta,
        ConfigKind::Best,
        ConfigKind::Worst,
        ConfigKind::Medium,
        ConfigKind::Value,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigKind::Alpha => "alpha",
            ConfigKind::Beta => "beta",
            ConfigKind::Gamma => "gamma",
            ConfigKind::Delta => "delta",
            ConfigKind::Best => "best",
            ConfigKind::Worst => "worst",
            ConfigKind::Medium => "medium",
            ConfigKind::Value => "value",
        }
    }
}

/// Voter and candidate indices realizing a forbidden pattern. The candidate
/// tuple follows the pattern's slot order; gamma and delta tuples may repeat
/// candidates across pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenConfigurationWitness {
    pub kind: ConfigKind,
    pub voters: Vec<usize>,
    pub candidates: Vec<usize>,
}

/// Searches for the lexicographically first witness of `kind`, by voter
/// tuple then candidate tuple. Panics on incomplete elections.
pub fn find_configuration(e: &Election, kind: ConfigKind) -> Option<ForbiddenConfigurationWitness> {
    let positions = positions_of(e);
    let ctx = Ctx { m: e.num_candidates(), n: e.num_voters(), pos: &positions };
    let found = match kind {
        ConfigKind::Alpha => find_alpha(&ctx),
        ConfigKind::Beta => find_beta(&ctx),
        ConfigKind::Gamma => find_gamma(&ctx),
        ConfigKind::Delta => find_delta(&ctx),
        ConfigKind::Best | ConfigKind::Worst | ConfigKind::Medium | ConfigKind::Value => {
            find_triple_kind(&ctx, kind)
        }
    };
    found.map(|(voters, candidates)| {
        let w = ForbiddenConfigurationWitness { kind, voters, candidates };
        debug_assert!(witness_holds(e, &w));
        w
    })
}

struct Ctx<'a> {
    m: usize,
    n: usize,
    pos: &'a [Vec<usize>],
}

impl Ctx<'_> {
    #[inline]
    fn prefers(&self, v: usize, a: usize, b: usize) -> bool {
        self.pos[v][a] < self.pos[v][b]
    }
}

fn find_alpha(ctx: &Ctx) -> Option<(Vec<usize>, Vec<usize>)> {
    if ctx.m < 4 {
        return None;
    }
    for v in 0..ctx.n {
        for vp in 0..ctx.n {
            if vp == v || !alpha_feasible(ctx, v, vp) {
                continue;
            }
            for a in 0..ctx.m {
                for b in 0..ctx.m {
                    if b == a || !ctx.prefers(v, a, b) || !ctx.prefers(vp, b, a) {
                        continue;
                    }
                    for c in 0..ctx.m {
                        if c == a || c == b || !ctx.prefers(v, b, c) || !ctx.prefers(vp, c, b) {
                            continue;
                        }
                        for d in 0..ctx.m {
                            if d != a
                                && d != b
                                && d != c
                                && ctx.prefers(v, d, b)
                                && ctx.prefers(vp, d, b)
                            {
                                return Some((vec![v, vp], vec![a, b, c, d]));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// The alpha pattern around a pivot `b` needs a candidate above `b` in `v`
/// only, one above `b` in `v'` only, and one above `b` in both; those three
/// classes are pairwise disjoint, so nonemptiness suffices.
fn alpha_feasible(ctx: &Ctx, v: usize, vp: usize) -> bool {
    for b in 0..ctx.m {
        let (mut above_v, mut above_vp, mut above_both) = (false, false, false);
        for x in 0..ctx.m {
            if x == b {
                continue;
            }
            match (ctx.prefers(v, x, b), ctx.prefers(vp, x, b)) {
                (true, true) => above_both = true,
                (true, false) => above_v = true,
                (false, true) => above_vp = true,
                (false, false) => {}
            }
        }
        if above_v && above_vp && above_both {
            return true;
        }
    }
    false
}

fn find_beta(ctx: &Ctx) -> Option<(Vec<usize>, Vec<usize>)> {
    if ctx.m < 4 {
        return None;
    }
    for v in 0..ctx.n {
        for vp in 0..ctx.n {
            if vp == v || !beta_feasible(ctx, v, vp) {
                continue;
            }
            // Pattern: v: a > b > c > d; v': b > d > a > c.
            for a in 0..ctx.m {
                for b in 0..ctx.m {
                    if b == a || !ctx.prefers(v, a, b) || !ctx.prefers(vp, b, a) {
                        continue;
                    }
                    for c in 0..ctx.m {
                        if c == a || c == b || !ctx.prefers(v, b, c) || !ctx.prefers(vp, a, c) {
                            continue;
                        }
                        for d in 0..ctx.m {
                            if d != a
                                && d != b
                                && d != c
                                && ctx.prefers(v, c, d)
                                && ctx.prefers(vp, b, d)
                                && ctx.prefers(vp, d, a)
                            {
                                return Some((vec![v, vp], vec![a, b, c, d]));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn beta_feasible(ctx: &Ctx, v: usize, vp: usize) -> bool {
    for a in 0..ctx.m {
        for c in 0..ctx.m {
            if c == a || !ctx.prefers(v, a, c) || !ctx.prefers(vp, a, c) {
                continue;
            }
            // b between a and c for v, above a for v'; d below c for v,
            // above a for v'; additionally b above d in v'.
            let mut best_b = usize::MAX;
            for b in 0..ctx.m {
                if b != a
                    && b != c
                    && ctx.prefers(v, a, b)
                    && ctx.prefers(v, b, c)
                    && ctx.prefers(vp, b, a)
                {
                    best_b = best_b.min(ctx.pos[vp][b]);
                }
            }
            if best_b == usize::MAX {
                continue;
            }
            for d in 0..ctx.m {
                if d != a
                    && d != c
                    && ctx.prefers(v, c, d)
                    && ctx.prefers(vp, d, a)
                    && best_b < ctx.pos[vp][d]
                {
                    return true;
                }
            }
        }
    }
    false
}

/// Bitmasks over ordered candidate pairs, one per voter: bit `a*m + b` of
/// `straight[v]` is set when `v` prefers `a` to `b`, and of `flipped[v]`
/// when `v` prefers `b` to `a`.
struct PairMasks {
    m: usize,
    words: usize,
    straight: Vec<Vec<u64>>,
    flipped: Vec<Vec<u64>>,
}

impl PairMasks {
    fn build(ctx: &Ctx) -> PairMasks {
        let m = ctx.m;
        let words = (m * m).div_ceil(64);
        let mut straight = vec![vec![0u64; words]; ctx.n];
        let mut flipped = vec![vec![0u64; words]; ctx.n];
        for v in 0..ctx.n {
            for a in 0..m {
                for b in 0..m {
                    if a != b && ctx.prefers(v, a, b) {
                        let idx = a * m + b;
                        straight[v][idx / 64] |= 1 << (idx % 64);
                        let rev = b * m + a;
                        flipped[v][rev / 64] |= 1 << (rev % 64);
                    }
                }
            }
        }
        PairMasks { m, words, straight, flipped }
    }

    /// Lowest pair index present in the intersection of all given masks,
    /// which is the lexicographically smallest ordered pair.
    fn first_common_pair(&self, masks: &[&[u64]]) -> Option<(usize, usize)> {
        for w in 0..self.words {
            let mut x = !0u64;
            for mask in masks {
                x &= mask[w];
            }
            if x != 0 {
                let idx = w * 64 + x.trailing_zeros() as usize;
                return Some((idx / self.m, idx % self.m));
            }
        }
        None
    }
}

fn find_gamma(ctx: &Ctx) -> Option<(Vec<usize>, Vec<usize>)> {
    if ctx.m < 2 || ctx.n < 3 {
        return None;
    }
    let masks = PairMasks::build(ctx);
    for v in 0..ctx.n {
        for vp in 0..ctx.n {
            if vp == v {
                continue;
            }
            for vpp in 0..ctx.n {
                if vpp == v || vpp == vp {
                    continue;
                }
                let p1 = masks.first_common_pair(&[
                    &masks.flipped[v],
                    &masks.straight[vp],
                    &masks.straight[vpp],
                ]);
                let p2 = masks.first_common_pair(&[
                    &masks.straight[v],
                    &masks.flipped[vp],
                    &masks.straight[vpp],
                ]);
                let p3 = masks.first_common_pair(&[
                    &masks.straight[v],
                    &masks.straight[vp],
                    &masks.flipped[vpp],
                ]);
                if let (Some((a, b)), Some((c, d)), Some((e, f))) = (p1, p2, p3) {
                    return Some((vec![v, vp, vpp], vec![a, b, c, d, e, f]));
                }
            }
        }
    }
    None
}

fn find_delta(ctx: &Ctx) -> Option<(Vec<usize>, Vec<usize>)> {
    if ctx.m < 2 || ctx.n < 4 {
        return None;
    }
    if !delta_feasible(ctx) {
        return None;
    }
    let masks = PairMasks::build(ctx);
    for v in 0..ctx.n {
        for vp in 0..ctx.n {
            if vp == v {
                continue;
            }
            for vpp in 0..ctx.n {
                if vpp == v || vpp == vp {
                    continue;
                }
                let p1_partial = masks.first_common_pair(&[
                    &masks.straight[v],
                    &masks.straight[vp],
                    &masks.flipped[vpp],
                ]);
                let p2_partial = masks.first_common_pair(&[
                    &masks.straight[v],
                    &masks.flipped[vp],
                    &masks.straight[vpp],
                ]);
                if p1_partial.is_none() || p2_partial.is_none() {
                    continue;
                }
                for vppp in 0..ctx.n {
                    if vppp == v || vppp == vp || vppp == vpp {
                        continue;
                    }
                    let p1 = masks.first_common_pair(&[
                        &masks.straight[v],
                        &masks.straight[vp],
                        &masks.flipped[vpp],
                        &masks.flipped[vppp],
                    ]);
                    let p2 = masks.first_common_pair(&[
                        &masks.straight[v],
                        &masks.flipped[vp],
                        &masks.straight[vpp],
                        &masks.flipped[vppp],
                    ]);
                    if let (Some((a, b)), Some((c, d))) = (p1, p2) {
                        return Some((vec![v, vp, vpp, vppp], vec![a, b, c, d]));
                    }
                }
            }
        }
    }
    None
}

/// Delta exists iff two distinct candidate pairs induce all four
/// orientation combinations among the voters; the four cells are disjoint,
/// so they supply four distinct voters.
fn delta_feasible(ctx: &Ctx) -> bool {
    let words = ctx.n.div_ceil(64);
    let mut pairs: Vec<Vec<u64>> = Vec::new();
    for a in 0..ctx.m {
        for b in a + 1..ctx.m {
            let mut set = vec![0u64; words];
            for v in 0..ctx.n {
                if ctx.prefers(v, a, b) {
                    set[v / 64] |= 1 << (v % 64);
                }
            }
            pairs.push(set);
        }
    }
    let full_tail = if ctx.n.is_multiple_of(64) { !0u64 } else { (1u64 << (ctx.n % 64)) - 1 };
    for (i, p) in pairs.iter().enumerate() {
        for q in pairs.iter().skip(i + 1) {
            let (mut c00, mut c01, mut c10, mut c11) = (false, false, false, false);
            for w in 0..words {
                let all = if w + 1 == words { full_tail } else { !0u64 };
                c11 |= p[w] & q[w] != 0;
                c10 |= p[w] & !q[w] & all != 0;
                c01 |= !p[w] & q[w] & all != 0;
                c00 |= !p[w] & !q[w] & all != 0;
            }
            if c00 && c01 && c10 && c11 {
                return true;
            }
        }
    }
    false
}

/// Permutations of three slots, used to classify restricted vote orders.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn find_triple_kind(ctx: &Ctx, kind: ConfigKind) -> Option<(Vec<usize>, Vec<usize>)> {
    if ctx.m < 3 || ctx.n < 3 {
        return None;
    }
    // order_ids[t]: per candidate triple (lex order), the restricted order
    // id of every voter.
    let mut triples = Vec::new();
    for a in 0..ctx.m {
        for b in a + 1..ctx.m {
            for c in b + 1..ctx.m {
                triples.push([a, b, c]);
            }
        }
    }
    let order_ids: Vec<Vec<u8>> = triples
        .iter()
        .map(|t| (0..ctx.n).map(|v| order_id(ctx, v, t)).collect())
        .collect();

    // Quick absence screen: some triple must realize the pattern across all
    // voters combined before any specific voter triple can.
    let admit = admissible_combos(kind);
    let screen = triples.iter().enumerate().any(|(ti, _)| {
        let mut present = [false; 6];
        for v in 0..ctx.n {
            present[order_ids[ti][v] as usize] = true;
        }
        PERMS.iter().enumerate().any(|(o1, _)| {
            present[o1]
                && (0..6).any(|o2| {
                    present[o2] && (0..6).any(|o3| present[o3] && admit[o1][o2][o3])
                })
        })
    });
    if !screen {
        return None;
    }

    for v in 0..ctx.n {
        for vp in 0..ctx.n {
            if vp == v {
                continue;
            }
            for vpp in 0..ctx.n {
                if vpp == v || vpp == vp {
                    continue;
                }
                let admits = (0..triples.len()).any(|ti| {
                    admit[order_ids[ti][v] as usize][order_ids[ti][vp] as usize]
                        [order_ids[ti][vpp] as usize]
                });
                if !admits {
                    continue;
                }
                if let Some(cands) = triple_witness_candidates(ctx, kind, v, vp, vpp) {
                    return Some((vec![v, vp, vpp], cands));
                }
            }
        }
    }
    None
}

fn order_id(ctx: &Ctx, v: usize, triple: &[usize; 3]) -> u8 {
    let mut slots = [0usize, 1, 2];
    slots.sort_by_key(|&s| ctx.pos[v][triple[s]]);
    PERMS.iter().position(|p| *p == slots).unwrap() as u8
}

/// `admit[o1][o2][o3]`: the three restricted orders admit the pattern under
/// some assignment of the pattern's candidates to triple slots.
fn admissible_combos(kind: ConfigKind) -> [[[bool; 6]; 6]; 6] {
    let mut admit = [[[false; 6]; 6]; 6];
    for (o1, p1) in PERMS.iter().enumerate() {
        for (o2, p2) in PERMS.iter().enumerate() {
            for (o3, p3) in PERMS.iter().enumerate() {
                admit[o1][o2][o3] = PERMS.iter().any(|assign| {
                    // assign[0..3]: the slots playing x, y, z.
                    let (x, y, z) = (assign[0], assign[1], assign[2]);
                    let rank = |p: &[usize; 3], s: usize| p.iter().position(|&t| t == s).unwrap();
                    match kind {
                        ConfigKind::Best => {
                            rank(p1, x) == 0 && rank(p2, y) == 0 && rank(p3, z) == 0
                        }
                        ConfigKind::Worst => {
                            rank(p1, z) == 2 && rank(p2, y) == 2 && rank(p3, x) == 2
                        }
                        ConfigKind::Medium => {
                            rank(p1, x) == 1 && rank(p2, y) == 1 && rank(p3, z) == 1
                        }
                        ConfigKind::Value => {
                            rank(p1, x) == 0
                                && rank(p1, y) == 1
                                && rank(p2, y) == 0
                                && rank(p2, z) == 1
                                && rank(p3, z) == 0
                                && rank(p3, x) == 1
                        }
                        _ => unreachable!(),
                    }
                });
            }
        }
    }
    admit
}

fn triple_witness_candidates(
    ctx: &Ctx,
    kind: ConfigKind,
    v: usize,
    vp: usize,
    vpp: usize,
) -> Option<Vec<usize>> {
    for x in 0..ctx.m {
        for y in 0..ctx.m {
            if y == x {
                continue;
            }
            for z in 0..ctx.m {
                if z == x || z == y {
                    continue;
                }
                let ok = match kind {
                    ConfigKind::Best => {
                        ctx.prefers(v, x, y)
                            && ctx.prefers(v, x, z)
                            && ctx.prefers(vp, y, x)
                            && ctx.prefers(vp, y, z)
                            && ctx.prefers(vpp, z, x)
                            && ctx.prefers(vpp, z, y)
                    }
                    ConfigKind::Worst => {
                        ctx.prefers(v, x, z)
                            && ctx.prefers(v, y, z)
                            && ctx.prefers(vp, x, y)
                            && ctx.prefers(vp, z, y)
                            && ctx.prefers(vpp, y, x)
                            && ctx.prefers(vpp, z, x)
                    }
                    ConfigKind::Medium => {
                        let middle = |voter: usize, mid: usize, s: usize, t: usize| {
                            (ctx.prefers(voter, s, mid) && ctx.prefers(voter, mid, t))
                                || (ctx.prefers(voter, t, mid) && ctx.prefers(voter, mid, s))
                        };
                        middle(v, x, y, z) && middle(vp, y, x, z) && middle(vpp, z, x, y)
                    }
                    ConfigKind::Value => {
                        ctx.prefers(v, x, y)
                            && ctx.prefers(v, y, z)
                            && ctx.prefers(vp, y, z)
                            && ctx.prefers(vp, z, x)
                            && ctx.prefers(vpp, z, x)
                            && ctx.prefers(vpp, x, y)
                    }
                    _ => unreachable!(),
                };
                if ok {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

/// Checks a witness against its defining pattern verbatim.
pub fn witness_holds(e: &Election, w: &ForbiddenConfigurationWitness) -> bool {
    let positions = positions_of(e);
    let ctx = Ctx { m: e.num_candidates(), n: e.num_voters(), pos: &positions };
    let distinct = |xs: &[usize]| {
        xs.iter().all(|&x| x < ctx.n) && (1..xs.len()).all(|i| !xs[..i].contains(&xs[i]))
    };
    if !distinct(&w.voters) || w.candidates.iter().any(|&c| c >= ctx.m) {
        return false;
    }
    match (w.kind, &w.voters[..], &w.candidates[..]) {
        (ConfigKind::Alpha, &[v, vp], &[a, b, c, d]) => {
            [a, b, c, d].iter().collect::<std::collections::BTreeSet<_>>().len() == 4
                && ctx.prefers(v, a, b)
                && ctx.prefers(v, b, c)
                && ctx.prefers(v, d, b)
                && ctx.prefers(vp, c, b)
                && ctx.prefers(vp, b, a)
                && ctx.prefers(vp, d, b)
        }
        (ConfigKind::Beta, &[v, vp], &[a, b, c, d]) => {
            [a, b, c, d].iter().collect::<std::collections::BTreeSet<_>>().len() == 4
                && ctx.prefers(v, a, b)
                && ctx.prefers(v, b, c)
                && ctx.prefers(v, c, d)
                && ctx.prefers(vp, b, d)
                && ctx.prefers(vp, d, a)
                && ctx.prefers(vp, a, c)
        }
        (ConfigKind::Gamma, &[v, vp, vpp], &[a, b, c, d, ee, f]) => {
            ctx.prefers(v, b, a)
                && ctx.prefers(v, c, d)
                && ctx.prefers(v, ee, f)
                && ctx.prefers(vp, a, b)
                && ctx.prefers(vp, d, c)
                && ctx.prefers(vp, ee, f)
                && ctx.prefers(vpp, a, b)
                && ctx.prefers(vpp, c, d)
                && ctx.prefers(vpp, f, ee)
        }
        (ConfigKind::Delta, &[v, vp, vpp, vppp], &[a, b, c, d]) => {
            ctx.prefers(v, a, b)
                && ctx.prefers(v, c, d)
                && ctx.prefers(vp, a, b)
                && ctx.prefers(vp, d, c)
                && ctx.prefers(vpp, b, a)
                && ctx.prefers(vpp, c, d)
                && ctx.prefers(vppp, b, a)
                && ctx.prefers(vppp, d, c)
        }
        (ConfigKind::Best, &[v, vp, vpp], &[x, y, z]) => {
            ctx.prefers(v, x, y)
                && ctx.prefers(v, x, z)
                && ctx.prefers(vp, y, x)
                && ctx.prefers(vp, y, z)
                && ctx.prefers(vpp, z, x)
                && ctx.prefers(vpp, z, y)
        }
        (ConfigKind::Worst, &[v, vp, vpp], &[x, y, z]) => {
            ctx.prefers(v, x, z)
                && ctx.prefers(v, y, z)
                && ctx.prefers(vp, x, y)
                && ctx.prefers(vp, z, y)
                && ctx.prefers(vpp, y, x)
                && ctx.prefers(vpp, z, x)
        }
        (ConfigKind::Medium, &[v, vp, vpp], &[x, y, z]) => {
            let middle = |voter: usize, mid: usize, s: usize, t: usize| {
                (ctx.prefers(voter, s, mid) && ctx.prefers(voter, mid, t))
                    || (ctx.prefers(voter, t, mid) && ctx.prefers(voter, mid, s))
            };
            middle(v, x, y, z) && middle(vp, y, x, z) && middle(vpp, z, x, y)
        }
        (ConfigKind::Value, &[v, vp, vpp], &[x, y, z]) => {
            ctx.prefers(v, x, y)
                && ctx.prefers(v, y, z)
                && ctx.prefers(vp, y, z)
                && ctx.prefers(vp, z, x)
                && ctx.prefers(vpp, z, x)
                && ctx.prefers(vpp, x, y)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{detect_single_peaked, SpTieBreak};
    use crate::election::Election;

    fn three_cycle() -> Election {
        Election::complete(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
    }

    #[test]
    fn identity_election_admits_no_configuration() {
        let e = Election::complete(vec![vec![0, 1, 2, 3, 4]; 4]).unwrap();
        for kind in ConfigKind::ALL {
            assert!(find_configuration(&e, kind).is_none(), "{kind:?}");
        }
    }

    #[test]
    fn three_cycle_has_value_witness() {
        let w = find_configuration(&three_cycle(), ConfigKind::Value).unwrap();
        assert_eq!(w.voters, vec![0, 1, 2]);
        assert_eq!(w.candidates, vec![0, 1, 2]);
        assert!(witness_holds(&three_cycle(), &w));
    }

    #[test]
    fn three_cycle_has_worst_and_best_witnesses() {
        let e = three_cycle();
        for kind in [ConfigKind::Best, ConfigKind::Worst, ConfigKind::Medium] {
            let w = find_configuration(&e, kind).unwrap();
            assert!(witness_holds(&e, &w), "{kind:?}");
        }
    }

    #[test]
    fn witnesses_always_verify_on_random_elections() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..120 {
            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=6);
            let mut votes = Vec::new();
            for _ in 0..n {
                let mut v: Vec<usize> = (0..m).collect();
                v.shuffle(&mut rng);
                votes.push(v);
            }
            let e = Election::complete(votes).unwrap();
            for kind in ConfigKind::ALL {
                if let Some(w) = find_configuration(&e, kind) {
                    assert!(witness_holds(&e, &w), "{kind:?} on {:?}", e.votes());
                }
            }
        }
    }

    #[test]
    fn single_peaked_iff_no_alpha_and_no_worst() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=6);
            let mut votes = Vec::new();
            for _ in 0..n {
                let mut v: Vec<usize> = (0..m).collect();
                v.shuffle(&mut rng);
                votes.push(v);
            }
            let e = Election::complete(votes).unwrap();
            let sp = detect_single_peaked(&e, SpTieBreak::GreedyFixed).is_some();
            let clean = find_configuration(&e, ConfigKind::Alpha).is_none()
                && find_configuration(&e, ConfigKind::Worst).is_none();
            assert_eq!(sp, clean, "{:?}", e.votes());
        }
    }

    #[test]
    fn brute_force_cross_check_of_searches() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};

        // Reference search: try every voter tuple and candidate tuple.
        fn brute(e: &Election, kind: ConfigKind) -> bool {
            let n = e.num_voters();
            let m = e.num_candidates();
            let (nv, nc) = match kind {
                ConfigKind::Alpha | ConfigKind::Beta => (2, 4),
                ConfigKind::Gamma => (3, 6),
                ConfigKind::Delta => (4, 4),
                _ => (3, 3),
            };
            let mut voters = vec![0usize; nv];
            let cands = vec![0usize; nc];
            fn tuples(k: usize, bound: usize, distinct: bool, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
                if k == buf.len() {
                    return f(buf);
                }
                for x in 0..bound {
                    if distinct && buf[..k].contains(&x) {
                        continue;
                    }
                    buf[k] = x;
                    if tuples(k + 1, bound, distinct, buf, f) {
                        return true;
                    }
                }
                false
            }
            tuples(0, n, true, &mut voters, &mut |vs| {
                let vs = vs.to_vec();
                let mut inner = cands.clone();
                let distinct_cands = !matches!(kind, ConfigKind::Gamma | ConfigKind::Delta);
                tuples(0, m, distinct_cands, &mut inner, &mut |cs| {
                    let w = ForbiddenConfigurationWitness {
                        kind,
                        voters: vs.clone(),
                        candidates: cs.to_vec(),
                    };
                    witness_holds(e, &w)
                })
            })
        }

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let m = rng.random_range(2..=5);
            let n = rng.random_range(2..=5);
            let mut votes = Vec::new();
            for _ in 0..n {
                let mut v: Vec<usize> = (0..m).collect();
                v.shuffle(&mut rng);
                votes.push(v);
            }
            let e = Election::complete(votes).unwrap();
            for kind in ConfigKind::ALL {
                assert_eq!(
                    find_configuration(&e, kind).is_some(),
                    brute(&e, kind),
                    "{kind:?} on {:?}",
                    e.votes()
                );
            }
        }
    }
}
