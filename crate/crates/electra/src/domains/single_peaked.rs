//! Single-peaked recognition.
//!
//! The societal order is built from the outside in. In a single-peaked
//! election restricted to the not-yet-placed candidates, every voter's
//! last-ranked remaining candidate must sit at one of the two free ends of
//! the axis, so at most two candidates can be "currently last" and each
//! step places them at the free extremes. Both orientations are explored
//! with backtracking; placements that violate an axis constraint already
//! implied by the partial order are pruned, which keeps the search complete
//! and sound. Returned axes are re-verified against the definition.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::election::Election;

use super::positions_of;

/// A societal order: `order[i]` is the candidate at axis position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Axis(Vec<usize>);

impl Axis {
    pub fn new(order: Vec<usize>) -> Axis {
        Axis(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }
}

/// Tie-breaking policy for the axis construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpTieBreak {
    /// Deterministic insertion: prefer the top (left) free position, and
    /// among two simultaneously-last candidates put the lower index on top.
    GreedyFixed,
    /// Break placement ties uniformly at random with the given seed.
    Random(u64),
}

/// Checks a complete axis against the single-peakedness definition: along
/// the axis, every voter's preference falls strictly away from its peak in
/// both directions.
pub fn is_single_peaked_with_axis(e: &Election, axis: &Axis) -> bool {
    let m = e.num_candidates();
    if axis.0.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &c in &axis.0 {
        if c >= m || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    let positions = positions_of(e);
    for pos in &positions {
        let ranks: Vec<usize> = axis.0.iter().map(|&c| pos[c]).collect();
        let peak = (0..m).min_by_key(|&i| ranks[i]).unwrap();
        for i in 0..peak {
            if ranks[i] <= ranks[i + 1] {
                return false;
            }
        }
        for i in peak..m - 1 {
            if ranks[i] >= ranks[i + 1] {
                return false;
            }
        }
    }
    true
}

struct SpSearch {
    m: usize,
    positions: Vec<Vec<usize>>,
    rng: Option<ChaCha8Rng>,
}

#[derive(Clone)]
struct SpState {
    remaining: Vec<bool>,
    rem_count: usize,
    /// Left block, outermost first.
    left: Vec<usize>,
    /// Right block, outermost first.
    right: Vec<usize>,
    /// Per voter: best (minimum) position among placed-left candidates.
    best_left: Vec<usize>,
    best_right: Vec<usize>,
}

#[derive(Clone, Copy)]
enum Step {
    Left(usize),
    Right(usize),
    Both { left: usize, right: usize },
}

impl SpSearch {
    fn solve(&mut self, state: &SpState) -> Option<Vec<usize>> {
        if state.rem_count == 0 {
            let mut axis = state.left.clone();
            axis.extend(state.right.iter().rev());
            return Some(axis);
        }

        // Candidates ranked last (among the remaining ones) by some voter.
        let mut last_set: Vec<usize> = Vec::with_capacity(2);
        for pos in &self.positions {
            let last = (0..self.m)
                .filter(|&c| state.remaining[c])
                .max_by_key(|&c| pos[c])
                .unwrap();
            if !last_set.contains(&last) {
                last_set.push(last);
                if last_set.len() > 2 {
                    return None;
                }
            }
        }
        last_set.sort_unstable();

        let mut steps: Vec<Step> = match last_set[..] {
            [x] => vec![Step::Left(x), Step::Right(x)],
            [x, y] => vec![Step::Both { left: x, right: y }, Step::Both { left: y, right: x }],
            _ => unreachable!(),
        };
        if let Some(rng) = self.rng.as_mut() {
            steps.shuffle(rng);
        }

        for step in steps {
            let mut next = state.clone();
            let ok = match step {
                Step::Left(x) => self.place_left(&mut next, x),
                Step::Right(x) => self.place_right(&mut next, x),
                Step::Both { left, right } => {
                    self.place_left(&mut next, left) && self.place_right(&mut next, right)
                }
            };
            if !ok {
                continue;
            }
            if let Some(axis) = self.solve(&next) {
                return Some(axis);
            }
        }
        None
    }

    /// Places `x` on the innermost free slot of the left block. Any voter
    /// preferring an already-placed left candidate over `x` must, on the
    /// final axis, prefer `x` to everything to its right: all remaining
    /// candidates and the whole right block.
    fn place_left(&self, state: &mut SpState, x: usize) -> bool {
        state.remaining[x] = false;
        state.rem_count -= 1;
        for (v, pos) in self.positions.iter().enumerate() {
            if state.best_left[v] < pos[x] {
                if pos[x] > state.best_right[v] {
                    return false;
                }
                let beats_remaining = (0..self.m)
                    .filter(|&c| state.remaining[c])
                    .all(|c| pos[x] < pos[c]);
                if !beats_remaining {
                    return false;
                }
            }
        }
        for (v, pos) in self.positions.iter().enumerate() {
            state.best_left[v] = state.best_left[v].min(pos[x]);
        }
        state.left.push(x);
        true
    }

    /// Mirror of [`SpSearch::place_left`]: a voter preferring any candidate
    /// outside the right block over `y` must prefer `y` to the whole right
    /// block.
    fn place_right(&self, state: &mut SpState, y: usize) -> bool {
        state.remaining[y] = false;
        state.rem_count -= 1;
        for (v, pos) in self.positions.iter().enumerate() {
            let outside_best = (0..self.m)
                .filter(|&c| state.remaining[c])
                .map(|c| pos[c])
                .min()
                .unwrap_or(usize::MAX)
                .min(state.best_left[v]);
            if outside_best < pos[y] && pos[y] > state.best_right[v] {
                return false;
            }
        }
        for (v, pos) in self.positions.iter().enumerate() {
            state.best_right[v] = state.best_right[v].min(pos[y]);
        }
        state.right.push(y);
        true
    }
}

/// Finds a societal order certifying single-peakedness, or `None` when no
/// axis exists. The returned axis is verified against the definition before
/// returning. Panics on incomplete elections.
pub fn detect_single_peaked(e: &Election, tie_break: SpTieBreak) -> Option<Axis> {
    let positions = positions_of(e);
    let m = e.num_candidates();
    let n = e.num_voters();
    let mut search = SpSearch {
        m,
        positions,
        rng: match tie_break {
            SpTieBreak::GreedyFixed => None,
            SpTieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
    };
    let state = SpState {
        remaining: vec![true; m],
        rem_count: m,
        left: Vec::with_capacity(m),
        right: Vec::with_capacity(m),
        best_left: vec![usize::MAX; n],
        best_right: vec![usize::MAX; n],
    };
    let axis = search.solve(&state).map(Axis::new)?;
    if !is_single_peaked_with_axis(e, &axis) {
        debug_assert!(false, "search produced an axis that fails verification");
        return None;
    }
    Some(axis)
}
