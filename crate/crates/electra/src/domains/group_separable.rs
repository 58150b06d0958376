//! Group-separable recognition.
//!
//! A candidate set is separated by a partition when every voter ranks one
//! side entirely above the other. Any valid part must appear as a prefix or
//! suffix of every voter's restricted ranking, so it suffices to try the
//! prefixes of the first voter. In a group-separable election every subset
//! of candidates is separable, so a first valid split can be recursed on
//! without backtracking; if the recursion fails the election is not
//! group-separable.

use serde::Serialize;

use crate::election::Election;

use super::positions_of;

/// Laminar decomposition tree certifying group-separability: every internal
/// node's split is ranked contiguously one-above-the-other by all voters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PartitionTree {
    Leaf(usize),
    Node(Box<PartitionTree>, Box<PartitionTree>),
}

impl PartitionTree {
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            PartitionTree::Leaf(c) => out.push(*c),
            PartitionTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }
}

/// True when every voter ranks all of `part` above all of `rest`, or the
/// other way around.
fn separates(positions: &[Vec<usize>], part: &[usize], rest: &[usize]) -> bool {
    positions.iter().all(|pos| {
        let max_part = part.iter().map(|&c| pos[c]).max().unwrap();
        let min_part = part.iter().map(|&c| pos[c]).min().unwrap();
        let max_rest = rest.iter().map(|&c| pos[c]).max().unwrap();
        let min_rest = rest.iter().map(|&c| pos[c]).min().unwrap();
        max_part < min_rest || max_rest < min_part
    })
}

fn solve(candidates: &[usize], first_vote: &[usize], positions: &[Vec<usize>]) -> Option<PartitionTree> {
    if candidates.len() == 1 {
        return Some(PartitionTree::Leaf(candidates[0]));
    }
    // The first voter's ranking restricted to the current set.
    let restricted: Vec<usize> = first_vote
        .iter()
        .copied()
        .filter(|c| candidates.contains(c))
        .collect();
    for j in 1..restricted.len() {
        let part = &restricted[..j];
        let rest = &restricted[j..];
        if separates(positions, part, rest) {
            let left = solve(part, first_vote, positions)?;
            let right = solve(rest, first_vote, positions)?;
            return Some(PartitionTree::Node(Box::new(left), Box::new(right)));
        }
    }
    None
}

/// Finds a laminar decomposition tree certifying group-separability, or
/// `None` when the election is not group-separable. The returned tree is
/// verified before returning. Panics on incomplete elections.
pub fn detect_group_separable(e: &Election) -> Option<PartitionTree> {
    let positions = positions_of(e);
    let all: Vec<usize> = e.vote(0).ranking().to_vec();
    let tree = solve(&all, e.vote(0).ranking(), &positions)?;
    if !verify_partition_tree(e, &tree) {
        debug_assert!(false, "recursive split produced a tree that fails verification");
        return None;
    }
    Some(tree)
}

/// Independent certificate check: the leaves are exactly the candidate set
/// and every internal node's two sides are separated by all voters.
pub fn verify_partition_tree(e: &Election, tree: &PartitionTree) -> bool {
    let m = e.num_candidates();
    let leaves = tree.leaves();
    if leaves.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &c in &leaves {
        if c >= m || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    let positions = positions_of(e);
    fn check(node: &PartitionTree, positions: &[Vec<usize>]) -> bool {
        match node {
            PartitionTree::Leaf(_) => true,
            PartitionTree::Node(l, r) => {
                separates(positions, &l.leaves(), &r.leaves())
                    && check(l, positions)
                    && check(r, positions)
            }
        }
    }
    check(tree, &positions)
}
