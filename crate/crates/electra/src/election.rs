//! Election data model: candidates, strict-order votes, file parsing and
//! serialization, restriction, and frequency matrices.
//!
//! Candidates are identified by their 0-based index; labels are metadata
//! only. Votes are strict total orders (complete elections) or strict
//! partial lists (incomplete elections). The file format is PrefLib-style,
//! described at [`parse_election`].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// A single ballot: candidate indices from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote(Vec<usize>);

impl Vote {
    pub fn new(ranking: Vec<usize>) -> Self {
        Vote(ranking)
    }

    /// Candidate indices, position 0 = top choice.
    pub fn ranking(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top_choice(&self) -> usize {
        self.0[0]
    }

    /// True if this vote ranks `a` above `b`. Linear scan; use a position
    /// table for hot loops.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &c in &self.0 {
            if c == a {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    }
}

impl From<Vec<usize>> for Vote {
    fn from(ranking: Vec<usize>) -> Self {
        Vote(ranking)
    }
}

impl std::ops::Index<usize> for Vote {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElectionKind {
    Complete,
    Incomplete,
}

#[derive(Debug, Error, PartialEq)]
pub enum ElectionError {
    #[error("election must have at least one candidate")]
    NoCandidates,
    #[error("election must have at least one voter")]
    NoVoters,
    #[error("vote {vote} is empty")]
    EmptyVote { vote: usize },
    #[error("vote {vote} lists candidate {candidate} twice")]
    DuplicateInVote { vote: usize, candidate: usize },
    #[error("vote {vote} references candidate {candidate}, but there are only {m} candidates")]
    CandidateOutOfRange {
        vote: usize,
        candidate: usize,
        m: usize,
    },
    #[error("operation requires a complete election")]
    IncompleteElection,
    #[error("keep set references index {index}, but the bound is {bound}")]
    BadKeepIndex { index: usize, bound: usize },
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("restriction produced an election with no votes")]
    EmptyRestriction,
}

/// An election: a candidate roster plus an ordered list of votes.
///
/// Immutable after construction; all operations are pure functions, so
/// values are safely shareable across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    labels: Vec<String>,
    votes: Vec<Vote>,
    kind: ElectionKind,
}

impl Election {
    /// Builds and validates an election. The kind is inferred: complete iff
    /// every vote ranks all candidates.
    pub fn new(labels: Vec<String>, votes: Vec<Vote>) -> Result<Election, ElectionError> {
        let m = labels.len();
        if m == 0 {
            return Err(ElectionError::NoCandidates);
        }
        if votes.is_empty() {
            return Err(ElectionError::NoVoters);
        }
        let mut complete = true;
        let mut seen = vec![usize::MAX; m];
        for (vi, vote) in votes.iter().enumerate() {
            if vote.is_empty() {
                return Err(ElectionError::EmptyVote { vote: vi });
            }
            for &c in vote.ranking() {
                if c >= m {
                    return Err(ElectionError::CandidateOutOfRange {
                        vote: vi,
                        candidate: c,
                        m,
                    });
                }
                if seen[c] == vi {
                    return Err(ElectionError::DuplicateInVote {
                        vote: vi,
                        candidate: c,
                    });
                }
                seen[c] = vi;
            }
            if vote.len() != m {
                complete = false;
            }
        }
        Ok(Election {
            labels,
            votes,
            kind: if complete {
                ElectionKind::Complete
            } else {
                ElectionKind::Incomplete
            },
        })
    }

    /// Convenience constructor for complete elections with default labels.
    pub fn complete(votes: Vec<Vec<usize>>) -> Result<Election, ElectionError> {
        let m = votes.first().map_or(0, Vec::len);
        let labels = default_labels(m);
        let election = Election::new(labels, votes.into_iter().map(Vote::new).collect())?;
        if election.kind != ElectionKind::Complete {
            return Err(ElectionError::IncompleteElection);
        }
        Ok(election)
    }

    /// Convenience constructor for possibly incomplete elections over `m`
    /// candidates with default labels.
    pub fn incomplete(m: usize, votes: Vec<Vec<usize>>) -> Result<Election, ElectionError> {
        Election::new(default_labels(m), votes.into_iter().map(Vote::new).collect())
    }

    pub fn num_candidates(&self) -> usize {
        self.labels.len()
    }

    pub fn num_voters(&self) -> usize {
        self.votes.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn vote(&self, i: usize) -> &Vote {
        &self.votes[i]
    }

    pub fn kind(&self) -> ElectionKind {
        self.kind
    }

    pub fn is_complete(&self) -> bool {
        self.kind == ElectionKind::Complete
    }

    /// Position table for complete elections: `pos[v][c]` is the 0-based
    /// position of candidate `c` in vote `v`.
    pub fn positions(&self) -> Result<Vec<Vec<usize>>, ElectionError> {
        if !self.is_complete() {
            return Err(ElectionError::IncompleteElection);
        }
        let m = self.num_candidates();
        Ok(self
            .votes
            .iter()
            .map(|v| {
                let mut pos = vec![0usize; m];
                for (p, &c) in v.ranking().iter().enumerate() {
                    pos[c] = p;
                }
                pos
            })
            .collect())
    }

    /// Restricts the election to subsets of candidates and voters.
    ///
    /// Kept candidates are reindexed to `0..m'` in increasing order of their
    /// old index; the relative candidate order inside each vote and the voter
    /// order are preserved. Incomplete votes that lose all their candidates
    /// are dropped.
    pub fn restrict(
        &self,
        keep_candidates: Option<&BTreeSet<usize>>,
        keep_voters: Option<&BTreeSet<usize>>,
    ) -> Result<Election, ElectionError> {
        let m = self.num_candidates();
        let n = self.num_voters();
        if let Some(kc) = keep_candidates {
            if kc.is_empty() {
                return Err(ElectionError::EmptyKeepSet);
            }
            if let Some(&bad) = kc.iter().find(|&&c| c >= m) {
                return Err(ElectionError::BadKeepIndex { index: bad, bound: m });
            }
        }
        if let Some(kv) = keep_voters {
            if kv.is_empty() {
                return Err(ElectionError::EmptyKeepSet);
            }
            if let Some(&bad) = kv.iter().find(|&&v| v >= n) {
                return Err(ElectionError::BadKeepIndex { index: bad, bound: n });
            }
        }

        let mut remap = vec![usize::MAX; m];
        let mut labels = Vec::new();
        match keep_candidates {
            Some(kc) => {
                for (new, &old) in kc.iter().enumerate() {
                    remap[old] = new;
                    labels.push(self.labels[old].clone());
                }
            }
            None => {
                for old in 0..m {
                    remap[old] = old;
                }
                labels = self.labels.clone();
            }
        }

        let mut votes = Vec::new();
        for (vi, vote) in self.votes.iter().enumerate() {
            if let Some(kv) = keep_voters {
                if !kv.contains(&vi) {
                    continue;
                }
            }
            let ranking: Vec<usize> = vote
                .ranking()
                .iter()
                .filter(|&&c| remap[c] != usize::MAX)
                .map(|&c| remap[c])
                .collect();
            if !ranking.is_empty() {
                votes.push(Vote::new(ranking));
            }
        }
        if votes.is_empty() {
            return Err(ElectionError::EmptyRestriction);
        }
        Election::new(labels, votes)
    }

    /// Position-by-candidate frequency matrix of a complete election:
    /// entry `(p, c)` is the fraction of voters ranking candidate `c` in
    /// position `p`.
    pub fn frequency_matrix(&self) -> Result<FrequencyMatrix, ElectionError> {
        if !self.is_complete() {
            return Err(ElectionError::IncompleteElection);
        }
        let m = self.num_candidates();
        let n = self.num_voters() as f64;
        let mut data = vec![0.0f64; m * m];
        for vote in &self.votes {
            for (p, &c) in vote.ranking().iter().enumerate() {
                data[p * m + c] += 1.0;
            }
        }
        for x in &mut data {
            *x /= n;
        }
        Ok(FrequencyMatrix { m, data })
    }
}

pub(crate) fn default_labels(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("cand_{i}")).collect()
}

/// Doubly stochastic position-by-candidate matrix underlying the
/// positionwise distance. `get(p, c)` is the fraction of voters ranking
/// candidate `c` in position `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMatrix {
    m: usize,
    data: Vec<f64>,
}

impl FrequencyMatrix {
    /// Builds a matrix from row-major entries. The stochasticity invariant
    /// is the caller's responsibility; see [`FrequencyMatrix::is_doubly_stochastic`].
    pub fn from_rows(rows: Vec<Vec<f64>>) -> FrequencyMatrix {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * m);
        for row in rows {
            assert_eq!(row.len(), m, "frequency matrix must be square");
            data.extend(row);
        }
        FrequencyMatrix { m, data }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, position: usize, candidate: usize) -> f64 {
        self.data[position * self.m + candidate]
    }

    /// The distribution of positions for one candidate.
    pub fn column(&self, candidate: usize) -> Vec<f64> {
        (0..self.m).map(|p| self.get(p, candidate)).collect()
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        let m = self.m;
        for i in 0..m {
            let row: f64 = (0..m).map(|j| self.get(i, j)).sum();
            let col: f64 = (0..m).map(|j| self.get(j, i)).sum();
            if (row - 1.0).abs() > tol || (col - 1.0).abs() > tol {
                return false;
            }
            if self.data[i * m..(i + 1) * m].iter().any(|&x| !(-tol..=1.0 + tol).contains(&x)) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: duplicate candidate index {index}")]
    DuplicateCandidateIndex { line: usize, index: usize },
    #[error("line {line}: candidate index {index} out of range 1..={m}")]
    OutOfRangeIndex { line: usize, index: usize, m: usize },
    #[error("line {line}: duplicate candidate in vote (index {index})")]
    DuplicateCandidateInVote { line: usize, index: usize },
    #[error("line {line}: {what} mismatch: declared {declared}, found {found}")]
    CountMismatch {
        line: usize,
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("line {line}: malformed vote line: {reason}")]
    MalformedVote { line: usize, reason: String },
    #[error("line {line}: tied ballot; re-run with tie-breaking enabled to linearize it")]
    TiedBallot { line: usize },
    #[error("unexpected end of file after line {line}")]
    UnexpectedEof { line: usize },
    #[error(transparent)]
    Invalid(#[from] ElectionError),
}

/// Policy for linearizing tied groups in ballots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Reject tied ballots (the strict default).
    Reject,
    /// Order tied candidates by increasing index.
    LowerIndexFirst,
}

/// Parses the PrefLib-style election format:
///
/// ```text
/// # optional comment lines
/// <m>
/// <1-based index>,<label>        (m lines)
/// <n>,<sum of multiplicities>,<number of distinct vote lines>
/// <multiplicity>: <c1>,<c2>,...  (1-based candidate indices)
/// ```
///
/// Multiplicities are expanded into individual votes preserving file order.
/// The election is incomplete iff some vote omits a candidate.
pub fn parse_election(text: &str) -> Result<Election, ParseError> {
    parse_election_with_ties(text, TieBreak::Reject)
}

/// [`parse_election`] with a tie-breaking policy: vote entries of the form
/// `{c1,c2,...}` denote tied groups and are linearized per `tie_break`.
pub fn parse_election_with_ties(text: &str, tie_break: TieBreak) -> Result<Election, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last_line = 0usize;
    let mut next = |last: &mut usize| -> Result<(usize, &str), ParseError> {
        match lines.next() {
            Some((no, l)) => {
                *last = no;
                Ok((no, l))
            }
            None => Err(ParseError::UnexpectedEof { line: *last }),
        }
    };

    let (no, header) = next(&mut last_line)?;
    let m: usize = header.parse().map_err(|_| ParseError::MalformedHeader {
        line: no,
        reason: format!("expected candidate count, got {header:?}"),
    })?;
    if m == 0 {
        return Err(ParseError::MalformedHeader {
            line: no,
            reason: "candidate count must be positive".into(),
        });
    }

    let mut labels = vec![None; m];
    for _ in 0..m {
        let (no, line) = next(&mut last_line)?;
        let (idx_str, label) = line.split_once(',').ok_or_else(|| ParseError::MalformedHeader {
            line: no,
            reason: "expected `<index>,<label>`".into(),
        })?;
        let idx: usize = idx_str.trim().parse().map_err(|_| ParseError::MalformedHeader {
            line: no,
            reason: format!("bad candidate index {idx_str:?}"),
        })?;
        if idx == 0 || idx > m {
            return Err(ParseError::OutOfRangeIndex { line: no, index: idx, m });
        }
        if labels[idx - 1].is_some() {
            return Err(ParseError::DuplicateCandidateIndex { line: no, index: idx });
        }
        labels[idx - 1] = Some(label.trim().to_string());
    }
    let labels: Vec<String> = labels.into_iter().map(Option::unwrap).collect();

    let (no, counts) = next(&mut last_line)?;
    let parts: Vec<&str> = counts.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ParseError::MalformedHeader {
            line: no,
            reason: "expected `<n>,<sum>,<distinct>`".into(),
        });
    }
    let parse_count = |s: &str| -> Result<usize, ParseError> {
        s.parse().map_err(|_| ParseError::MalformedHeader {
            line: no,
            reason: format!("bad count {s:?}"),
        })
    };
    let n_decl = parse_count(parts[0])?;
    let sum_decl = parse_count(parts[1])?;
    let distinct_decl = parse_count(parts[2])?;

    let mut votes = Vec::with_capacity(n_decl);
    let mut vote_lines = 0usize;
    let mut mult_sum = 0usize;
    for (no, line) in lines {
        last_line = no;
        vote_lines += 1;
        let (mult_str, rest) = line.split_once(':').ok_or_else(|| ParseError::MalformedVote {
            line: no,
            reason: "expected `<multiplicity>: <ranking>`".into(),
        })?;
        let mult: usize = mult_str.trim().parse().map_err(|_| ParseError::MalformedVote {
            line: no,
            reason: format!("bad multiplicity {mult_str:?}"),
        })?;
        if mult == 0 {
            return Err(ParseError::MalformedVote {
                line: no,
                reason: "multiplicity must be positive".into(),
            });
        }
        let ranking = parse_ranking(rest, m, no, tie_break)?;
        if ranking.is_empty() {
            return Err(ParseError::MalformedVote {
                line: no,
                reason: "vote lists no candidates".into(),
            });
        }
        mult_sum += mult;
        for _ in 0..mult {
            votes.push(Vote::new(ranking.clone()));
        }
    }

    if mult_sum != sum_decl {
        return Err(ParseError::CountMismatch {
            line: last_line,
            what: "vote multiplicity sum",
            declared: sum_decl,
            found: mult_sum,
        });
    }
    if votes.len() != n_decl {
        return Err(ParseError::CountMismatch {
            line: last_line,
            what: "voter count",
            declared: n_decl,
            found: votes.len(),
        });
    }
    if vote_lines != distinct_decl {
        return Err(ParseError::CountMismatch {
            line: last_line,
            what: "distinct vote line count",
            declared: distinct_decl,
            found: vote_lines,
        });
    }

    Ok(Election::new(labels, votes)?)
}

fn parse_ranking(
    rest: &str,
    m: usize,
    line: usize,
    tie_break: TieBreak,
) -> Result<Vec<usize>, ParseError> {
    let mut ranking = Vec::new();
    let mut seen = vec![false; m];
    let mut push = |idx: usize, ranking: &mut Vec<usize>| -> Result<(), ParseError> {
        if idx == 0 || idx > m {
            return Err(ParseError::OutOfRangeIndex { line, index: idx, m });
        }
        if seen[idx - 1] {
            return Err(ParseError::DuplicateCandidateInVote { line, index: idx });
        }
        seen[idx - 1] = true;
        ranking.push(idx - 1);
        Ok(())
    };
    let parse_idx = |tok: &str| -> Result<usize, ParseError> {
        tok.trim().parse().map_err(|_| ParseError::MalformedVote {
            line,
            reason: format!("bad candidate index {tok:?}"),
        })
    };

    let mut chars = rest.char_indices().peekable();
    let bytes = rest;
    while let Some(&(i, ch)) = chars.peek() {
        match ch {
            ' ' | '\t' | ',' => {
                chars.next();
            }
            '{' => {
                let close = bytes[i..].find('}').ok_or(ParseError::MalformedVote {
                    line,
                    reason: "unclosed tied group".into(),
                })? + i;
                if tie_break == TieBreak::Reject {
                    return Err(ParseError::TiedBallot { line });
                }
                let mut group = Vec::new();
                for tok in bytes[i + 1..close].split(',') {
                    if tok.trim().is_empty() {
                        continue;
                    }
                    group.push(parse_idx(tok)?);
                }
                group.sort_unstable();
                for idx in group {
                    push(idx, &mut ranking)?;
                }
                while matches!(chars.peek(), Some(&(j, _)) if j <= close) {
                    chars.next();
                }
            }
            _ => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c == ',' || c == '{' {
                        break;
                    }
                    end = j + c.len_utf8();
                    chars.next();
                }
                let tok = &bytes[i..end];
                if !tok.trim().is_empty() {
                    push(parse_idx(tok)?, &mut ranking)?;
                }
            }
        }
    }
    Ok(ranking)
}

/// Serializes an election in the format read by [`parse_election`].
/// Runs of equal consecutive votes are merged into one multiplicity line;
/// empty labels are emitted as `cand_<index>`.
pub fn write_election(e: &Election) -> String {
    let m = e.num_candidates();
    let n = e.num_voters();
    let mut out = String::new();
    let _ = writeln!(out, "{m}");
    for (i, label) in e.labels().iter().enumerate() {
        if label.is_empty() {
            let _ = writeln!(out, "{},cand_{}", i + 1, i);
        } else {
            let _ = writeln!(out, "{},{}", i + 1, label);
        }
    }

    let mut lines: Vec<(usize, &Vote)> = Vec::new();
    for vote in e.votes() {
        match lines.last_mut() {
            Some((mult, prev)) if *prev == vote => *mult += 1,
            _ => lines.push((1, vote)),
        }
    }
    let _ = writeln!(out, "{n},{n},{}", lines.len());
    for (mult, vote) in lines {
        let ranking = vote
            .ranking()
            .iter()
            .map(|c| (c + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "{mult}: {ranking}");
    }
    out
}
