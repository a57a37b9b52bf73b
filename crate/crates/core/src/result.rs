use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;

/// Edit operation. `Insertion` consumes a query symbol only, `Deletion` a
/// subject symbol only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditOp {
    Match,
    Insertion,
    Deletion,
}

impl EditOp {
    pub fn letter(self) -> char {
        match self {
            EditOp::Match => 'M',
            EditOp::Insertion => 'I',
            EditOp::Deletion => 'D',
        }
    }

    pub fn consumes_query(self) -> bool {
        matches!(self, EditOp::Match | EditOp::Insertion)
    }

    pub fn consumes_subject(self) -> bool {
        matches!(self, EditOp::Match | EditOp::Deletion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditRun {
    pub op: EditOp,
    pub len: usize,
}

/// Appends `len` copies of `op`, merging with a trailing run of the same op.
pub(crate) fn push_run(ops: &mut Vec<EditRun>, op: EditOp, len: usize) {
    if len == 0 {
        return;
    }
    match ops.last_mut() {
        Some(last) if last.op == op => last.len += len,
        _ => ops.push(EditRun { op, len }),
    }
}

pub(crate) fn extend_runs(ops: &mut Vec<EditRun>, more: &[EditRun]) {
    for r in more {
        push_run(ops, r.op, r.len);
    }
}

/// Reverses a run list built back to front.
pub(crate) fn reversed_runs(ops: Vec<EditRun>) -> Vec<EditRun> {
    let mut out = Vec::with_capacity(ops.len());
    for r in ops.into_iter().rev() {
        push_run(&mut out, r.op, r.len);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub score: i32,
    /// Start coordinates; `None` when only the score was computed and the
    /// alignment type leaves the start open.
    pub q_start: Option<usize>,
    pub q_end: usize,
    pub s_start: Option<usize>,
    pub s_end: usize,
    /// Edit runs; `None` in score-only mode.
    pub ops: Option<Vec<EditRun>>,
    pub cells_computed: u64,
}

impl AlignmentResult {
    pub(crate) fn score_only(score: i32, end: (usize, usize), start: Option<(usize, usize)>, cells: u64) -> Self {
        AlignmentResult {
            score,
            q_start: start.map(|s| s.0),
            q_end: end.0,
            s_start: start.map(|s| s.1),
            s_end: end.1,
            ops: None,
            cells_computed: cells,
        }
    }

    pub(crate) fn aligned(
        score: i32,
        start: (usize, usize),
        end: (usize, usize),
        ops: Vec<EditRun>,
        cells: u64,
    ) -> Self {
        AlignmentResult {
            score,
            q_start: Some(start.0),
            q_end: end.0,
            s_start: Some(start.1),
            s_end: end.1,
            ops: Some(ops),
            cells_computed: cells,
        }
    }

    /// Re-scores the edit runs against the sequences (unpacked symbols).
    pub fn rescore(&self, query: &[u8], subject: &[u8], scheme: &ScoringScheme) -> Result<i32> {
        let ops = self
            .ops
            .as_ref()
            .ok_or_else(|| Error::InvalidOps("no edit operations recorded".into()))?;
        let (qs, ss) = match (self.q_start, self.s_start) {
            (Some(q), Some(s)) => (q, s),
            _ => return Err(Error::InvalidOps("start coordinates missing".into())),
        };
        let (score, qe, se) = rescore_ops(ops, query, subject, qs, ss, scheme)?;
        if qe != self.q_end || se != self.s_end {
            return Err(Error::InvalidOps(format!(
                "ops end at ({qe}, {se}) but result ends at ({}, {})",
                self.q_end, self.s_end
            )));
        }
        Ok(score)
    }
}

/// Scores `ops` applied from `(q_start, s_start)`; returns the score and the
/// end coordinates. Adjacent runs of the same gap op count as one gap.
pub fn rescore_ops(
    ops: &[EditRun],
    query: &[u8],
    subject: &[u8],
    q_start: usize,
    s_start: usize,
    scheme: &ScoringScheme,
) -> Result<(i32, usize, usize)> {
    let (mut i, mut j) = (q_start, s_start);
    let mut score: i64 = 0;
    let mut k = 0;
    while k < ops.len() {
        let op = ops[k].op;
        let mut len = 0;
        while k < ops.len() && ops[k].op == op {
            len += ops[k].len;
            k += 1;
        }
        match op {
            EditOp::Match => {
                if i + len > query.len() || j + len > subject.len() {
                    return Err(Error::InvalidOps("match run overruns a sequence".into()));
                }
                for d in 0..len {
                    score += scheme.substitution(query[i + d], subject[j + d]) as i64;
                }
                i += len;
                j += len;
            }
            EditOp::Insertion => {
                if i + len > query.len() {
                    return Err(Error::InvalidOps("insertion overruns the query".into()));
                }
                score -= scheme.gap_cost(len);
                i += len;
            }
            EditOp::Deletion => {
                if j + len > subject.len() {
                    return Err(Error::InvalidOps("deletion overruns the subject".into()));
                }
                score -= scheme.gap_cost(len);
                j += len;
            }
        }
    }
    Ok((score as i32, i, j))
}

/// Running optimum with the shared tie-break: higher score wins, equal scores
/// go to the smallest row, then the smallest column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Argmax {
    pub score: i32,
    pub i: usize,
    pub j: usize,
}

impl Argmax {
    pub const NONE: Argmax = Argmax {
        score: i32::MIN,
        i: usize::MAX,
        j: usize::MAX,
    };

    #[inline]
    pub fn beats(&self, score: i32, i: usize, j: usize) -> bool {
        score > self.score || (score == self.score && (i, j) < (self.i, self.j))
    }

    #[inline]
    pub fn offer(&mut self, score: i32, i: usize, j: usize) {
        if self.beats(score, i, j) {
            *self = Argmax { score, i, j };
        }
    }

    pub fn merge(&mut self, other: Argmax) {
        if other.score != i32::MIN || other.i != usize::MAX {
            self.offer(other.score, other.i, other.j);
        }
    }
}
