//! Linear-space traceback by recursive midpoint splitting.
//!
//! Affine gaps use the two-state join: the optimal path crosses the middle
//! row either in H (type 1) or inside a vertical gap (type 2), in which case
//! the gap is charged one opening and the subproblems continue it for free.

use crate::engine::{score_pass, EngineTuning, PassOptions};
use crate::result::{extend_runs, push_run, rescore_ops, AlignmentResult, EditOp, EditRun};
use crate::scoring::{BorderInit, DpMode, Extract, GapModel, ScoringScheme};

use super::explicit::trace_explicit;
use super::SplitPoint;

const GLOBAL: DpMode = DpMode {
    init: BorderInit::Gap,
    floor: false,
    extract: Extract::Corner,
};

pub(crate) struct Splitter<'a> {
    pub scheme: &'a ScoringScheme,
    pub tuning: EngineTuning,
    pub threshold: usize,
    pub cells: u64,
}

impl Splitter<'_> {
    fn pass_tuning(&self, n: usize) -> EngineTuning {
        let k = self.tuning.k.min(n.div_ceil(self.tuning.p)).max(1);
        EngineTuning { k, ..self.tuning }
    }

    /// Last row of H and E for `a` against `b` with leading-gap opening `open`.
    fn last_row(&mut self, a: &[u8], b: &[u8], open: i32) -> (Vec<i32>, Vec<i32>) {
        let t = self.pass_tuning(b.len());
        let r = score_pass(
            a,
            b,
            GLOBAL,
            self.scheme,
            &t,
            PassOptions {
                left_open: Some(open),
                capture_row: true,
            },
        );
        let half = r.halves.into_iter().next().expect("one half");
        self.cells += half.cells;
        (half.row_h, half.row_e)
    }

    /// Appends an optimal global alignment of `a` and `b` to `out`. `tb` and
    /// `te` are the opening surcharges of a query gap touching the start or
    /// the end.
    pub fn diff(&mut self, a: &[u8], b: &[u8], tb: i32, te: i32, out: &mut Vec<EditRun>) {
        let (m, n) = (a.len(), b.len());
        if m == 0 {
            push_run(out, EditOp::Deletion, n);
            return;
        }
        if n == 0 {
            push_run(out, EditOp::Insertion, m);
            return;
        }
        if m <= 1 || m + n <= self.threshold {
            let t = trace_explicit(a, b, GLOBAL, self.scheme, Some(tb), te);
            self.cells += (m * n) as u64;
            extend_runs(out, &t.ops);
            return;
        }

        let mid = m / 2;
        let g = self.scheme.open_surcharge();
        let affine = self.scheme.gap_model == GapModel::Affine;
        let split = {
            let (cc, dd) = self.last_row(&a[..mid], b, tb);
            let ra: Vec<u8> = a[mid..].iter().rev().copied().collect();
            let rb: Vec<u8> = b.iter().rev().copied().collect();
            let (rr, ss) = self.last_row(&ra, &rb, te);
            let mut best = (i64::MIN, 0, false);
            for j in 0..=n {
                let t1 = cc[j] as i64 + rr[n - j] as i64;
                if t1 > best.0 {
                    best = (t1, j, false);
                }
                if affine {
                    let t2 = dd[j] as i64 + ss[n - j] as i64 + g as i64;
                    if t2 > best.0 {
                        best = (t2, j, true);
                    }
                }
            }
            SplitPoint {
                row: mid,
                col: best.1,
                in_gap: best.2,
            }
        };

        let (row, col) = (split.row, split.col);
        if split.in_gap {
            self.diff(&a[..row - 1], &b[..col], tb, 0, out);
            push_run(out, EditOp::Insertion, 2);
            self.diff(&a[row + 1..], &b[col..], 0, te, out);
        } else {
            self.diff(&a[..row], &b[..col], tb, g, out);
            self.diff(&a[row..], &b[col..], g, te, out);
        }
    }
}

/// Global alignment of unpacked symbols in linear space.
pub(crate) fn align_global(
    q: &[u8],
    s: &[u8],
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
    threshold: usize,
) -> AlignmentResult {
    let mut sp = Splitter {
        scheme,
        tuning: *tuning,
        threshold,
        cells: 0,
    };
    let g = scheme.open_surcharge();
    let mut ops = Vec::new();
    sp.diff(q, s, g, g, &mut ops);
    let (score, qe, se) = rescore_ops(&ops, q, s, 0, 0, scheme).expect("split ops consume both sequences");
    debug_assert_eq!((qe, se), (q.len(), s.len()));
    AlignmentResult::aligned(score, (0, 0), (q.len(), s.len()), ops, sp.cells)
}
