use crate::error::{Error, Result};
use crate::result::{push_run, reversed_runs, AlignmentResult, Argmax, EditOp, EditRun};
use crate::scoring::{validate_config, AlignConfig, BorderInit, DpMode, Extract, GapModel, ScoringScheme, NEG_INF};
use crate::seq::Sequence;

pub const DEFAULT_EXPLICIT_THRESHOLD: usize = 128;

const FROM_DIAG: u8 = 0;
const FROM_E: u8 = 1;
const FROM_F: u8 = 2;
const STOP: u8 = 3;
const E_EXTENDS: u8 = 4;
const F_EXTENDS: u8 = 8;

/// Per-cell origin codes, two cells per byte.
///
/// Bits 0-1 give the origin of H (diagonal, vertical gap, horizontal gap or
/// stop); bit 2 is set when E extends the gap above, bit 3 when F extends the
/// gap to the left.
#[derive(Debug, Clone)]
pub struct PredecessorMatrix {
    bits: Vec<u8>,
    n: usize,
}

impl PredecessorMatrix {
    pub fn new(m: usize, n: usize) -> Self {
        PredecessorMatrix {
            bits: vec![0; ((m + 1) * (n + 1)).div_ceil(2)],
            n,
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, code: u8) {
        let x = self.idx(i, j);
        let shift = (x & 1) * 4;
        self.bits[x / 2] = (self.bits[x / 2] & !(0xf << shift)) | ((code & 0xf) << shift);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        let x = self.idx(i, j);
        (self.bits[x / 2] >> ((x & 1) * 4)) & 0xf
    }

    pub fn bytes(&self) -> usize {
        self.bits.len()
    }
}

pub(crate) struct Traced {
    pub score: i32,
    pub start: (usize, usize),
    pub end: (usize, usize),
    pub ops: Vec<EditRun>,
}

/// Fills `mode` with a predecessor matrix and traces the optimum back.
///
/// `left_open` replaces the opening surcharge of a leading query gap and
/// `end_open` that of a trailing one (corner extraction only).
pub(crate) fn trace_explicit(
    q: &[u8],
    s: &[u8],
    mode: DpMode,
    scheme: &ScoringScheme,
    left_open: Option<i32>,
    end_open: i32,
) -> Traced {
    let (m, n) = (q.len(), s.len());
    let affine = scheme.gap_model == GapModel::Affine;
    let beta = scheme.extend();
    let g = scheme.open_surcharge();
    let alpha = g + beta;
    let nu = if mode.floor { 0 } else { NEG_INF };
    let mut pred = PredecessorMatrix::new(m, n);
    let mut h_prev: Vec<i32> = (0..=n).map(|j| mode.top(scheme, j)).collect();
    let mut h_cur = vec![0i32; n + 1];
    let mut e_prev = vec![NEG_INF; n + 1];
    let mut e_cur = vec![NEG_INF; n + 1];
    let mut best = Argmax::NONE;

    let offer_row = |best: &mut Argmax, row: &[i32], i: usize| match mode.extract {
        Extract::AllCells => {
            for (j, &v) in row.iter().enumerate() {
                best.offer(v, i, j);
            }
        }
        Extract::LastRowCol => {
            best.offer(row[n], i, n);
            if i == m {
                for (j, &v) in row.iter().enumerate() {
                    best.offer(v, i, j);
                }
            }
        }
        Extract::Corner => {
            if i == m {
                best.offer(row[n], m, n);
            }
        }
    };
    offer_row(&mut best, &h_prev, 0);

    for i in 1..=m {
        h_cur[0] = mode.left(scheme, i, left_open);
        e_cur[0] = if mode.init == BorderInit::Gap {
            h_cur[0]
        } else {
            NEG_INF
        };
        let mut f = NEG_INF;
        for j in 1..=n {
            let diag = h_prev[j - 1] + scheme.substitution(q[i - 1], s[j - 1]);
            let mut code = 0;
            let (ev, fv) = if affine {
                let e_ext = e_prev[j] - beta;
                let ev = e_ext.max(h_prev[j] - alpha);
                let f_ext = f - beta;
                let fv = f_ext.max(h_cur[j - 1] - alpha);
                if i > 1 && ev == e_ext {
                    code |= E_EXTENDS;
                }
                if j > 1 && fv == f_ext {
                    code |= F_EXTENDS;
                }
                (ev, fv)
            } else {
                (h_prev[j] - alpha, h_cur[j - 1] - alpha)
            };
            let hv = diag.max(ev).max(fv).max(nu);
            code |= if mode.floor && hv == 0 {
                STOP
            } else if hv == diag {
                FROM_DIAG
            } else if hv == ev {
                FROM_E
            } else {
                FROM_F
            };
            pred.set(i, j, code);
            h_cur[j] = hv;
            e_cur[j] = ev;
            f = fv;
        }
        offer_row(&mut best, &h_cur, i);
        std::mem::swap(&mut h_prev, &mut h_cur);
        std::mem::swap(&mut e_prev, &mut e_cur);
    }
    let corner_e = if m == 0 { NEG_INF } else { e_prev[n] };

    let mut start_in_e = false;
    if mode.extract == Extract::Corner && affine && m > 0 && n > 0 && end_open != g {
        let alt = corner_e as i64 + g as i64 - end_open as i64;
        if alt > best.score as i64 {
            best.score = alt as i32;
            start_in_e = true;
        }
    }

    let (mut i, mut j) = (best.i, best.j);
    let mut rev: Vec<EditRun> = Vec::new();
    #[derive(PartialEq)]
    enum St {
        H,
        E,
        F,
    }
    let mut st = if start_in_e { St::E } else { St::H };
    loop {
        match st {
            St::H => {
                if i == 0 || j == 0 {
                    if !mode.floor && mode.init == BorderInit::Gap {
                        push_run(&mut rev, EditOp::Insertion, i);
                        push_run(&mut rev, EditOp::Deletion, j);
                        i = 0;
                        j = 0;
                    }
                    break;
                }
                match pred.get(i, j) & 3 {
                    STOP => break,
                    FROM_DIAG => {
                        push_run(&mut rev, EditOp::Match, 1);
                        i -= 1;
                        j -= 1;
                    }
                    FROM_E => st = St::E,
                    _ => st = St::F,
                }
            }
            St::E => {
                push_run(&mut rev, EditOp::Insertion, 1);
                let extend = pred.get(i, j) & E_EXTENDS != 0;
                i -= 1;
                if !extend {
                    st = St::H;
                }
            }
            St::F => {
                push_run(&mut rev, EditOp::Deletion, 1);
                let extend = pred.get(i, j) & F_EXTENDS != 0;
                j -= 1;
                if !extend {
                    st = St::H;
                }
            }
        }
    }
    Traced {
        score: best.score,
        start: (i, j),
        end: (best.i, best.j),
        ops: reversed_runs(rev),
    }
}

/// Full alignment from an explicit predecessor matrix; only for
/// `m + n <= DEFAULT_EXPLICIT_THRESHOLD`.
pub fn explicit_traceback(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
) -> Result<AlignmentResult> {
    explicit_traceback_with(q, s, cfg, scheme, DEFAULT_EXPLICIT_THRESHOLD)
}

pub fn explicit_traceback_with(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    threshold: usize,
) -> Result<AlignmentResult> {
    let total = q.len() + s.len();
    if total > threshold {
        return Err(Error::UseHirschberg { total, threshold });
    }
    let cfg = validate_config(cfg, scheme)?;
    scheme.check_lengths(q.len(), s.len(), 0)?;
    let t = trace_explicit(
        &q.symbols(),
        &s.symbols(),
        cfg.mode(),
        scheme,
        None,
        scheme.open_surcharge(),
    );
    Ok(AlignmentResult::aligned(
        t.score,
        t.start,
        t.end,
        t.ops,
        (q.len() * s.len()) as u64,
    ))
}
