//! The lockstep wavefront kernel.
//!
//! Lane `t` of a `P`-wide group owns `k` adjacent columns of the current
//! stage. At iteration `i` it updates row `i - t` of those columns, taking the
//! left neighbor cell from lane `t - 1` through a lane shift. Lane 0 reads the
//! left edge from the stage boundary and lane `P - 1` writes the right edge,
//! both in blocks of `P` rows.
//!
//! Affine scores are kept with a row offset: a lane stores `H + r*h`,
//! `E + r*h` and `F + r*h` for its row `r`, where `h` is the extension cost.
//! The vertical recurrence then needs no extension subtraction and the cell
//! update is 4 max and 3 add/sub.

use crate::result::Argmax;
use crate::scoring::{BorderInit, DpMode, Extract, ScoringScheme, NEG_INF};
use crate::seq::SYMBOLS;

use super::lanes::{shift_down_in_place, shift_up_in_place};
use super::probe::Probe;
use super::profile::ScoringProfile;
use super::word::ScoreWord;

pub(crate) struct PassSpec<'a> {
    pub queries: Vec<&'a [u8]>,
    pub subject_lens: Vec<usize>,
    pub mode: DpMode,
    pub scheme: &'a ScoringScheme,
    pub left_open: Option<i32>,
    pub k: usize,
    pub capture_row: bool,
    pub capture_col: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct HalfResult {
    pub best: Argmax,
    pub cells: u64,
    /// `H(m, j)` for `j in 0..=n` when the last row is captured.
    pub row_h: Vec<i32>,
    /// `E(m, j)` for `j in 0..=n` when the last row is captured (affine).
    pub row_e: Vec<i32>,
    /// `H(i, n)` for `i in 0..=m` when the last column is captured.
    pub col_h: Vec<i32>,
}

#[derive(Debug, Clone)]
pub(crate) struct PassResult {
    pub halves: Vec<HalfResult>,
    pub iterations: u64,
    pub stages: usize,
    pub cell_updates: u64,
}

/// Left-edge values of a stage in offset form: `h[r] = H(r, c) + r*h` and
/// `f[r]` the horizontal-gap value entering column `c + 1`.
#[derive(Debug, Clone)]
pub(crate) struct Boundary<W> {
    pub h: Vec<W>,
    pub f: Vec<W>,
}

pub(crate) struct Kernel<'a, W: ScoreWord, const P: usize, const AFFINE: bool> {
    spec: &'a PassSpec<'a>,
    m: usize,
    k: usize,
    width: usize,
    /// Row offset step (`h` for affine, 0 for linear).
    ro: i32,
    gap_open: W,
    gap_step: W,
    alpha: W,
    q: Vec<u8>,
    /// `prof[code * k + c][t]`: score of query code `code` at column `c` of lane `t`.
    prof: Vec<[W; P]>,
    rowmax: [W; P],
    h: Vec<[W; P]>,
    ho: Vec<[W; P]>,
    e: Vec<[W; P]>,
    diag: [W; P],
    hl: [W; P],
    f: [W; P],
    cq0: [u8; P],
    cq1: [u8; P],
    bin_h: [W; P],
    bin_f: [W; P],
    obuf_h: [W; P],
    obuf_f: [W; P],
    ocount: usize,
    pub halves: Vec<HalfResult>,
    pub iterations: u64,
    pub cell_updates: u64,
}

impl<'a, W: ScoreWord, const P: usize, const AFFINE: bool> Kernel<'a, W, P, AFFINE> {
    pub fn new(spec: &'a PassSpec<'a>) -> Self {
        debug_assert_eq!(spec.queries.len(), W::HALVES);
        let scheme = spec.scheme;
        let m = spec.queries.iter().map(|q| q.len()).max().unwrap_or(0);
        let k = spec.k;
        let ext = scheme.extend();
        let ro = if AFFINE { ext } else { 0 };
        let mut q = vec![0u8; m + 2 * P];
        for (hh, query) in spec.queries.iter().enumerate() {
            for (r, &c) in query.iter().enumerate() {
                q[r] += if hh + 1 < W::HALVES { c * SYMBOLS as u8 } else { c };
            }
        }
        let halves = (0..W::HALVES)
            .map(|hh| {
                let (mh, nh) = (spec.queries[hh].len(), spec.subject_lens[hh]);
                let mut best = Argmax::NONE;
                match spec.mode.extract {
                    Extract::Corner => {}
                    Extract::AllCells => best.offer(0, 0, 0),
                    Extract::LastRowCol => {
                        best.offer(spec.mode.left(scheme, mh, spec.left_open), mh, 0);
                        best.offer(spec.mode.top(scheme, nh), 0, nh);
                    }
                }
                let mut row_h = Vec::new();
                let mut row_e = Vec::new();
                if spec.capture_row {
                    row_h = vec![NEG_INF; nh + 1];
                    row_e = vec![NEG_INF; nh + 1];
                    row_h[0] = spec.mode.left(scheme, mh, spec.left_open);
                    if spec.mode.init == BorderInit::Gap {
                        row_e[0] = row_h[0];
                    }
                }
                let mut col_h = Vec::new();
                if spec.capture_col {
                    col_h = vec![NEG_INF; mh + 1];
                    col_h[0] = spec.mode.top(scheme, nh);
                }
                HalfResult {
                    best,
                    cells: 0,
                    row_h,
                    row_e,
                    col_h,
                }
            })
            .collect();
        let neg = W::neg_inf();
        Kernel {
            spec,
            m,
            k,
            width: P * k,
            ro,
            gap_open: W::splat(scheme.open_surcharge()),
            gap_step: W::splat(ext),
            alpha: W::splat(scheme.open_surcharge() + ext),
            q,
            prof: vec![[W::default(); P]; SYMBOLS.pow(W::HALVES as u32) * k],
            rowmax: [neg; P],
            h: vec![[neg; P]; k],
            ho: vec![[neg; P]; k],
            e: vec![[neg; P]; k],
            diag: [neg; P],
            hl: [neg; P],
            f: [neg; P],
            cq0: [0; P],
            cq1: [0; P],
            bin_h: [neg; P],
            bin_f: [neg; P],
            obuf_h: [neg; P],
            obuf_f: [neg; P],
            ocount: 0,
            halves,
            iterations: 0,
            cell_updates: 0,
        }
    }

    fn gap_alpha(&self) -> i32 {
        self.spec.scheme.open_surcharge() + self.spec.scheme.extend()
    }

    pub fn empty_boundary(&self) -> Boundary<W> {
        let len = self.m + 2 * P + 1;
        Boundary {
            h: vec![W::default(); len],
            f: vec![W::default(); len],
        }
    }

    /// Left edge of stage 0: the column-0 initialization.
    pub fn initial_boundary(&self) -> Boundary<W> {
        let mut b = self.empty_boundary();
        let alpha = self.gap_alpha();
        for r in 0..=self.m {
            let v = self.spec.mode.left(self.spec.scheme, r, self.spec.left_open) + r as i32 * self.ro;
            b.h[r] = W::splat(v);
            b.f[r] = W::splat(v - alpha);
        }
        b
    }

    /// Converts true-valued boundary columns into offset form.
    pub fn boundary_from_values(&self, h: &[i32], f: &[i32]) -> Boundary<W> {
        let mut b = self.empty_boundary();
        let alpha = self.gap_alpha();
        for (r, &hv) in h[..=self.m].iter().enumerate() {
            let off = r as i32 * self.ro;
            b.h[r] = W::splat(hv + off);
            b.f[r] = W::splat(f.get(r).map_or(hv - alpha, |&v| v) + off);
        }
        b
    }

    pub fn boundary_values(&self, b: &Boundary<W>) -> (Vec<i32>, Vec<i32>) {
        (0..=self.m)
            .map(|r| {
                let off = r as i32 * self.ro;
                (b.h[r].half(0) - off, b.f[r].half(0) - off)
            })
            .unzip()
    }

    fn load_profile(&mut self, profiles: &[&ScoringProfile]) {
        let (k, add) = (self.k, self.ro);
        let codes = SYMBOLS.pow(W::HALVES as u32);
        for code in 0..codes {
            for c in 0..k {
                for t in 0..P {
                    let x = t * k + c;
                    self.prof[code * k + c][t] = W::from_halves(|hh| {
                        let sym = if W::HALVES == 1 {
                            code
                        } else if hh == 0 {
                            code / SYMBOLS
                        } else {
                            code % SYMBOLS
                        };
                        profiles[hh].table[sym][x] + add
                    });
                }
            }
        }
    }

    /// Runs stage `s` from left edge `bin`, writing the right edge to `bout`.
    pub fn stage<Pr: Probe>(
        &mut self,
        s: usize,
        profiles: &[&ScoringProfile],
        bin: &Boundary<W>,
        bout: &mut Boundary<W>,
        probe: &mut Pr,
    ) {
        let (k, m) = (self.k, self.m);
        let c0 = s * self.width;
        self.load_profile(profiles);

        let scheme = self.spec.scheme;
        let g = scheme.open_surcharge();
        for c in 0..k {
            for t in 0..P {
                let top = self.spec.mode.top(scheme, c0 + t * k + c + 1);
                self.h[c][t] = W::splat(top);
                self.ho[c][t] = W::splat(top - g);
                self.e[c][t] = W::neg_inf();
            }
        }
        bout.h[0] = W::splat(self.spec.mode.top(scheme, c0 + self.width));
        self.hl = [W::neg_inf(); P];
        self.f = [W::neg_inf(); P];
        self.hl[0] = bin.h[0];
        self.cq0 = [0; P];
        self.ocount = 0;

        for hh in 0..W::HALVES {
            let nh = self.spec.subject_lens[hh];
            if nh > c0 {
                let mh = self.spec.queries[hh].len() as u64;
                self.halves[hh].cells += mh * (nh - c0).min(self.width) as u64;
            }
        }

        self.advance(s, 0, bin, bout, probe);
        let end = m + P;
        for i in 1..end.min(P) {
            self.compute::<true>(i);
            self.extract(i, c0);
            self.advance(s, i, bin, bout, probe);
        }
        for i in P..end {
            self.compute::<false>(i);
            self.extract(i, c0);
            self.advance(s, i, bin, bout, probe);
        }
        if self.ocount > 0 {
            self.flush(s, end - 1, bout, probe);
        }
        self.iterations += end as u64;
        self.cell_updates += ((end - 1) * P * k) as u64;
    }

    #[inline(always)]
    fn compute<const MASK: bool>(&mut self, i: usize) {
        let k = self.k;
        let floor_on = self.spec.mode.floor;
        let mut floor = [W::default(); P];
        if floor_on {
            for (t, fl) in floor.iter_mut().enumerate() {
                *fl = W::splat((i as i32 - t as i32) * self.ro);
            }
        }
        let mut diag = self.diag;
        let mut sig = [W::default(); P];
        let mut base = [0usize; P];
        for (b, &c) in base.iter_mut().zip(&self.cq0) {
            *b = c as usize * k;
        }
        let track = self.spec.mode.extract == Extract::AllCells;
        let mut rm = [W::neg_inf(); P];
        if AFFINE {
            let (g, hs) = (self.gap_open, self.gap_step);
            let mut f = self.f;
            for c in 0..k {
                for t in 0..P {
                    sig[t] = self.prof[base[t] + c][t];
                }
                let h = &mut self.h[c];
                let ho = &mut self.ho[c];
                let e = &mut self.e[c];
                for t in 0..P {
                    let up = h[t];
                    let ev = e[t].max(ho[t]);
                    let mut hv = diag[t].add(sig[t]).max(ev).max(f[t]);
                    if floor_on {
                        hv = hv.max(floor[t]);
                    }
                    if track {
                        rm[t] = rm[t].max(hv);
                    }
                    let hov = hv.sub(g);
                    f[t] = f[t].max(hov).sub(hs);
                    diag[t] = up;
                    if !MASK || t < i {
                        h[t] = hv;
                        ho[t] = hov;
                        e[t] = ev;
                    }
                }
            }
            self.f = f;
        } else {
            let alpha = self.alpha;
            let mut left = self.hl;
            for c in 0..k {
                for t in 0..P {
                    sig[t] = self.prof[base[t] + c][t];
                }
                let h = &mut self.h[c];
                for t in 0..P {
                    let up = h[t];
                    let gv = up.max(left[t]).sub(alpha);
                    let mut hv = diag[t].add(sig[t]).max(gv);
                    if floor_on {
                        hv = hv.max(floor[t]);
                    }
                    if track {
                        rm[t] = rm[t].max(hv);
                    }
                    diag[t] = up;
                    left[t] = hv;
                    if !MASK || t < i {
                        h[t] = hv;
                    }
                }
            }
        }
        self.rowmax = rm;
    }

    #[inline(always)]
    fn advance<Pr: Probe>(&mut self, s: usize, i: usize, bin: &Boundary<W>, bout: &mut Boundary<W>, probe: &mut Pr) {
        let mut out_h = self.h[self.k - 1];
        let mut out_f = self.f;
        if i + 1 >= P {
            let r = i + 1 - P;
            if r >= 1 && r <= self.m {
                self.obuf_h[self.ocount] = out_h[P - 1];
                self.obuf_f[self.ocount] = out_f[P - 1];
                self.ocount += 1;
                if self.ocount == P {
                    self.flush(s, i, bout, probe);
                }
            }
        }
        self.diag = self.hl;
        if i.is_multiple_of(P) {
            self.bin_h.copy_from_slice(&bin.h[i + 1..i + 1 + P]);
            self.bin_f.copy_from_slice(&bin.f[i + 1..i + 1 + P]);
            probe.boundary_read(s, i, P);
        }
        shift_up_in_place(&mut out_h, self.bin_h[0]);
        self.hl = out_h;
        if AFFINE {
            shift_up_in_place(&mut out_f, self.bin_f[0]);
            self.f = out_f;
        }
        shift_down_in_place(&mut self.bin_h, W::default());
        shift_down_in_place(&mut self.bin_f, W::default());
        if i.is_multiple_of(P) {
            self.cq1.copy_from_slice(&self.q[i..i + P]);
            probe.query_load(s, i);
        }
        shift_up_in_place(&mut self.cq0, self.cq1[0]);
        shift_down_in_place(&mut self.cq1, 0);
    }

    fn flush<Pr: Probe>(&mut self, s: usize, i: usize, bout: &mut Boundary<W>, probe: &mut Pr) {
        let last = (i + 1 - P).min(self.m);
        let first = last + 1 - self.ocount;
        bout.h[first..=last].copy_from_slice(&self.obuf_h[..self.ocount]);
        bout.f[first..=last].copy_from_slice(&self.obuf_f[..self.ocount]);
        probe.boundary_write(s, i, self.ocount);
        self.ocount = 0;
    }

    #[inline(always)]
    #[allow(clippy::needless_range_loop)]
    fn extract(&mut self, i: usize, c0: usize) {
        let (k, width, ro) = (self.k, self.width, self.ro);
        let extract = self.spec.mode.extract;
        for hh in 0..W::HALVES {
            let mh = self.spec.queries[hh].len();
            let nh = self.spec.subject_lens[hh];
            if nh <= c0 {
                continue;
            }
            let span = nh - c0;
            let val = |w: W, r: usize| w.half(hh) - r as i32 * ro;

            if span <= width && (extract != Extract::AllCells || self.spec.capture_col) {
                let x = span - 1;
                let (tn, cn) = (x / k, x % k);
                if i > tn && i - tn <= mh {
                    let r = i - tn;
                    let v = val(self.h[cn][tn], r);
                    let half = &mut self.halves[hh];
                    if self.spec.capture_col {
                        half.col_h[r] = v;
                    }
                    match extract {
                        Extract::Corner if r == mh => half.best.offer(v, mh, nh),
                        Extract::LastRowCol => half.best.offer(v, r, nh),
                        _ => {}
                    }
                }
            }

            if i >= mh && i - mh < P {
                let t = i - mh;
                let valid = span.saturating_sub(t * k).min(k);
                let half = &mut self.halves[hh];
                for c in 0..valid {
                    let j = c0 + t * k + c + 1;
                    if extract == Extract::LastRowCol {
                        half.best.offer(val(self.h[c][t], mh), mh, j);
                    }
                    if self.spec.capture_row {
                        half.row_h[j] = val(self.h[c][t], mh);
                        if AFFINE {
                            half.row_e[j] = val(self.e[c][t], mh);
                        }
                    }
                }
            }

            if extract == Extract::AllCells {
                let lo = i.saturating_sub(mh);
                let hi = (i - 1).min(P - 1);
                if lo > hi {
                    continue;
                }
                let rm = self.rowmax;
                let half = &mut self.halves[hh];
                for t in lo..=hi {
                    let valid = span.saturating_sub(t * k).min(k);
                    if valid == 0 {
                        break;
                    }
                    let r = i - t;
                    let mx = if valid == k {
                        rm[t].half(hh)
                    } else {
                        (0..valid).map(|c| self.h[c][t].half(hh)).max().unwrap_or(i32::MIN)
                    };
                    let v = mx - r as i32 * ro;
                    if v > half.best.score || (v == half.best.score && r <= half.best.i) {
                        if let Some(c) = (0..valid).find(|&c| self.h[c][t].half(hh) == mx) {
                            half.best.offer(v, r, c0 + t * k + c + 1);
                        }
                    }
                }
            }
        }
    }
}

/// Runs every stage of a pass left to right.
pub(crate) fn run_pass<W: ScoreWord, const P: usize, const AFFINE: bool, Pr: Probe>(
    spec: &PassSpec,
    subjects: &[&[u8]],
    tuning: &super::EngineTuning,
    probe: &mut Pr,
) -> PassResult {
    let mut kernel = Kernel::<W, P, AFFINE>::new(spec);
    let width = kernel.width;
    let n = spec.subject_lens.iter().copied().max().unwrap_or(0);
    let stages = n.div_ceil(width);
    let mut bin = kernel.initial_boundary();
    let mut bout = kernel.empty_boundary();
    for s in 0..stages {
        let c0 = s * width;
        let profiles: Vec<ScoringProfile> = subjects
            .iter()
            .map(|subj| {
                let lo = c0.min(subj.len());
                let hi = (c0 + width).min(subj.len());
                super::build_scoring_profile(&subj[lo..hi], spec.scheme, tuning).expect("chunk fits the stage width")
            })
            .collect();
        let refs: Vec<&ScoringProfile> = profiles.iter().collect();
        kernel.stage(s, &refs, &bin, &mut bout, probe);
        std::mem::swap(&mut bin, &mut bout);
    }
    PassResult {
        iterations: kernel.iterations,
        cell_updates: kernel.cell_updates,
        halves: kernel.halves,
        stages,
    }
}
