//! C ABI over the alignment library.
//!
//! Objects are opaque handles created by `ws_*_new` and released by the
//! matching `ws_*_free`. Every fallible call returns a [`WsStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`ws_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use waveseq::batch::{run_batch, BatchJob};
use waveseq::engine::EngineTuning;
use waveseq::io::cigar_string;
use waveseq::traceback::align_pair;
use waveseq::{AlignConfig, AlignType, AlignmentResult, Error, GapModel, ResultMode, ScoringScheme, Sequence};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EmptySequence = 3,
    InvalidScheme = 4,
    InvalidTuning = 5,
    LengthOverflow = 6,
    PackedRangeOverflow = 7,
    EmptyBatch = 8,
    PairOutOfRange = 9,
    BufferTooSmall = 10,
    Internal = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsAlignType {
    Local = 0,
    Global = 1,
    SemiGlobal = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsGapModel {
    Linear = 0,
    Affine = 1,
}

/// Aligner parameters. `lanes` or `cols_per_lane` of 0 select defaults by
/// sequence length; `workers` of 0 uses one worker per CPU.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WsParams {
    pub align_type: WsAlignType,
    pub gap_model: WsGapModel,
    pub match_score: i32,
    pub mismatch_score: i32,
    pub gap_open: i32,
    pub gap_extend: i32,
    pub traceback: bool,
    pub lanes: u32,
    pub cols_per_lane: u32,
    pub packed: bool,
    pub workers: u32,
}

/// Half-open coordinates; starts are -1 when not computed.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WsCoords {
    pub q_start: i64,
    pub q_end: i64,
    pub s_start: i64,
    pub s_end: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WsPair {
    pub query: usize,
    pub subject: usize,
}

pub struct WsSequence(Sequence);

pub struct WsAligner {
    cfg: AlignConfig,
    scheme: ScoringScheme,
    lanes: usize,
    cols_per_lane: usize,
    packed: bool,
    workers: usize,
}

pub struct WsResult(AlignmentResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> WsStatus {
    match e {
        Error::EmptySequence(_) => WsStatus::EmptySequence,
        Error::InvalidScheme(_) | Error::ConfigMismatch(_) => WsStatus::InvalidScheme,
        Error::InvalidTuning(_) | Error::ChunkOverflow { .. } => WsStatus::InvalidTuning,
        Error::LengthOverflow { .. } => WsStatus::LengthOverflow,
        Error::PackedRangeOverflow { .. } => WsStatus::PackedRangeOverflow,
        Error::EmptyBatch => WsStatus::EmptyBatch,
        Error::PairOutOfRange { .. } => WsStatus::PairOutOfRange,
        Error::PairFailed { source, .. } => status_of(source),
        Error::InvalidArgument(_) => WsStatus::InvalidArgument,
        _ => WsStatus::Internal,
    }
}

fn fail(e: Error) -> WsStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> WsStatus {
    set_error(format!("{what} is null"));
    WsStatus::NullPointer
}

fn guard(f: impl FnOnce() -> WsStatus) -> WsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        WsStatus::Panic
    })
}

impl WsAligner {
    fn tuning(&self, longest: usize) -> Result<EngineTuning, Error> {
        let auto = EngineTuning::auto(longest);
        let p = if self.lanes == 0 { auto.p } else { self.lanes };
        let k = if self.cols_per_lane == 0 {
            auto.k
        } else {
            self.cols_per_lane
        };
        Ok(EngineTuning::new(p, k)?.packed(self.packed))
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ws_status_str(status: WsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        WsStatus::Ok => c"ok",
        WsStatus::NullPointer => c"null pointer",
        WsStatus::InvalidArgument => c"invalid argument",
        WsStatus::EmptySequence => c"empty sequence",
        WsStatus::InvalidScheme => c"invalid scoring scheme",
        WsStatus::InvalidTuning => c"invalid engine tuning",
        WsStatus::LengthOverflow => c"sequence lengths exceed the score range",
        WsStatus::PackedRangeOverflow => c"pair exceeds the packed score range",
        WsStatus::EmptyBatch => c"batch has no pairs",
        WsStatus::PairOutOfRange => c"pair index out of range",
        WsStatus::BufferTooSmall => c"buffer too small",
        WsStatus::Internal => c"internal error",
        WsStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Creates a sequence from `len` bytes of DNA text. `id` may be null.
///
/// # Safety
/// `data` must point to `len` readable bytes; `id`, when non-null, to a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_sequence_new(
    id: *const c_char,
    data: *const u8,
    len: usize,
    out: *mut *mut WsSequence,
) -> WsStatus {
    guard(|| {
        if data.is_null() {
            return null("data");
        }
        if out.is_null() {
            return null("out");
        }
        let id = if id.is_null() {
            String::new()
        } else {
            CStr::from_ptr(id).to_string_lossy().into_owned()
        };
        match Sequence::from_bytes(id, std::slice::from_raw_parts(data, len)) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(WsSequence(s)));
                WsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `seq` must be null or a handle from [`ws_sequence_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_sequence_free(seq: *mut WsSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Length in symbols, or 0 for null.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_sequence_len(seq: *const WsSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `params` must point to a valid [`WsParams`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_aligner_new(params: *const WsParams, out: *mut *mut WsAligner) -> WsStatus {
    guard(|| {
        let Some(p) = params.as_ref() else {
            return null("params");
        };
        if out.is_null() {
            return null("out");
        }
        let gap_model = match p.gap_model {
            WsGapModel::Linear => GapModel::Linear,
            WsGapModel::Affine => GapModel::Affine,
        };
        let align_type = match p.align_type {
            WsAlignType::Local => AlignType::Local,
            WsAlignType::Global => AlignType::Global,
            WsAlignType::SemiGlobal => AlignType::SemiGlobal,
        };
        let scheme = match ScoringScheme::new(p.match_score, p.mismatch_score, p.gap_open, p.gap_extend, gap_model) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let mode = if p.traceback {
            ResultMode::Traceback
        } else {
            ResultMode::ScoreOnly
        };
        let aligner = WsAligner {
            cfg: AlignConfig::new(align_type, gap_model, mode),
            scheme,
            lanes: p.lanes as usize,
            cols_per_lane: p.cols_per_lane as usize,
            packed: p.packed,
            workers: if p.workers == 0 {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            } else {
                p.workers as usize
            },
        };
        if let Err(e) = aligner.tuning(0) {
            return fail(e);
        }
        *out = Box::into_raw(Box::new(aligner));
        WsStatus::Ok
    })
}

/// # Safety
/// `aligner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_aligner_free(aligner: *mut WsAligner) {
    if !aligner.is_null() {
        drop(Box::from_raw(aligner));
    }
}

/// Aligns one pair.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_align(
    aligner: *const WsAligner,
    query: *const WsSequence,
    subject: *const WsSequence,
    out: *mut *mut WsResult,
) -> WsStatus {
    guard(|| {
        let (Some(a), Some(q), Some(s)) = (aligner.as_ref(), query.as_ref(), subject.as_ref()) else {
            return null("handle");
        };
        if out.is_null() {
            return null("out");
        }
        let tuning = match a.tuning(q.0.len().max(s.0.len())) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        match align_pair(&q.0, &s.0, &a.cfg, &a.scheme, &tuning) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(WsResult(r)));
                WsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Scores `n_pairs` pairs into `scores` (one per pair, in order).
///
/// # Safety
/// `queries`/`subjects` must hold `n_queries`/`n_subjects` live handles,
/// `pairs` `n_pairs` entries and `scores` room for `n_pairs` values.
#[no_mangle]
pub unsafe extern "C" fn ws_align_batch(
    aligner: *const WsAligner,
    queries: *const *const WsSequence,
    n_queries: usize,
    subjects: *const *const WsSequence,
    n_subjects: usize,
    pairs: *const WsPair,
    n_pairs: usize,
    scores: *mut i32,
) -> WsStatus {
    guard(|| {
        let Some(a) = aligner.as_ref() else {
            return null("aligner");
        };
        if queries.is_null() || subjects.is_null() || pairs.is_null() || scores.is_null() {
            return null("array");
        }
        let collect = |arr: *const *const WsSequence, n: usize| -> Option<Vec<Sequence>> {
            std::slice::from_raw_parts(arr, n)
                .iter()
                .map(|&h| h.as_ref().map(|s| s.0.clone()))
                .collect()
        };
        let (Some(qs), Some(ss)) = (collect(queries, n_queries), collect(subjects, n_subjects)) else {
            return null("sequence handle");
        };
        let pairs: Vec<(usize, usize)> = std::slice::from_raw_parts(pairs, n_pairs)
            .iter()
            .map(|p| (p.query, p.subject))
            .collect();
        let longest = qs.iter().chain(&ss).map(Sequence::len).max().unwrap_or(0);
        let tuning = match a.tuning(longest) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let job = BatchJob {
            queries: &qs,
            subjects: &ss,
            pairs,
            cfg: a.cfg,
            scheme: a.scheme,
            tuning,
            workers: a.workers,
        };
        match run_batch(&job) {
            Ok(report) => {
                let out = std::slice::from_raw_parts_mut(scores, n_pairs);
                for (slot, r) in out.iter_mut().zip(&report.results) {
                    *slot = r.score;
                }
                WsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_result_free(result: *mut WsResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_result_score(result: *const WsResult) -> i32 {
    result.as_ref().map_or(0, |r| r.0.score)
}

/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_result_coords(result: *const WsResult, out: *mut WsCoords) -> WsStatus {
    let (Some(r), false) = (result.as_ref(), out.is_null()) else {
        return null("argument");
    };
    let opt = |v: Option<usize>| v.map_or(-1, |v| v as i64);
    *out = WsCoords {
        q_start: opt(r.0.q_start),
        q_end: r.0.q_end as i64,
        s_start: opt(r.0.s_start),
        s_end: r.0.s_end as i64,
    };
    WsStatus::Ok
}

/// Writes the NUL-terminated CIGAR (empty in score-only mode) into `buf`.
/// `needed`, when non-null, receives the required size including the NUL.
///
/// # Safety
/// `result` must be a live handle; `buf` must hold `cap` bytes or be null
/// with `cap == 0`.
#[no_mangle]
pub unsafe extern "C" fn ws_result_cigar(
    result: *const WsResult,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> WsStatus {
    let Some(r) = result.as_ref() else {
        return null("result");
    };
    let cigar = cigar_string(&r.0);
    let size = cigar.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || cap < size {
        set_error(format!("CIGAR needs {size} bytes, buffer has {cap}"));
        return WsStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(cigar.as_ptr(), buf.cast::<u8>(), cigar.len());
    *buf.add(cigar.len()) = 0;
    WsStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_status_has_text() {
        use WsStatus::*;
        let all = [
            Ok,
            NullPointer,
            InvalidArgument,
            EmptySequence,
            InvalidScheme,
            InvalidTuning,
            LengthOverflow,
            PackedRangeOverflow,
            EmptyBatch,
            PairOutOfRange,
            BufferTooSmall,
            Internal,
            Panic,
        ];
        for (code, status) in all.into_iter().enumerate() {
            assert_eq!(status as usize, code);
            let text = unsafe { CStr::from_ptr(ws_status_str(status)) };
            assert!(!text.to_bytes().is_empty());
        }
    }

    #[test]
    fn error_mapping() {
        assert_eq!(status_of(&Error::EmptyBatch), WsStatus::EmptyBatch);
        let nested = Error::PairFailed {
            index: 3,
            source: Box::new(Error::LengthOverflow { m: 1, n: 1 }),
        };
        assert_eq!(status_of(&nested), WsStatus::LengthOverflow);
    }
}
