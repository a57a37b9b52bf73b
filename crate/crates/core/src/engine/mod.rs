//! Lane-group wavefront engine.
//!
//! A group of `p` lanes advances in lockstep along the anti-diagonals of a
//! stage `p*k` columns wide; stages are chained left to right through a
//! boundary column. Scores are bit-identical to [`crate::refdp`].

mod kernel;
mod lanes;
mod probe;
mod profile;
mod word;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::{validate_config, AlignConfig, DpMode, GapModel, ScoringScheme};
use crate::seq::Sequence;

pub use lanes::{lane_shift_down, lane_shift_up};
pub use probe::{AccessLog, NoProbe, Probe};
pub use profile::{build_scoring_profile, ScoringProfile};
pub use word::{Counted, OpCounts, Packed16, ScoreWord};

pub(crate) use kernel::PassResult;
use kernel::{Kernel, PassSpec};

/// Packed mode refuses pairs whose score path could leave this range.
pub const PACKED_LIMIT: i64 = 1 << 14;

pub const LANE_WIDTHS: [usize; 5] = [4, 8, 16, 32, 64];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineTuning {
    /// Lane-group width.
    pub p: usize,
    /// Columns per lane.
    pub k: usize,
    /// Two alignments per lane in 16-bit halves.
    pub packed: bool,
}

impl Default for EngineTuning {
    fn default() -> Self {
        EngineTuning {
            p: 16,
            k: 8,
            packed: false,
        }
    }
}

impl EngineTuning {
    pub fn new(p: usize, k: usize) -> Result<Self> {
        let t = EngineTuning { p, k, packed: false };
        t.validate()?;
        Ok(t)
    }

    pub fn packed(self, packed: bool) -> Self {
        EngineTuning { packed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !LANE_WIDTHS.contains(&self.p) {
            return Err(Error::InvalidTuning(format!(
                "lane width {} is not one of {:?}",
                self.p, LANE_WIDTHS
            )));
        }
        if !(1..=16).contains(&self.k) {
            return Err(Error::InvalidTuning(format!(
                "columns per lane {} outside 1..=16",
                self.k
            )));
        }
        Ok(())
    }

    pub fn stage_width(&self) -> usize {
        self.p * self.k
    }

    pub fn stages(&self, n: usize) -> usize {
        n.div_ceil(self.stage_width())
    }

    /// A reasonable lane width and column count for sequences of `len`.
    pub fn auto(len: usize) -> Self {
        let (p, k) = match len {
            0..=63 => (4, 4),
            64..=255 => (8, 8),
            _ => (16, 8),
        };
        EngineTuning { p, k, packed: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineScore {
    pub score: i32,
    pub end: (usize, usize),
    pub cells_computed: u64,
    pub iterations: u64,
    pub stages: usize,
}

/// Score plus the instrumented arithmetic of the pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountedScore {
    pub score: EngineScore,
    pub ops: OpCounts,
    /// Lane cell updates executed, padding and ramp lanes included.
    pub cell_updates: u64,
}

/// Stage boundary column in true (unoffset) scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageBoundary {
    /// `H(r, c)` for `r in 0..=m`, `c` the stage's right edge.
    pub h: Vec<i32>,
    /// Horizontal-gap state entering column `c + 1`; empty for linear gaps.
    pub gap: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutput {
    pub boundary_out: StageBoundary,
    /// `H(r, j_last)` for the stage's last valid column `j_last`.
    pub last_column: Vec<i32>,
    /// Running optimum within the stage, per the alignment type.
    pub best: crate::result::Argmax,
    pub iterations: u64,
    pub cells: u64,
}

macro_rules! dispatch {
    ($w:ty, $tuning:expr, $affine:expr, |$P:ident, $A:ident| $body:expr) => {{
        macro_rules! arm {
            ($p:literal, $a:literal) => {{
                const $P: usize = $p;
                const $A: bool = $a;
                $body
            }};
        }
        match ($tuning.p, $affine) {
            (4, false) => arm!(4, false),
            (4, true) => arm!(4, true),
            (8, false) => arm!(8, false),
            (8, true) => arm!(8, true),
            (16, false) => arm!(16, false),
            (16, true) => arm!(16, true),
            (32, false) => arm!(32, false),
            (32, true) => arm!(32, true),
            (64, false) => arm!(64, false),
            (64, true) => arm!(64, true),
            (p, _) => unreachable!("lane width {p} passed validation"),
        }
    }};
}

fn pass_with<W: ScoreWord, Pr: Probe>(
    spec: &PassSpec,
    subjects: &[&[u8]],
    tuning: &EngineTuning,
    probe: &mut Pr,
) -> PassResult {
    let affine = spec.scheme.gap_model == GapModel::Affine;
    dispatch!(W, tuning, affine, |P, A| kernel::run_pass::<W, P, A, Pr>(
        spec, subjects, tuning, probe
    ))
}

/// Options of a raw pass used by the traceback module.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PassOptions {
    pub left_open: Option<i32>,
    pub capture_row: bool,
}

/// One unchecked 32-bit pass over unpacked symbols. Both lengths must be
/// at least 1 and within [`ScoringScheme::fits_i32`].
pub(crate) fn score_pass(
    q: &[u8],
    s: &[u8],
    mode: DpMode,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
    opts: PassOptions,
) -> PassResult {
    let spec = PassSpec {
        queries: vec![q],
        subject_lens: vec![s.len()],
        mode,
        scheme,
        left_open: opts.left_open,
        k: tuning.k,
        capture_row: opts.capture_row,
        capture_col: false,
    };
    pass_with::<i32, _>(&spec, &[s], tuning, &mut NoProbe)
}

fn prepare(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<AlignConfig> {
    tuning.validate()?;
    let cfg = validate_config(cfg, scheme)?;
    scheme.check_lengths(q.len(), s.len(), 2 * tuning.p)?;
    Ok(cfg)
}

fn to_score(r: &PassResult, half: usize) -> EngineScore {
    let h = &r.halves[half];
    EngineScore {
        score: h.best.score,
        end: (h.best.i, h.best.j),
        cells_computed: h.cells,
        iterations: r.iterations,
        stages: r.stages,
    }
}

fn single<W: ScoreWord, Pr: Probe>(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
    probe: &mut Pr,
) -> Result<PassResult> {
    let cfg = prepare(q, s, cfg, scheme, tuning)?;
    let (qs, ss) = (q.symbols(), s.symbols());
    let spec = PassSpec {
        queries: vec![&qs],
        subject_lens: vec![ss.len()],
        mode: cfg.mode(),
        scheme,
        left_open: None,
        k: tuning.k,
        capture_row: false,
        capture_col: false,
    };
    Ok(pass_with::<W, Pr>(&spec, &[&ss], tuning, probe))
}

/// Optimal score and end cell of `q` against `s`.
pub fn engine_score(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<EngineScore> {
    single::<i32, _>(q, s, cfg, scheme, tuning, &mut NoProbe).map(|r| to_score(&r, 0))
}

/// [`engine_score`] with counted arithmetic on the current thread.
pub fn engine_score_counted(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<CountedScore> {
    OpCounts::take();
    let r = single::<Counted, _>(q, s, cfg, scheme, tuning, &mut NoProbe)?;
    Ok(CountedScore {
        score: to_score(&r, 0),
        ops: OpCounts::take(),
        cell_updates: r.cell_updates,
    })
}

/// [`engine_score`] with every query and boundary access recorded.
pub fn engine_score_probed(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<(EngineScore, AccessLog)> {
    let mut log = AccessLog::default();
    let r = single::<i32, _>(q, s, cfg, scheme, tuning, &mut log)?;
    Ok((to_score(&r, 0), log))
}

/// Whether a pair stays within the packed 16-bit range.
pub fn fits_packed(m: usize, n: usize, scheme: &ScoringScheme) -> bool {
    (m as i64 + n as i64) * scheme.max_term() < PACKED_LIMIT
}

/// Scores two independent pairs at once, one per 16-bit half of each lane.
pub fn engine_score_packed(
    pair_a: (&Sequence, &Sequence),
    pair_b: (&Sequence, &Sequence),
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<(EngineScore, EngineScore)> {
    let cfg = prepare(pair_a.0, pair_a.1, cfg, scheme, tuning)?;
    prepare(pair_b.0, pair_b.1, &cfg, scheme, tuning)?;
    for (q, s) in [pair_a, pair_b] {
        if !fits_packed(q.len(), s.len(), scheme) {
            return Err(Error::PackedRangeOverflow { m: q.len(), n: s.len() });
        }
    }
    let (qa, sa) = (pair_a.0.symbols(), pair_a.1.symbols());
    let (qb, sb) = (pair_b.0.symbols(), pair_b.1.symbols());
    let spec = PassSpec {
        queries: vec![&qa, &qb],
        subject_lens: vec![sa.len(), sb.len()],
        mode: cfg.mode(),
        scheme,
        left_open: None,
        k: tuning.k,
        capture_row: false,
        capture_col: false,
    };
    let r = pass_with::<Packed16, _>(&spec, &[&sa, &sb], tuning, &mut NoProbe);
    let mut a = to_score(&r, 0);
    let mut b = to_score(&r, 1);
    // Each half only spans its own stages.
    a.stages = tuning.stages(sa.len());
    b.stages = tuning.stages(sb.len());
    Ok((a, b))
}

impl StageBoundary {
    /// Column-0 initialization for `m` query rows.
    pub fn initial(m: usize, cfg: &AlignConfig, scheme: &ScoringScheme) -> Self {
        let mode = cfg.mode();
        let h: Vec<i32> = (0..=m).map(|r| mode.left(scheme, r, None)).collect();
        let alpha = scheme.open_surcharge() + scheme.extend();
        let gap = match scheme.gap_model {
            GapModel::Affine => h.iter().map(|v| v - alpha).collect(),
            GapModel::Linear => Vec::new(),
        };
        StageBoundary { h, gap }
    }
}

/// Runs one stage over the subject chunk held in `profile`, starting from
/// `boundary_in` (the left edge of the stage).
pub fn wavefront_stage(
    q: &Sequence,
    profile: &ScoringProfile,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
    boundary_in: &StageBoundary,
    stage_index: usize,
) -> Result<StageOutput> {
    tuning.validate()?;
    let cfg = validate_config(cfg, scheme)?;
    let m = q.len();
    let width = tuning.stage_width();
    if profile.width() != width {
        return Err(Error::InvalidTuning(format!(
            "profile width {} does not match stage width {width}",
            profile.width()
        )));
    }
    if boundary_in.h.len() != m + 1 {
        return Err(Error::InvalidTuning(format!(
            "boundary has {} rows, expected {}",
            boundary_in.h.len(),
            m + 1
        )));
    }
    let n = stage_index * width + profile.chunk_len;
    scheme.check_lengths(m, n, 2 * tuning.p)?;
    let qs = q.symbols();
    let spec = PassSpec {
        queries: vec![&qs],
        subject_lens: vec![n],
        mode: cfg.mode(),
        scheme,
        left_open: None,
        k: tuning.k,
        capture_row: false,
        capture_col: true,
    };
    let affine = scheme.gap_model == GapModel::Affine;
    let (h, gap, half, iterations) = dispatch!(i32, tuning, affine, |P, A| {
        let mut kernel = Kernel::<i32, P, A>::new(&spec);
        let bin = kernel.boundary_from_values(&boundary_in.h, &boundary_in.gap);
        let mut bout = kernel.empty_boundary();
        kernel.stage(stage_index, &[profile], &bin, &mut bout, &mut NoProbe);
        let (h, gap) = kernel.boundary_values(&bout);
        let half = kernel.halves.swap_remove(0);
        (h, if A { gap } else { Vec::new() }, half, kernel.iterations)
    });
    Ok(StageOutput {
        boundary_out: StageBoundary { h, gap },
        last_column: half.col_h,
        best: half.best,
        iterations,
        cells: half.cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refdp::{fill, ref_score};
    use crate::scoring::AlignType;
    use crate::seq::encode_sequence;
    use proptest::prelude::*;

    fn lin() -> ScoringScheme {
        ScoringScheme::linear(2, -1, 1).unwrap()
    }

    fn aff() -> ScoringScheme {
        ScoringScheme::affine(2, -1, 2, 1).unwrap()
    }

    fn seq(s: &str) -> Sequence {
        encode_sequence("s", s).unwrap()
    }

    fn cfg(t: AlignType, s: &ScoringScheme) -> AlignConfig {
        AlignConfig::score_only(t, s.gap_model)
    }

    #[test]
    fn global_identity() {
        let s = lin();
        let r = engine_score(
            &seq("ACGT"),
            &seq("ACGT"),
            &cfg(AlignType::Global, &s),
            &s,
            &EngineTuning::new(4, 1).unwrap(),
        )
        .unwrap();
        assert_eq!((r.score, r.end, r.cells_computed), (8, (4, 4), 16));
        assert_eq!(r.stages, 1);
    }

    #[test]
    fn semiglobal_two_stages() {
        let s = lin();
        let c = cfg(AlignType::SemiGlobal, &s);
        let t = EngineTuning::new(4, 1).unwrap();
        let r = engine_score(&seq("ACG"), &seq("TTACGTT"), &c, &s, &t).unwrap();
        assert_eq!((r.score, r.stages), (6, 2));
        let wide = EngineTuning::new(8, 1).unwrap();
        let one = engine_score(&seq("ACG"), &seq("TTACGTT"), &c, &s, &wide).unwrap();
        assert_eq!((one.score, one.end, one.stages), (r.score, r.end, 1));
    }

    #[test]
    fn packed_pairs() {
        let s = lin();
        let c = cfg(AlignType::Global, &s);
        let t = EngineTuning::new(4, 1).unwrap();
        let (a, b) =
            engine_score_packed((&seq("ACGT"), &seq("ACGT")), (&seq("ACGT"), &seq("AGT")), &c, &s, &t).unwrap();
        assert_eq!((a.score, b.score), (8, 5));
    }

    #[test]
    fn packed_range_refused() {
        let s = lin();
        let c = cfg(AlignType::Global, &s);
        let t = EngineTuning::new(4, 1).unwrap();
        let long = seq(&"A".repeat(4096));
        assert!(matches!(
            engine_score_packed((&long, &long), (&seq("A"), &seq("A")), &c, &s, &t),
            Err(Error::PackedRangeOverflow { .. })
        ));
    }

    #[test]
    fn bad_tuning_rejected() {
        assert!(EngineTuning::new(6, 1).is_err());
        assert!(EngineTuning::new(4, 0).is_err());
        assert!(EngineTuning::new(4, 17).is_err());
    }

    #[test]
    fn stage_single_global() {
        let s = lin();
        let c = cfg(AlignType::Global, &s);
        let t = EngineTuning::new(4, 1).unwrap();
        let q = seq("ACGT");
        let prof = build_scoring_profile(&seq("ACGT").symbols(), &s, &t).unwrap();
        let b = StageBoundary::initial(4, &c, &s);
        let out = wavefront_stage(&q, &prof, &c, &s, &t, &b, 0).unwrap();
        assert_eq!(*out.boundary_out.h.last().unwrap(), 8);
        assert_eq!(out.iterations, 4 + 4);
        assert_eq!(out.cells, 16);
    }

    #[test]
    fn stage_chain_matches_full_pass() {
        let s = aff();
        let c = cfg(AlignType::Global, &s);
        let t = EngineTuning::new(4, 2).unwrap();
        let q = seq("ACGTTGCAAC");
        let subj = seq("ACGGTTCAACGTAAGTC").symbols();
        let mut b = StageBoundary::initial(q.len(), &c, &s);
        let mut last = None;
        for (idx, chunk) in subj.chunks(t.stage_width()).enumerate() {
            let prof = build_scoring_profile(chunk, &s, &t).unwrap();
            let out = wavefront_stage(&q, &prof, &c, &s, &t, &b, idx).unwrap();
            b = out.boundary_out.clone();
            last = Some(out);
        }
        let d = fill(&q.symbols(), &subj, c.mode(), &s, None);
        assert_eq!(last.unwrap().last_column, d.column(subj.len()));
    }

    #[test]
    fn probe_accesses_are_blocked() {
        let s = aff();
        let c = cfg(AlignType::Local, &s);
        let t = EngineTuning::new(8, 2).unwrap();
        let (_, log) = engine_score_probed(&seq(&"ACGTA".repeat(9)), &seq(&"TTGCA".repeat(7)), &c, &s, &t).unwrap();
        assert!(log.query_loads.iter().all(|&(_, i)| i % 8 == 0));
        assert!(log.boundary_reads.iter().all(|&(_, i, rows)| i % 8 == 0 && rows == 8));
        assert!(log.boundary_writes.iter().all(|&(_, _, rows)| rows <= 8));
        let written: usize = log.boundary_writes.iter().filter(|w| w.0 == 0).map(|w| w.2).sum();
        assert_eq!(written, 45);
    }

    #[test]
    fn affine_global_update_is_seven_ops() {
        let s = aff();
        let c = cfg(AlignType::Global, &s);
        let t = EngineTuning::new(4, 2).unwrap();
        let r = engine_score_counted(&seq("ACGTTGCA"), &seq("AGTTCCA"), &c, &s, &t).unwrap();
        assert_eq!(r.ops.max, 4 * r.cell_updates);
        assert_eq!(r.ops.add_sub, 3 * r.cell_updates);
        let want = ref_score(&seq("ACGTTGCA"), &seq("AGTTCCA"), &c, &s);
        assert_eq!(r.score.score, want.score);
    }

    fn scheme_for(affine: bool) -> ScoringScheme {
        if affine {
            aff()
        } else {
            lin()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_reference(
            q in "[ACGT]{1,80}",
            s in "[ACGTN]{1,80}",
            ty in 0usize..3,
            affine in any::<bool>(),
            pi in 0usize..5,
            k in prop::sample::select(vec![1usize, 2, 4, 8]),
        ) {
            let scheme = scheme_for(affine);
            let c = cfg(AlignType::ALL[ty], &scheme);
            let t = EngineTuning::new(LANE_WIDTHS[pi], k).unwrap();
            let (q, s) = (seq(&q), seq(&s));
            let got = engine_score(&q, &s, &c, &scheme, &t).unwrap();
            let want = ref_score(&q, &s, &c, &scheme);
            prop_assert_eq!((got.score, got.end), (want.score, want.end));
            prop_assert_eq!(got.cells_computed, (q.len() * s.len()) as u64);
            prop_assert_eq!(got.iterations, (got.stages * (q.len() + t.p)) as u64);
        }

        #[test]
        fn packed_halves_match_unpacked(
            qa in "[ACGT]{1,60}", sa in "[ACGT]{1,60}",
            qb in "[ACGT]{1,60}", sb in "[ACGT]{1,60}",
            ty in 0usize..3,
            affine in any::<bool>(),
        ) {
            let scheme = scheme_for(affine);
            let c = cfg(AlignType::ALL[ty], &scheme);
            let t = EngineTuning::new(8, 2).unwrap();
            let (qa, sa, qb, sb) = (seq(&qa), seq(&sa), seq(&qb), seq(&sb));
            let (a, b) = engine_score_packed((&qa, &sa), (&qb, &sb), &c, &scheme, &t).unwrap();
            let ua = engine_score(&qa, &sa, &c, &scheme, &t).unwrap();
            let ub = engine_score(&qb, &sb, &c, &scheme, &t).unwrap();
            prop_assert_eq!((a.score, a.end), (ua.score, ua.end));
            prop_assert_eq!((b.score, b.end), (ub.score, ub.end));
        }

        #[test]
        fn stage_count_invariance(
            q in "[ACGT]{1,70}", s in "[ACGT]{1,120}",
            ty in 0usize..3, affine in any::<bool>(),
        ) {
            let scheme = scheme_for(affine);
            let c = cfg(AlignType::ALL[ty], &scheme);
            let (q, s) = (seq(&q), seq(&s));
            let a = engine_score(&q, &s, &c, &scheme, &EngineTuning::new(4, 1).unwrap()).unwrap();
            let b = engine_score(&q, &s, &c, &scheme, &EngineTuning::new(32, 4).unwrap()).unwrap();
            prop_assert_eq!((a.score, a.end), (b.score, b.end));
        }

        #[test]
        fn single_stage_column_matches_reference(
            q in "[ACGT]{1,40}", s in "[ACGT]{1,16}",
            ty in 0usize..3, affine in any::<bool>(),
        ) {
            let scheme = scheme_for(affine);
            let c = cfg(AlignType::ALL[ty], &scheme);
            let t = EngineTuning::new(4, 4).unwrap();
            let (q, s) = (seq(&q), seq(&s).symbols());
            let prof = build_scoring_profile(&s, &scheme, &t).unwrap();
            let b = StageBoundary::initial(q.len(), &c, &scheme);
            let out = wavefront_stage(&q, &prof, &c, &scheme, &t, &b, 0).unwrap();
            let d = fill(&q.symbols(), &s, c.mode(), &scheme, None);
            prop_assert_eq!(out.last_column, d.column(s.len()));
            prop_assert_eq!(out.iterations, (q.len() + 4) as u64);
        }
    }
}
