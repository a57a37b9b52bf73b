//! Full alignments: explicit predecessor matrices for short pairs, linear
//! space midpoint splitting for long ones.

mod explicit;
mod hirschberg;

use serde::{Deserialize, Serialize};

use crate::engine::{engine_score, score_pass, EngineTuning, PassOptions};
use crate::error::{Error, Result};
use crate::result::AlignmentResult;
use crate::scoring::{validate_config, AlignConfig, AlignType, BorderInit, DpMode, Extract, ResultMode, ScoringScheme};
use crate::seq::Sequence;

pub use explicit::{explicit_traceback, explicit_traceback_with, PredecessorMatrix, DEFAULT_EXPLICIT_THRESHOLD};

/// Optimal-midpoint crossing of a split row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitPoint {
    pub row: usize,
    pub col: usize,
    /// The path crosses the row inside a query gap.
    pub in_gap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoints {
    pub q_start: usize,
    pub s_start: usize,
    pub q_end: usize,
    pub s_end: usize,
    pub score: i32,
    pub cells_computed: u64,
}

fn reversed(v: &[u8]) -> Vec<u8> {
    v.iter().rev().copied().collect()
}

/// Start and end of an optimal local or semi-global alignment from a forward
/// and a reverse score pass.
pub fn locate_endpoints(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<Endpoints> {
    let cfg = validate_config(cfg, scheme)?;
    let extract = match cfg.align_type {
        AlignType::Local => Extract::AllCells,
        AlignType::SemiGlobal => Extract::LastRowCol,
        AlignType::Global => {
            return Err(Error::ConfigMismatch(
                "endpoint location applies to local and semiglobal alignment".into(),
            ))
        }
    };
    let fwd = engine_score(q, s, &cfg, scheme, tuning)?;
    let (qe, se) = fwd.end;
    if cfg.align_type == AlignType::Local && fwd.score == 0 {
        return Err(Error::EmptyAlignment);
    }
    let mut cells = fwd.cells_computed;
    let (qs, ss) = if qe == 0 || se == 0 {
        (qe, se)
    } else {
        let (rq, rs) = (reversed(&q.symbols()[..qe]), reversed(&s.symbols()[..se]));
        let mode = DpMode {
            init: BorderInit::Gap,
            floor: false,
            extract,
        };
        let r = score_pass(
            &rq,
            &rs,
            mode,
            scheme,
            tuning,
            PassOptions {
                left_open: None,
                capture_row: false,
            },
        );
        let half = &r.halves[0];
        cells += half.cells;
        debug_assert_eq!(half.best.score, fwd.score);
        (qe - half.best.i, se - half.best.j)
    };
    Ok(Endpoints {
        q_start: qs,
        s_start: ss,
        q_end: qe,
        s_end: se,
        score: fwd.score,
        cells_computed: cells,
    })
}

/// Full alignment in linear space for any alignment type.
pub fn hirschberg(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<AlignmentResult> {
    hirschberg_with(q, s, cfg, scheme, tuning, DEFAULT_EXPLICIT_THRESHOLD)
}

pub fn hirschberg_with(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
    threshold: usize,
) -> Result<AlignmentResult> {
    tuning.validate()?;
    let cfg = validate_config(cfg, scheme)?;
    scheme.check_lengths(q.len(), s.len(), 2 * tuning.p)?;
    let (qs, ss) = (q.symbols(), s.symbols());
    if cfg.align_type == AlignType::Global {
        return Ok(hirschberg::align_global(&qs, &ss, scheme, tuning, threshold));
    }
    let ends = match locate_endpoints(q, s, &cfg, scheme, tuning) {
        Ok(e) => e,
        Err(Error::EmptyAlignment) => {
            let cells = (q.len() * s.len()) as u64;
            return Ok(AlignmentResult::aligned(0, (0, 0), (0, 0), Vec::new(), cells));
        }
        Err(e) => return Err(e),
    };
    let inner = hirschberg::align_global(
        &qs[ends.q_start..ends.q_end],
        &ss[ends.s_start..ends.s_end],
        scheme,
        tuning,
        threshold,
    );
    debug_assert_eq!(inner.score, ends.score);
    Ok(AlignmentResult::aligned(
        ends.score,
        (ends.q_start, ends.s_start),
        (ends.q_end, ends.s_end),
        inner.ops.unwrap_or_default(),
        ends.cells_computed + inner.cells_computed,
    ))
}

/// Aligns one pair per `cfg.result_mode`.
pub fn align_pair(
    q: &Sequence,
    s: &Sequence,
    cfg: &AlignConfig,
    scheme: &ScoringScheme,
    tuning: &EngineTuning,
) -> Result<AlignmentResult> {
    match cfg.result_mode {
        ResultMode::ScoreOnly => {
            let r = engine_score(q, s, cfg, scheme, tuning)?;
            let start = (cfg.align_type == AlignType::Global).then_some((0, 0));
            Ok(AlignmentResult::score_only(r.score, r.end, start, r.cells_computed))
        }
        ResultMode::Traceback => hirschberg(q, s, cfg, scheme, tuning),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::cigar_string;
    use crate::refdp::ref_score;
    use crate::scoring::GapModel;
    use crate::seq::encode_sequence;
    use proptest::prelude::*;

    fn seq(s: &str) -> Sequence {
        encode_sequence("x", s).unwrap()
    }

    fn lin() -> ScoringScheme {
        ScoringScheme::linear(2, -1, 1).unwrap()
    }

    fn aff() -> ScoringScheme {
        ScoringScheme::affine(2, -1, 2, 1).unwrap()
    }

    fn tuning() -> EngineTuning {
        EngineTuning::new(4, 2).unwrap()
    }

    #[test]
    fn local_rectangle() {
        let s = lin();
        let c = AlignConfig::traceback(AlignType::Local, GapModel::Linear);
        let e = locate_endpoints(&seq("TTACGTT"), &seq("ACG"), &c, &s, &tuning()).unwrap();
        assert_eq!((e.q_start, e.s_start, e.q_end, e.s_end, e.score), (2, 0, 5, 3, 6));
    }

    #[test]
    fn local_all_mismatch_is_empty() {
        let s = lin();
        let c = AlignConfig::traceback(AlignType::Local, GapModel::Linear);
        assert!(matches!(
            locate_endpoints(&seq("AAAA"), &seq("CCCC"), &c, &s, &tuning()),
            Err(Error::EmptyAlignment)
        ));
        let r = hirschberg(&seq("AAAA"), &seq("CCCC"), &c, &s, &tuning()).unwrap();
        assert_eq!((r.score, r.q_start, r.q_end, r.ops), (0, Some(0), 0, Some(vec![])));
    }

    #[test]
    fn semiglobal_span() {
        let s = lin();
        let c = AlignConfig::traceback(AlignType::SemiGlobal, GapModel::Linear);
        let e = locate_endpoints(&seq("ACG"), &seq("TTACGTT"), &c, &s, &tuning()).unwrap();
        assert_eq!((e.q_start, e.q_end, e.s_start, e.s_end, e.score), (0, 3, 2, 5, 6));
    }

    #[test]
    fn long_identity() {
        let s = lin();
        let c = AlignConfig::traceback(AlignType::Global, GapModel::Linear);
        let q = seq(&"ACGT".repeat(500));
        let r = hirschberg(&q, &q, &c, &s, &EngineTuning::new(16, 4).unwrap()).unwrap();
        assert_eq!(r.score, 4000);
        assert_eq!(cigar_string(&r), "2000M");
        assert!(r.cells_computed <= 2 * 2000 * 2000);
    }

    #[test]
    fn gap_across_the_midline() {
        let s = aff();
        let c = AlignConfig::traceback(AlignType::Global, GapModel::Affine);
        let (q, t) = (seq(&"A".repeat(40)), seq(&"A".repeat(20)));
        let r = hirschberg_with(&q, &t, &c, &s, &tuning(), 8).unwrap();
        assert_eq!(r.score, ref_score(&q, &t, &c, &s).score);
        assert_eq!(r.score, 40 - (2 + 19));
        assert_eq!(r.rescore(&q.symbols(), &t.symbols(), &s).unwrap(), r.score);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn split_traceback_is_optimal(
            q in "[ACGT]{1,120}", s in "[ACGTN]{1,120}",
            ty in 0usize..3, affine in any::<bool>(),
            threshold in prop::sample::select(vec![2usize, 8, 128]),
        ) {
            let scheme = if affine { aff() } else { lin() };
            let c = AlignConfig::traceback(AlignType::ALL[ty], scheme.gap_model);
            let (q, s) = (seq(&q), seq(&s));
            let r = hirschberg_with(&q, &s, &c, &scheme, &tuning(), threshold).unwrap();
            let want = ref_score(&q, &s, &c, &scheme);
            prop_assert_eq!(r.score, want.score);
            prop_assert_eq!(r.rescore(&q.symbols(), &s.symbols(), &scheme).unwrap(), want.score);
        }

        #[test]
        fn affine_open_heavy(
            q in "[AC]{1,60}", s in "[AC]{1,60}",
            open in 0i32..6, ext in 0i32..3,
        ) {
            let scheme = ScoringScheme::affine(1, -2, open, ext).unwrap();
            let c = AlignConfig::traceback(AlignType::Global, GapModel::Affine);
            let (q, s) = (seq(&q), seq(&s));
            let r = hirschberg_with(&q, &s, &c, &scheme, &tuning(), 2).unwrap();
            prop_assert_eq!(r.score, ref_score(&q, &s, &c, &scheme).score);
            prop_assert_eq!(r.rescore(&q.symbols(), &s.symbols(), &scheme).unwrap(), r.score);
        }
    }
}
