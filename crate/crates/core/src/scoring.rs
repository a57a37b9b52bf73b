//! Scoring schemes, alignment configuration and the DP recurrence variants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::FLAGGED;

/// Finite stand-in for minus infinity in 32-bit score arithmetic.
pub const NEG_INF: i32 = -(1 << 30);

/// Every reachable score magnitude (including the row offsets used by the
/// affine kernel) stays below this bound, leaving 2^30 of headroom to
/// [`NEG_INF`] and 2^31 to wrap-around.
pub const SCORE_BOUND: i64 = 1 << 29;

/// Hard cap on any single sequence length, independent of the scheme.
pub const MAX_SEQ_LEN: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapModel {
    Linear,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignType {
    Local,
    Global,
    #[serde(rename = "semiglobal")]
    SemiGlobal,
}

impl AlignType {
    pub const ALL: [AlignType; 3] = [AlignType::Local, AlignType::Global, AlignType::SemiGlobal];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultMode {
    ScoreOnly,
    Traceback,
}

/// Match/mismatch substitution plus gap penalties.
///
/// Penalties are stored as non-negative costs. For the linear model only
/// `gap_open` is used and every gap symbol costs that much; for the affine
/// model a gap of length `k` costs `gap_open + (k - 1) * gap_extend`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringScheme {
    pub match_score: i32,
    pub mismatch_score: i32,
    pub gap_open: i32,
    pub gap_extend: i32,
    pub gap_model: GapModel,
}

impl ScoringScheme {
    pub fn new(
        match_score: i32,
        mismatch_score: i32,
        gap_open: i32,
        gap_extend: i32,
        gap_model: GapModel,
    ) -> Result<Self> {
        let s = ScoringScheme {
            match_score,
            mismatch_score,
            gap_open,
            gap_extend,
            gap_model,
        };
        s.check()?;
        Ok(s)
    }

    pub fn linear(match_score: i32, mismatch_score: i32, gap: i32) -> Result<Self> {
        Self::new(match_score, mismatch_score, gap, gap, GapModel::Linear)
    }

    pub fn affine(match_score: i32, mismatch_score: i32, open: i32, extend: i32) -> Result<Self> {
        Self::new(match_score, mismatch_score, open, extend, GapModel::Affine)
    }

    pub fn check(&self) -> Result<()> {
        if self.gap_open < 0 || self.gap_extend < 0 {
            return Err(Error::InvalidScheme(format!(
                "gap penalties must be non-negative (open {}, extend {})",
                self.gap_open, self.gap_extend
            )));
        }
        const LIMIT: i32 = 1 << 20;
        for v in [self.match_score, self.mismatch_score, self.gap_open, self.gap_extend] {
            if v.unsigned_abs() > LIMIT as u32 {
                return Err(Error::InvalidScheme(format!("score term {v} exceeds +/-{LIMIT}")));
            }
        }
        Ok(())
    }

    /// Substitution score on unpacked symbols; [`FLAGGED`] never matches.
    #[inline]
    pub fn substitution(&self, a: u8, b: u8) -> i32 {
        if a == b && a != FLAGGED {
            self.match_score
        } else {
            self.mismatch_score
        }
    }

    /// Per-symbol gap extension cost actually used by the recurrences.
    ///
    /// With the affine model an extension dearer than an opening is never
    /// chosen (closing and reopening is cheaper), so it is capped at `gap_open`.
    #[inline]
    pub fn extend(&self) -> i32 {
        match self.gap_model {
            GapModel::Linear => self.gap_open,
            GapModel::Affine => self.gap_extend.min(self.gap_open),
        }
    }

    /// One-time surcharge paid when a gap opens, on top of [`Self::extend`].
    #[inline]
    pub fn open_surcharge(&self) -> i32 {
        self.gap_open - self.extend()
    }

    /// Cost of a gap run of `len` symbols.
    #[inline]
    pub fn gap_cost(&self, len: usize) -> i64 {
        if len == 0 {
            0
        } else {
            self.open_surcharge() as i64 + len as i64 * self.extend() as i64
        }
    }

    /// Largest magnitude of any additive term.
    pub fn max_term(&self) -> i64 {
        [
            self.match_score.unsigned_abs(),
            self.mismatch_score.unsigned_abs(),
            self.gap_open.unsigned_abs(),
            self.gap_extend.unsigned_abs(),
            1,
        ]
        .into_iter()
        .max()
        .unwrap_or(1) as i64
    }

    /// Whether a pair of lengths (plus `slack` rows of lane padding) keeps
    /// every score within [`SCORE_BOUND`].
    pub fn fits_i32(&self, m: usize, n: usize, slack: usize) -> bool {
        m <= MAX_SEQ_LEN
            && n <= MAX_SEQ_LEN
            && (m as i64 + n as i64 + slack as i64 + 2) * 2 * self.max_term() < SCORE_BOUND
    }

    pub fn check_lengths(&self, m: usize, n: usize, slack: usize) -> Result<()> {
        if self.fits_i32(m, n, slack) {
            Ok(())
        } else {
            Err(Error::LengthOverflow { m, n })
        }
    }
}

pub fn substitution_score(scheme: &ScoringScheme, a: u8, b: u8) -> i32 {
    scheme.substitution(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignConfig {
    pub align_type: AlignType,
    pub gap_model: GapModel,
    pub result_mode: ResultMode,
    /// Floor of the H recurrence; filled in by [`validate_config`].
    pub nu: Option<i32>,
}

impl AlignConfig {
    pub fn new(align_type: AlignType, gap_model: GapModel, result_mode: ResultMode) -> Self {
        AlignConfig {
            align_type,
            gap_model,
            result_mode,
            nu: None,
        }
    }

    pub fn score_only(align_type: AlignType, gap_model: GapModel) -> Self {
        Self::new(align_type, gap_model, ResultMode::ScoreOnly)
    }

    pub fn traceback(align_type: AlignType, gap_model: GapModel) -> Self {
        Self::new(align_type, gap_model, ResultMode::Traceback)
    }

    pub fn expected_nu(&self) -> i32 {
        match self.align_type {
            AlignType::Local => 0,
            _ => NEG_INF,
        }
    }

    pub fn mode(&self) -> DpMode {
        DpMode::for_type(self.align_type)
    }
}

/// Checks that `cfg` and `scheme` agree and fills in the floor ν.
pub fn validate_config(cfg: &AlignConfig, scheme: &ScoringScheme) -> Result<AlignConfig> {
    scheme.check()?;
    if cfg.gap_model != scheme.gap_model {
        return Err(Error::ConfigMismatch(format!(
            "config uses {:?} gaps but scheme is {:?}",
            cfg.gap_model, scheme.gap_model
        )));
    }
    let nu = cfg.expected_nu();
    if let Some(given) = cfg.nu {
        if given != nu {
            return Err(Error::ConfigMismatch(format!(
                "nu {given} is inconsistent with {:?} alignment",
                cfg.align_type
            )));
        }
    }
    if scheme.gap_model == GapModel::Affine && scheme.gap_extend > scheme.gap_open {
        log::warn!(
            "gap extension {} exceeds gap opening {}; extensions are scored as reopenings",
            scheme.gap_extend,
            scheme.gap_open
        );
    }
    Ok(AlignConfig { nu: Some(nu), ..*cfg })
}

/// Initialization of row 0 and column 0 of H.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderInit {
    /// All zeros (local and semi-global).
    Zero,
    /// Gap penalties from the origin (global).
    Gap,
}

/// Where the optimum is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extract {
    /// Cell (m, n).
    Corner,
    /// Maximum over every cell, ties to the smallest (i, j).
    AllCells,
    /// Maximum over the last row and last column, ties to the smallest (i, j).
    LastRowCol,
}

/// One concrete variant of the recurrence: border initialization, floor and
/// optimum location. The three alignment types are the standard combinations;
/// traceback also runs end-anchored variants (gap borders with a free end).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpMode {
    pub init: BorderInit,
    pub floor: bool,
    pub extract: Extract,
}

impl DpMode {
    pub fn for_type(t: AlignType) -> Self {
        match t {
            AlignType::Local => DpMode {
                init: BorderInit::Zero,
                floor: true,
                extract: Extract::AllCells,
            },
            AlignType::Global => DpMode {
                init: BorderInit::Gap,
                floor: false,
                extract: Extract::Corner,
            },
            AlignType::SemiGlobal => DpMode {
                init: BorderInit::Zero,
                floor: false,
                extract: Extract::LastRowCol,
            },
        }
    }

    /// H(0, j) for this mode.
    pub fn top(&self, scheme: &ScoringScheme, j: usize) -> i32 {
        match self.init {
            BorderInit::Zero => 0,
            BorderInit::Gap => -(scheme.gap_cost(j) as i32),
        }
    }

    /// H(i, 0) for this mode; `left_open` overrides the opening surcharge of
    /// a leading query gap (used when a subproblem continues a gap).
    pub fn left(&self, scheme: &ScoringScheme, i: usize, left_open: Option<i32>) -> i32 {
        match self.init {
            BorderInit::Zero => 0,
            BorderInit::Gap if i == 0 => 0,
            BorderInit::Gap => {
                let open = left_open.unwrap_or(scheme.open_surcharge()) as i64;
                -((open + i as i64 * scheme.extend() as i64) as i32)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_linear() -> ScoringScheme {
        ScoringScheme::linear(2, -1, 1).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let s = unit_linear();
        assert_eq!(substitution_score(&s, 0, 0), 2);
        assert_eq!(substitution_score(&s, 0, 1), -1);
        assert_eq!(substitution_score(&s, FLAGGED, FLAGGED), -1);
        assert_eq!(substitution_score(&s, FLAGGED, 0), -1);
    }

    #[test]
    fn validate_fills_nu() {
        let s = unit_linear();
        let local = validate_config(&AlignConfig::score_only(AlignType::Local, GapModel::Linear), &s).unwrap();
        assert_eq!(local.nu, Some(0));
        let global = validate_config(&AlignConfig::score_only(AlignType::Global, GapModel::Linear), &s).unwrap();
        assert_eq!(global.nu, Some(NEG_INF));
        let semi = validate_config(&AlignConfig::score_only(AlignType::SemiGlobal, GapModel::Linear), &s).unwrap();
        assert_eq!(semi.nu, Some(NEG_INF));
    }

    #[test]
    fn gap_model_mismatch_rejected() {
        let affine = ScoringScheme::affine(2, -1, 2, 1).unwrap();
        let cfg = AlignConfig::score_only(AlignType::Global, GapModel::Linear);
        assert!(matches!(validate_config(&cfg, &affine), Err(Error::ConfigMismatch(_))));
    }

    #[test]
    fn inconsistent_nu_rejected() {
        let cfg = AlignConfig {
            nu: Some(0),
            ..AlignConfig::score_only(AlignType::Global, GapModel::Linear)
        };
        assert!(validate_config(&cfg, &unit_linear()).is_err());
    }

    #[test]
    fn negative_penalty_rejected() {
        assert!(ScoringScheme::linear(2, -1, -1).is_err());
    }

    #[test]
    fn extension_above_open_is_capped() {
        let s = ScoringScheme::affine(2, -1, 2, 5).unwrap();
        assert_eq!(s.extend(), 2);
        assert_eq!(s.open_surcharge(), 0);
        assert_eq!(s.gap_cost(3), 6);
    }

    #[test]
    fn gap_costs() {
        let lin = unit_linear();
        assert_eq!(lin.gap_cost(0), 0);
        assert_eq!(lin.gap_cost(3), 3);
        let aff = ScoringScheme::affine(2, -1, 2, 1).unwrap();
        assert_eq!(aff.gap_cost(1), 2);
        assert_eq!(aff.gap_cost(2), 3);
        assert_eq!(aff.gap_cost(10), 11);
    }

    #[test]
    fn init_tables_match_displays() {
        let aff = ScoringScheme::affine(2, -1, 2, 1).unwrap();
        let g = DpMode::for_type(AlignType::Global);
        // -alpha - beta (j - 1)
        assert_eq!(g.top(&aff, 1), -2);
        assert_eq!(g.top(&aff, 4), -5);
        assert_eq!(g.left(&aff, 3, None), -4);
        assert_eq!(g.left(&aff, 3, Some(0)), -3);
        let l = DpMode::for_type(AlignType::Local);
        assert_eq!(l.top(&aff, 7), 0);
        assert_eq!(l.left(&aff, 7, None), 0);
    }

    proptest! {
        #[test]
        fn substitution_symmetric(a in 0u8..5, b in 0u8..5, ma in -5i32..6, mm in -5i32..6) {
            let s = ScoringScheme::linear(ma, mm, 1).unwrap();
            prop_assert_eq!(s.substitution(a, b), s.substitution(b, a));
        }

        #[test]
        fn neg_inf_headroom(m in 1usize..200_000, n in 1usize..200_000, t in 1i32..64) {
            let s = ScoringScheme::affine(t, -t, t, t).unwrap();
            if s.fits_i32(m, n, 64) {
                let worst = (m + n + 66) as i64 * 2 * s.max_term();
                prop_assert!(NEG_INF as i64 - worst > i32::MIN as i64);
                prop_assert!(worst < -(NEG_INF as i64));
            }
        }
    }
}
