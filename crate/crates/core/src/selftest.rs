//! Randomized equivalence suite: engine, traceback and packed paths against
//! the reference DP.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{engine_score, engine_score_packed, fits_packed, EngineTuning, LANE_WIDTHS};
use crate::refdp::{ref_score, RefScore};
use crate::scoring::{AlignConfig, AlignType, GapModel, ResultMode, ScoringScheme};
use crate::seq::Sequence;
use crate::traceback::{align_pair, explicit_traceback, DEFAULT_EXPLICIT_THRESHOLD};

pub const MAX_CASE_LEN: usize = 160;

pub type Oracle = dyn Fn(&Sequence, &Sequence, &AlignConfig, &ScoringScheme) -> RefScore;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCase {
    pub index: usize,
    pub query: String,
    pub subject: String,
    pub align_type: AlignType,
    pub gap_model: GapModel,
    pub scheme: ScoringScheme,
    pub tuning: EngineTuning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub seed: u64,
    pub check: String,
    pub expected: String,
    pub got: String,
    pub case: SelfCase,
}

impl Mismatch {
    pub fn repro(&self) -> String {
        serde_json::to_string(self).expect("mismatch serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub passed: usize,
    pub total: usize,
    pub failure: Option<Mismatch>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.passed == self.total
    }
}

fn random_dna(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len)
        .map(|_| match rng.gen_range(0..50) {
            0 => 'N',
            x => b"ACGT"[x % 4] as char,
        })
        .collect()
}

/// Case `index` of the suite seeded by `seed`.
pub fn generate_case(seed: u64, index: usize) -> SelfCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let m = rng.gen_range(1..=MAX_CASE_LEN);
    let n = if rng.gen_bool(0.3) {
        m
    } else {
        rng.gen_range(1..=MAX_CASE_LEN)
    };
    let query = random_dna(&mut rng, m);
    let mut subject = random_dna(&mut rng, n);
    if rng.gen_bool(0.3) {
        let keep = n.min(m);
        subject.replace_range(..keep, &query[..keep]);
    }
    let align_type = *AlignType::ALL.choose(&mut rng).unwrap();
    let gap_model = if rng.gen_bool(0.5) {
        GapModel::Affine
    } else {
        GapModel::Linear
    };
    let match_score = rng.gen_range(1..=5);
    let mismatch_score = -rng.gen_range(0..=5);
    let gap_open = rng.gen_range(0..=6);
    let gap_extend = rng.gen_range(0..=3);
    let scheme = ScoringScheme::new(match_score, mismatch_score, gap_open, gap_extend, gap_model)
        .expect("generated scheme is valid");
    let p = *LANE_WIDTHS.choose(&mut rng).unwrap();
    let k = rng.gen_range(1..=16);
    let tuning = EngineTuning { p, k, packed: false };
    SelfCase {
        index,
        query,
        subject,
        align_type,
        gap_model,
        scheme,
        tuning,
    }
}

fn check_case(case: &SelfCase, oracle: &Oracle) -> Result<(), (String, String, String)> {
    let fail = |check: &str, e: &dyn std::fmt::Debug, g: &dyn std::fmt::Debug| {
        (check.to_string(), format!("{e:?}"), format!("{g:?}"))
    };
    let q = Sequence::from_bytes("q", case.query.as_bytes()).map_err(|e| fail("parse", &"ok", &e))?;
    let s = Sequence::from_bytes("s", case.subject.as_bytes()).map_err(|e| fail("parse", &"ok", &e))?;
    let cfg = AlignConfig::score_only(case.align_type, case.gap_model);
    let want = oracle(&q, &s, &cfg, &case.scheme);

    let got = engine_score(&q, &s, &cfg, &case.scheme, &case.tuning).map_err(|e| fail("engine", &want, &e))?;
    if (got.score, got.end) != (want.score, want.end) {
        return Err(fail("engine", &(want.score, want.end), &(got.score, got.end)));
    }

    let tb = AlignConfig::new(case.align_type, case.gap_model, ResultMode::Traceback);
    let (qs, ss) = (q.symbols(), s.symbols());
    let r = align_pair(&q, &s, &tb, &case.scheme, &case.tuning).map_err(|e| fail("hirschberg", &want, &e))?;
    let rescored = r
        .rescore(&qs, &ss, &case.scheme)
        .map_err(|e| fail("hirschberg", &want, &e))?;
    if (r.score, rescored) != (want.score, want.score) {
        return Err(fail("hirschberg", &want.score, &(r.score, rescored)));
    }

    if q.len() + s.len() <= DEFAULT_EXPLICIT_THRESHOLD {
        let r = explicit_traceback(&q, &s, &tb, &case.scheme).map_err(|e| fail("explicit", &want, &e))?;
        let rescored = r
            .rescore(&qs, &ss, &case.scheme)
            .map_err(|e| fail("explicit", &want, &e))?;
        if (r.score, rescored) != (want.score, want.score) {
            return Err(fail("explicit", &want.score, &(r.score, rescored)));
        }
    }

    if fits_packed(q.len(), s.len(), &case.scheme) {
        let packed = case.tuning.packed(true);
        let (a, b) = engine_score_packed((&q, &s), (&s, &q), &cfg, &case.scheme, &packed)
            .map_err(|e| fail("packed", &want, &e))?;
        let back = oracle(&s, &q, &cfg, &case.scheme);
        if (a.score, a.end, b.score, b.end) != (want.score, want.end, back.score, back.end) {
            return Err(fail(
                "packed",
                &(want.score, want.end, back.score, back.end),
                &(a.score, a.end, b.score, b.end),
            ));
        }
    }
    Ok(())
}

/// Runs `cases` generated cases against `oracle`, stopping at the first
/// mismatch.
pub fn run_with_oracle(seed: u64, cases: usize, oracle: &Oracle) -> SelftestReport {
    for index in 0..cases {
        let case = generate_case(seed, index);
        if let Err((check, expected, got)) = check_case(&case, oracle) {
            return SelftestReport {
                passed: index,
                total: cases,
                failure: Some(Mismatch {
                    seed,
                    check,
                    expected,
                    got,
                    case,
                }),
            };
        }
    }
    SelftestReport {
        passed: cases,
        total: cases,
        failure: None,
    }
}

pub fn run_selftest(seed: u64, cases: usize) -> SelftestReport {
    run_with_oracle(seed, cases, &ref_score)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_selftest(7, 60);
        assert!(r.ok(), "{:?}", r.failure.map(|f| f.repro()));
        assert_eq!(r.passed, 60);
    }

    #[test]
    fn cases_are_reproducible() {
        assert_eq!(generate_case(3, 11), generate_case(3, 11));
        assert_ne!(generate_case(3, 11), generate_case(4, 11));
    }

    #[test]
    fn faulty_oracle_is_caught() {
        let off_by_one = |q: &Sequence, s: &Sequence, c: &AlignConfig, sc: &ScoringScheme| {
            let r = ref_score(q, s, c, sc);
            RefScore {
                score: r.score + 1,
                ..r
            }
        };
        let r = run_with_oracle(7, 10, &off_by_one);
        let f = r.failure.expect("fault detected");
        assert_eq!((r.passed, f.check.as_str()), (0, "engine"));
        let back: Mismatch = serde_json::from_str(&f.repro()).unwrap();
        assert_eq!(back.case, generate_case(7, 0));
    }
}
