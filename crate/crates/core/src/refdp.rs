//! Quadratic-space reference DP.
//!
//! Materializes H (and E, F for affine gaps) over the full `(m+1) x (n+1)`
//! grid. Slow on purpose: it is the oracle every faster path is checked
//! against.

use crate::result::{push_run, reversed_runs, AlignmentResult, Argmax, EditOp, EditRun};
use crate::scoring::{AlignConfig, BorderInit, DpMode, Extract, GapModel, ScoringScheme, NEG_INF};
use crate::seq::Sequence;

#[derive(Debug, Clone)]
pub struct DpMatrices {
    pub m: usize,
    pub n: usize,
    h: Vec<i32>,
    e: Option<Vec<i32>>,
    f: Option<Vec<i32>>,
    alpha: i32,
    beta: i32,
    pub mode: DpMode,
    pub best: Argmax,
}

impl DpMatrices {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }

    pub fn h(&self, i: usize, j: usize) -> i32 {
        self.h[self.at(i, j)]
    }

    /// Vertical-gap state (query symbol against a gap).
    pub fn e(&self, i: usize, j: usize) -> i32 {
        match &self.e {
            Some(e) => e[self.at(i, j)],
            None if i == 0 => NEG_INF,
            None => self.h(i - 1, j) - self.alpha,
        }
    }

    /// Horizontal-gap state (subject symbol against a gap).
    pub fn f(&self, i: usize, j: usize) -> i32 {
        match &self.f {
            Some(f) => f[self.at(i, j)],
            None if j == 0 => NEG_INF,
            None => self.h(i, j - 1) - self.alpha,
        }
    }

    pub fn column(&self, j: usize) -> Vec<i32> {
        (0..=self.m).map(|i| self.h(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<i32> {
        (0..=self.n).map(|j| self.h(i, j)).collect()
    }

    pub fn e_row(&self, i: usize) -> Vec<i32> {
        (0..=self.n).map(|j| self.e(i, j)).collect()
    }
}

/// Fills the matrices for `mode`. `left_open` replaces the gap-opening
/// surcharge of column 0 under gap initialization.
pub fn fill(q: &[u8], s: &[u8], mode: DpMode, scheme: &ScoringScheme, left_open: Option<i32>) -> DpMatrices {
    let (m, n) = (q.len(), s.len());
    let w = n + 1;
    let affine = scheme.gap_model == GapModel::Affine;
    let alpha = scheme.open_surcharge() + scheme.extend();
    let beta = scheme.extend();
    let mut h = vec![0i32; (m + 1) * w];
    let mut e = affine.then(|| vec![NEG_INF; (m + 1) * w]);
    let mut f = affine.then(|| vec![NEG_INF; (m + 1) * w]);

    for (j, v) in h[..=n].iter_mut().enumerate() {
        *v = mode.top(scheme, j);
    }
    for i in 1..=m {
        h[i * w] = mode.left(scheme, i, left_open);
        if let (Some(e), BorderInit::Gap) = (e.as_mut(), mode.init) {
            e[i * w] = h[i * w];
        }
    }
    if let (Some(f), BorderInit::Gap) = (f.as_mut(), mode.init) {
        f[1..=n].copy_from_slice(&h[1..=n]);
    }

    let nu = if mode.floor { 0 } else { NEG_INF };
    for i in 1..=m {
        for j in 1..=n {
            let diag = h[(i - 1) * w + j - 1] + scheme.substitution(q[i - 1], s[j - 1]);
            let (ev, fv) = match (&mut e, &mut f) {
                (Some(e), Some(f)) => {
                    let ev = (e[(i - 1) * w + j] - beta).max(h[(i - 1) * w + j] - alpha);
                    let fv = (f[i * w + j - 1] - beta).max(h[i * w + j - 1] - alpha);
                    e[i * w + j] = ev;
                    f[i * w + j] = fv;
                    (ev, fv)
                }
                _ => (h[(i - 1) * w + j] - alpha, h[i * w + j - 1] - alpha),
            };
            h[i * w + j] = diag.max(ev).max(fv).max(nu);
        }
    }

    let mut best = Argmax::NONE;
    match mode.extract {
        Extract::Corner => best.offer(h[m * w + n], m, n),
        Extract::AllCells => {
            for i in 0..=m {
                for j in 0..=n {
                    best.offer(h[i * w + j], i, j);
                }
            }
        }
        Extract::LastRowCol => {
            for j in 0..=n {
                best.offer(h[m * w + j], m, j);
            }
            for i in 0..=m {
                best.offer(h[i * w + n], i, n);
            }
        }
    }

    DpMatrices {
        m,
        n,
        h,
        e,
        f,
        alpha,
        beta,
        mode,
        best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefScore {
    pub score: i32,
    pub end: (usize, usize),
}

pub fn ref_score(q: &Sequence, s: &Sequence, cfg: &AlignConfig, scheme: &ScoringScheme) -> RefScore {
    let d = fill(&q.symbols(), &s.symbols(), cfg.mode(), scheme, None);
    RefScore {
        score: d.best.score,
        end: (d.best.i, d.best.j),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    H,
    E,
    F,
}

/// Walks back from `end` through the filled matrices. Priority at an H cell:
/// zero-stop (floored modes), diagonal, vertical gap, horizontal gap. Inside a
/// gap state extension is preferred over opening.
pub(crate) fn trace_matrices(
    d: &DpMatrices,
    q: &[u8],
    s: &[u8],
    scheme: &ScoringScheme,
    end: (usize, usize),
) -> ((usize, usize), Vec<EditRun>) {
    let (mut i, mut j) = end;
    let mut rev: Vec<EditRun> = Vec::new();
    let mut state = State::H;
    let affine = d.e.is_some();
    loop {
        match state {
            State::H => {
                let hv = d.h(i, j);
                if d.mode.floor && hv == 0 {
                    break;
                }
                if i == 0 || j == 0 {
                    if d.mode.init == BorderInit::Gap {
                        push_run(&mut rev, EditOp::Insertion, i);
                        push_run(&mut rev, EditOp::Deletion, j);
                        i = 0;
                        j = 0;
                    }
                    break;
                }
                if hv == d.h(i - 1, j - 1) + scheme.substitution(q[i - 1], s[j - 1]) {
                    push_run(&mut rev, EditOp::Match, 1);
                    i -= 1;
                    j -= 1;
                } else if hv == d.e(i, j) {
                    state = State::E;
                } else if hv == d.f(i, j) {
                    state = State::F;
                } else {
                    unreachable!("H({i},{j}) has no predecessor");
                }
            }
            State::E => {
                push_run(&mut rev, EditOp::Insertion, 1);
                let extend = affine && i > 1 && d.e(i, j) == d.e(i - 1, j) - d.beta;
                i -= 1;
                if !extend {
                    state = State::H;
                }
            }
            State::F => {
                push_run(&mut rev, EditOp::Deletion, 1);
                let extend = affine && j > 1 && d.f(i, j) == d.f(i, j - 1) - d.beta;
                j -= 1;
                if !extend {
                    state = State::H;
                }
            }
        }
    }
    ((i, j), reversed_runs(rev))
}

pub fn ref_traceback(q: &Sequence, s: &Sequence, cfg: &AlignConfig, scheme: &ScoringScheme) -> AlignmentResult {
    let (qs, ss) = (q.symbols(), s.symbols());
    let d = fill(&qs, &ss, cfg.mode(), scheme, None);
    let end = (d.best.i, d.best.j);
    let (start, ops) = trace_matrices(&d, &qs, &ss, scheme, end);
    AlignmentResult::aligned(d.best.score, start, end, ops, (qs.len() * ss.len()) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::cigar_string;
    use crate::scoring::{AlignType, ResultMode};
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

    fn cfg(t: AlignType, g: GapModel) -> AlignConfig {
        AlignConfig::new(t, g, ResultMode::Traceback)
    }

    /// Best score over every alignment, enumerated recursively (tiny inputs only).
    fn brute_global(q: &[u8], s: &[u8], sc: &ScoringScheme) -> i64 {
        fn go(q: &[u8], s: &[u8], sc: &ScoringScheme, last: Option<EditOp>, run: usize) -> i64 {
            // `run` is the length of the trailing gap run; its cost is settled
            // when the run closes.
            let close = |op: Option<EditOp>, run: usize| match op {
                Some(EditOp::Insertion) | Some(EditOp::Deletion) => -sc.gap_cost(run),
                _ => 0,
            };
            if q.is_empty() && s.is_empty() {
                return close(last, run);
            }
            let mut best = i64::MIN;
            if !q.is_empty() && !s.is_empty() {
                let v = close(last, run)
                    + sc.substitution(q[0], s[0]) as i64
                    + go(&q[1..], &s[1..], sc, Some(EditOp::Match), 0);
                best = best.max(v);
            }
            for op in [EditOp::Insertion, EditOp::Deletion] {
                let (nq, ns) = match op {
                    EditOp::Insertion if !q.is_empty() => (&q[1..], s),
                    EditOp::Deletion if !s.is_empty() => (q, &s[1..]),
                    _ => continue,
                };
                let v = if last == Some(op) {
                    go(nq, ns, sc, Some(op), run + 1)
                } else {
                    close(last, run) + go(nq, ns, sc, Some(op), 1)
                };
                best = best.max(v);
            }
            best
        }
        go(q, s, sc, None, 0)
    }

    fn brute(q: &[u8], s: &[u8], t: AlignType, sc: &ScoringScheme) -> i64 {
        let mut best = i64::MIN;
        for a in 0..=q.len() {
            for b in a..=q.len() {
                for c in 0..=s.len() {
                    for d in c..=s.len() {
                        let ok = match t {
                            AlignType::Global => a == 0 && b == q.len() && c == 0 && d == s.len(),
                            AlignType::Local => true,
                            AlignType::SemiGlobal => (a == 0 || c == 0) && (b == q.len() || d == s.len()),
                        };
                        if ok {
                            best = best.max(brute_global(&q[a..b], &s[c..d], sc));
                        }
                    }
                }
            }
        }
        if t == AlignType::Local {
            best = best.max(0);
        }
        best
    }

    #[test]
    fn identical_global() {
        let r = ref_score(
            &seq("ACGT"),
            &seq("ACGT"),
            &cfg(AlignType::Global, GapModel::Linear),
            &lin(),
        );
        assert_eq!(r, RefScore { score: 8, end: (4, 4) });
    }

    #[test]
    fn one_gap_global_linear() {
        let c = cfg(AlignType::Global, GapModel::Linear);
        let r = ref_score(&seq("ACGT"), &seq("AGT"), &c, &lin());
        assert_eq!(r, RefScore { score: 5, end: (4, 3) });
        assert_eq!(brute(&[0, 1, 2, 3], &[0, 2, 3], AlignType::Global, &lin()), 5);
        let t = ref_traceback(&seq("ACGT"), &seq("AGT"), &c, &lin());
        assert_eq!(cigar_string(&t), "1M1I2M");
        assert_eq!(t.score, 5);
    }

    #[test]
    fn local_all_mismatch_is_zero() {
        let r = ref_score(
            &seq("TTTT"),
            &seq("CCCC"),
            &cfg(AlignType::Local, GapModel::Affine),
            &aff(),
        );
        assert_eq!(r.score, 0);
        assert_eq!(r.end, (0, 0));
    }

    #[test]
    fn global_affine_long_gap() {
        let c = cfg(AlignType::Global, GapModel::Affine);
        let r = ref_score(&seq("AAAA"), &seq("AA"), &c, &aff());
        assert_eq!(r.score, 1);
        assert_eq!(brute(&[0; 4], &[0; 2], AlignType::Global, &aff()), 1);
    }

    #[test]
    fn semiglobal_free_ends() {
        let c = cfg(AlignType::SemiGlobal, GapModel::Linear);
        let r = ref_score(&seq("ACG"), &seq("TTACGTT"), &c, &lin());
        assert_eq!(r.score, 6);
        assert_eq!(r.end, (3, 5));
        assert_eq!(
            brute(&[0, 1, 2], &[3, 3, 0, 1, 2, 3, 3], AlignType::SemiGlobal, &lin()),
            6
        );
    }

    #[test]
    fn local_affine_traceback() {
        let c = cfg(AlignType::Local, GapModel::Affine);
        let t = ref_traceback(&seq("TTACGTT"), &seq("ACG"), &c, &aff());
        assert_eq!(t.score, 6);
        assert_eq!(cigar_string(&t), "3M");
        assert_eq!((t.q_start, t.s_start), (Some(2), Some(0)));
        assert_eq!((t.q_end, t.s_end), (5, 3));
    }

    #[test]
    fn identical_traceback() {
        let t = ref_traceback(
            &seq("ACGT"),
            &seq("ACGT"),
            &cfg(AlignType::Global, GapModel::Linear),
            &lin(),
        );
        assert_eq!(cigar_string(&t), "4M");
        assert_eq!(t.score, 8);
    }

    fn dna(max: usize) -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..4, 1..=max)
    }

    fn any_type() -> impl Strategy<Value = AlignType> {
        prop::sample::select(AlignType::ALL.to_vec())
    }

    fn any_scheme() -> impl Strategy<Value = ScoringScheme> {
        (1i32..4, -3i32..1, 1i32..5, 0i32..4, any::<bool>()).prop_map(|(ma, mm, o, e, affine)| {
            if affine {
                ScoringScheme::affine(ma, mm, o, e.min(o)).unwrap()
            } else {
                ScoringScheme::linear(ma, mm, o).unwrap()
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_brute_force(q in dna(5), s in dna(5), t in any_type(), sc in any_scheme()) {
            let d = fill(&q, &s, DpMode::for_type(t), &sc, None);
            prop_assert_eq!(d.best.score as i64, brute(&q, &s, t, &sc));
        }

        #[test]
        fn traceback_rescores(q in dna(40), s in dna(40), t in any_type(), sc in any_scheme()) {
            let (qs, ss) = (Sequence::from_symbols("q", &q).unwrap(), Sequence::from_symbols("s", &s).unwrap());
            let c = AlignConfig::traceback(t, sc.gap_model);
            let r = ref_traceback(&qs, &ss, &c, &sc);
            prop_assert_eq!(r.rescore(&q, &s, &sc).unwrap(), r.score);
            prop_assert_eq!(r.score, ref_score(&qs, &ss, &c, &sc).score);
            if t == AlignType::Global {
                prop_assert_eq!((r.q_start, r.s_start, r.q_end, r.s_end), (Some(0), Some(0), q.len(), s.len()));
            }
        }

        #[test]
        fn global_swap_symmetry(q in dna(40), s in dna(40), sc in any_scheme()) {
            let mode = DpMode::for_type(AlignType::Global);
            prop_assert_eq!(fill(&q, &s, mode, &sc, None).best.score, fill(&s, &q, mode, &sc, None).best.score);
        }

        #[test]
        fn local_dominates_global(q in dna(40), s in dna(40), sc in any_scheme()) {
            let l = fill(&q, &s, DpMode::for_type(AlignType::Local), &sc, None).best.score;
            let g = fill(&q, &s, DpMode::for_type(AlignType::Global), &sc, None).best.score;
            prop_assert!(l >= 0);
            prop_assert!(l >= g.max(0));
        }

        #[test]
        fn affine_equal_penalties_is_linear(q in dna(40), s in dna(40), t in any_type(), a in 1i32..5) {
            let lin = ScoringScheme::linear(2, -1, a).unwrap();
            let aff = ScoringScheme::affine(2, -1, a, a).unwrap();
            let mode = DpMode::for_type(t);
            prop_assert_eq!(fill(&q, &s, mode, &lin, None).best, fill(&q, &s, mode, &aff, None).best);
        }

        #[test]
        fn score_only_is_pure(q in dna(40), s in dna(40), t in any_type(), sc in any_scheme()) {
            let (qs, ss) = (Sequence::from_symbols("q", &q).unwrap(), Sequence::from_symbols("s", &s).unwrap());
            let c = AlignConfig::traceback(t, sc.gap_model);
            let before = ref_score(&qs, &ss, &c, &sc);
            let _ = ref_traceback(&qs, &ss, &c, &sc);
            prop_assert_eq!(ref_score(&qs, &ss, &c, &sc), before);
        }
    }
}
