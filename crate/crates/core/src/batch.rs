//! Batched alignment over a worker pool.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::engine::{engine_score_packed, fits_packed, EngineTuning};
use crate::error::{Error, Result};
use crate::result::AlignmentResult;
use crate::scoring::{AlignConfig, AlignType, ResultMode, ScoringScheme};
use crate::seq::Sequence;
use crate::traceback::align_pair;

/// Pairs handed to a worker at a time.
pub const CHUNK_PAIRS: usize = 64;

#[derive(Debug, Clone)]
pub struct BatchJob<'a> {
    pub queries: &'a [Sequence],
    pub subjects: &'a [Sequence],
    /// `(query index, subject index)`.
    pub pairs: Vec<(usize, usize)>,
    pub cfg: AlignConfig,
    pub scheme: ScoringScheme,
    pub tuning: EngineTuning,
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct BatchReport {
    /// One result per pair, in pair order.
    pub results: Vec<AlignmentResult>,
    pub wall_time: f64,
    /// Σ m·n over pairs.
    pub total_cells: u64,
    /// Cells actually computed, traceback passes included.
    pub computed_cells: u64,
    pub gcups: f64,
}

impl BatchReport {
    pub fn recompute_gcups(total_cells: u64, wall_time: f64) -> f64 {
        if wall_time > 0.0 {
            total_cells as f64 / wall_time / 1e9
        } else {
            0.0
        }
    }
}

/// Cartesian product in row-major order.
pub fn all_pairs(num_queries: usize, num_subjects: usize) -> Vec<(usize, usize)> {
    all_pairs_iter(num_queries, num_subjects).collect()
}

pub fn all_pairs_iter(num_queries: usize, num_subjects: usize) -> impl ExactSizeIterator<Item = (usize, usize)> {
    (0..num_queries * num_subjects).map(move |x| (x / num_subjects, x % num_subjects))
}

/// Power-of-two length class of a pair: `ceil(log2(max(m, n)))`.
pub fn length_bucket(m: usize, n: usize) -> u32 {
    m.max(n).max(1).next_power_of_two().trailing_zeros()
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Single(usize),
    Packed(usize, usize),
}

impl BatchJob<'_> {
    fn check(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if self.workers == 0 {
            return Err(Error::InvalidTuning("worker count must be at least 1".into()));
        }
        self.tuning.validate()?;
        for (index, &(qi, si)) in self.pairs.iter().enumerate() {
            if qi >= self.queries.len() || si >= self.subjects.len() {
                return Err(Error::PairOutOfRange { index });
            }
        }
        Ok(())
    }

    fn pair(&self, idx: usize) -> (&Sequence, &Sequence) {
        let (qi, si) = self.pairs[idx];
        (&self.queries[qi], &self.subjects[si])
    }

    fn tasks(&self) -> Vec<Task> {
        let packable = self.tuning.packed && self.cfg.result_mode == ResultMode::ScoreOnly;
        if !packable {
            return (0..self.pairs.len()).map(Task::Single).collect();
        }
        let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut tasks = Vec::new();
        for idx in 0..self.pairs.len() {
            let (q, s) = self.pair(idx);
            if fits_packed(q.len(), s.len(), &self.scheme) {
                buckets.entry(length_bucket(q.len(), s.len())).or_default().push(idx);
            } else {
                tasks.push(Task::Single(idx));
            }
        }
        for members in buckets.values() {
            for two in members.chunks(2) {
                match *two {
                    [a, b] => tasks.push(Task::Packed(a, b)),
                    [a] => tasks.push(Task::Single(a)),
                    _ => unreachable!(),
                }
            }
        }
        tasks
    }

    fn run_task(&self, task: Task) -> Vec<(usize, Result<AlignmentResult>)> {
        match task {
            Task::Single(i) => {
                let (q, s) = self.pair(i);
                vec![(i, align_pair(q, s, &self.cfg, &self.scheme, &self.tuning))]
            }
            Task::Packed(a, b) => {
                let start = (self.cfg.align_type == AlignType::Global).then_some((0, 0));
                match engine_score_packed(self.pair(a), self.pair(b), &self.cfg, &self.scheme, &self.tuning) {
                    Ok((ra, rb)) => vec![
                        (
                            a,
                            Ok(AlignmentResult::score_only(ra.score, ra.end, start, ra.cells_computed)),
                        ),
                        (
                            b,
                            Ok(AlignmentResult::score_only(rb.score, rb.end, start, rb.cells_computed)),
                        ),
                    ],
                    Err(_) => {
                        let mut v = self.run_task(Task::Single(a));
                        v.extend(self.run_task(Task::Single(b)));
                        v
                    }
                }
            }
        }
    }
}

pub fn run_batch(job: &BatchJob) -> Result<BatchReport> {
    job.check()?;
    let tasks = job.tasks();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers)
        .build()
        .map_err(|e| Error::InvalidTuning(format!("cannot start worker pool: {e}")))?;
    log::debug!(
        "batch: {} pairs in {} tasks on {} workers",
        job.pairs.len(),
        tasks.len(),
        job.workers
    );

    let started = Instant::now();
    let outcomes: Vec<Vec<(usize, Result<AlignmentResult>)>> = pool.install(|| {
        tasks
            .par_chunks(CHUNK_PAIRS)
            .map(|chunk| chunk.iter().flat_map(|&t| job.run_task(t)).collect())
            .collect()
    });
    let wall_time = started.elapsed().as_secs_f64();

    let mut slots: Vec<Option<AlignmentResult>> = vec![None; job.pairs.len()];
    let mut failure: Option<(usize, Error)> = None;
    for (idx, res) in outcomes.into_iter().flatten() {
        match res {
            Ok(r) => slots[idx] = Some(r),
            Err(e) => {
                if failure.as_ref().is_none_or(|(f, _)| idx < *f) {
                    failure = Some((idx, e));
                }
            }
        }
    }
    if let Some((index, e)) = failure {
        return Err(Error::PairFailed {
            index,
            source: Box::new(e),
        });
    }
    let results: Vec<AlignmentResult> = slots
        .into_iter()
        .map(|r| r.expect("every pair produced a result"))
        .collect();
    let total_cells = (0..job.pairs.len())
        .map(|i| {
            let (q, s) = job.pair(i);
            (q.len() * s.len()) as u64
        })
        .sum();
    let computed_cells = results.iter().map(|r| r.cells_computed).sum();
    Ok(BatchReport {
        results,
        wall_time,
        total_cells,
        computed_cells,
        gcups: BatchReport::recompute_gcups(total_cells, wall_time),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{random_genome, simulate_reads, SimSpec};
    use crate::refdp::ref_score;
    use crate::scoring::GapModel;

    fn reads(count: usize, len: usize, seed: u64) -> Vec<Sequence> {
        let genome = random_genome("g", 4 * len, seed).unwrap();
        let spec = SimSpec {
            count,
            read_len: len,
            sub_rate: 0.05,
            ins_rate: 0.02,
            del_rate: 0.02,
            seed,
        };
        simulate_reads(&genome, &spec).unwrap().0
    }

    fn job<'a>(
        q: &'a [Sequence],
        s: &'a [Sequence],
        pairs: Vec<(usize, usize)>,
        cfg: AlignConfig,
        workers: usize,
    ) -> BatchJob<'a> {
        let scheme = match cfg.gap_model {
            GapModel::Linear => ScoringScheme::linear(2, -1, 1).unwrap(),
            GapModel::Affine => ScoringScheme::affine(2, -1, 2, 1).unwrap(),
        };
        BatchJob {
            queries: q,
            subjects: s,
            pairs,
            cfg,
            scheme,
            tuning: EngineTuning::new(8, 2).unwrap(),
            workers,
        }
    }

    #[test]
    fn all_pairs_order() {
        assert_eq!(all_pairs(2, 2), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(all_pairs(1, 5).len(), 5);
        let it = all_pairs_iter(3536, 3536);
        assert_eq!(it.len(), 12_503_296);
    }

    #[test]
    fn buckets_are_powers_of_two() {
        assert_eq!(length_bucket(1, 1), 0);
        assert_eq!(length_bucket(300, 512), 9);
        assert_eq!(length_bucket(513, 2), 10);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let r = reads(3, 60, 3);
        let cfg = AlignConfig::traceback(AlignType::Local, GapModel::Affine);
        let pairs = vec![(0, 1), (2, 0), (1, 1)];
        let one = run_batch(&job(&r, &r, pairs.clone(), cfg, 1)).unwrap();
        let eight = run_batch(&job(&r, &r, pairs, cfg, 8)).unwrap();
        assert_eq!(one.results, eight.results);
    }

    #[test]
    fn all_pairs_scores_match_reference() {
        let r = reads(16, 40, 11);
        for t in AlignType::ALL {
            let cfg = AlignConfig::score_only(t, GapModel::Linear);
            let j = job(&r, &r, all_pairs(16, 16), cfg, 4);
            let rep = run_batch(&j).unwrap();
            assert_eq!(rep.results.len(), 256);
            let want_cells: usize = j.pairs.iter().map(|&(a, b)| r[a].len() * r[b].len()).sum();
            assert_eq!(rep.total_cells, want_cells as u64);
            assert_eq!(rep.total_cells, rep.computed_cells);
            for (res, &(a, b)) in rep.results.iter().zip(&j.pairs) {
                let want = ref_score(&r[a], &r[b], &cfg, &j.scheme);
                assert_eq!((res.score, res.q_end, res.s_end), (want.score, want.end.0, want.end.1));
            }
        }
    }

    #[test]
    fn packed_batch_matches_unpacked() {
        let mut r = reads(7, 50, 5);
        r.extend(reads(4, 130, 6));
        let cfg = AlignConfig::score_only(AlignType::SemiGlobal, GapModel::Affine);
        let pairs = all_pairs(r.len(), r.len());
        let plain = run_batch(&job(&r, &r, pairs.clone(), cfg, 2)).unwrap();
        let mut pj = job(&r, &r, pairs, cfg, 2);
        pj.tuning = pj.tuning.packed(true);
        let packed = run_batch(&pj).unwrap();
        assert_eq!(plain.results, packed.results);
    }

    #[test]
    fn empty_and_out_of_range() {
        let r = reads(2, 20, 1);
        let cfg = AlignConfig::score_only(AlignType::Global, GapModel::Linear);
        assert!(matches!(
            run_batch(&job(&r, &r, vec![], cfg, 1)),
            Err(Error::EmptyBatch)
        ));
        assert!(matches!(
            run_batch(&job(&r, &r, vec![(0, 0), (0, 2)], cfg, 1)),
            Err(Error::PairOutOfRange { index: 1 })
        ));
    }

    #[test]
    fn failing_pair_reports_index() {
        let r = vec![
            Sequence::from_bytes("a", b"ACGT").unwrap(),
            Sequence::from_bytes("huge", &vec![b'A'; 1 << 20]).unwrap(),
        ];
        let cfg = AlignConfig::score_only(AlignType::Global, GapModel::Linear);
        let mut j = job(&r, &r, vec![(0, 0), (1, 1)], cfg, 1);
        j.scheme = ScoringScheme::linear(1 << 10, -1, 1).unwrap();
        match run_batch(&j) {
            Err(Error::PairFailed { index, source }) => {
                assert_eq!(index, 1);
                assert!(matches!(*source, Error::LengthOverflow { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
