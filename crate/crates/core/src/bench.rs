//! Throughput measurement and peak-performance accounting.

use serde::{Deserialize, Serialize};

use crate::batch::{run_batch, BatchJob};
use crate::engine::EngineTuning;
use crate::error::{Error, Result};
use crate::scoring::{AlignType, GapModel, ResultMode, ScoringScheme};

/// Affine kernel: 4 max and 3 add/sub per cell.
pub const AFFINE_CYCLES_PER_CELL: f64 = 7.0;
/// Affine kernel with two alignments per 32-bit word.
pub const PACKED_AFFINE_CYCLES_PER_CELL: f64 = 3.5;

pub const MEDIAN_RULE: &str = "mean of the two middle values for even counts";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareModel {
    /// Scalar ALU units (for a CPU: cores times SIMD lanes).
    pub cores: f64,
    pub clock_ghz: f64,
    pub cycles_per_cell: f64,
}

impl HardwareModel {
    pub fn new(cores: f64, clock_ghz: f64, cycles_per_cell: f64) -> Result<Self> {
        let hw = HardwareModel {
            cores,
            clock_ghz,
            cycles_per_cell,
        };
        hw.check()?;
        Ok(hw)
    }

    pub fn check(&self) -> Result<()> {
        let fields = [
            ("cores", self.cores),
            ("clock", self.clock_ghz),
            ("cycles per cell", self.cycles_per_cell),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Peak cell updates per second in GCUPS.
pub fn theoretical_peak(hw: &HardwareModel) -> f64 {
    hw.cores * hw.clock_ghz / hw.cycles_per_cell
}

/// Median of `values`; even counts average the two middle values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub align_type: AlignType,
    pub gap_model: GapModel,
    pub result_mode: ResultMode,
    pub scheme: ScoringScheme,
    pub tuning: EngineTuning,
    pub workers: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub achieved_gcups: f64,
    pub tpp_gcups: Option<f64>,
    pub efficiency: Option<f64>,
    /// Σ m·n over pairs.
    pub cells: u64,
    /// Cells actually computed, including traceback passes.
    pub computed_cells: u64,
    /// Wall time of the median-speed repetition, or the mean of the two
    /// middle ones.
    pub wall_s: f64,
    pub repetitions: usize,
    pub median_rule: String,
    /// Per-repetition speeds in run order.
    pub runs_gcups: Vec<f64>,
    pub hardware: Option<HardwareModel>,
    pub config: BenchConfig,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `job` `reps` times and reports the median speed. Timing covers the
/// batch run only.
pub fn measure_gcups(job: &BatchJob, reps: usize, hw: Option<&HardwareModel>) -> Result<BenchReport> {
    if reps == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    if let Some(hw) = hw {
        hw.check()?;
    }
    let mut speeds = Vec::with_capacity(reps);
    let mut walls = Vec::with_capacity(reps);
    let mut cells = 0;
    let mut computed = 0;
    for _ in 0..reps {
        let report = run_batch(job)?;
        cells = report.total_cells;
        computed = report.computed_cells;
        speeds.push(report.gcups);
        walls.push(report.wall_time);
    }
    let achieved = median(&speeds).unwrap_or(0.0);
    let tpp = hw.map(theoretical_peak);
    Ok(BenchReport {
        achieved_gcups: achieved,
        tpp_gcups: tpp,
        efficiency: tpp.map(|t| achieved / t),
        cells,
        computed_cells: computed,
        wall_s: median(&walls).unwrap_or(0.0),
        repetitions: reps,
        median_rule: MEDIAN_RULE.into(),
        runs_gcups: speeds,
        hardware: hw.copied(),
        config: BenchConfig {
            align_type: job.cfg.align_type,
            gap_model: job.cfg.gap_model,
            result_mode: job.cfg.result_mode,
            scheme: job.scheme,
            tuning: job.tuning,
            workers: job.workers,
            pairs: job.pairs.len(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::all_pairs;
    use crate::scoring::AlignConfig;
    use crate::seq::Sequence;

    #[test]
    fn peak_table_rows() {
        let rows = [
            (5120.0, 1.91, 7.0, 1.40),
            (10496.0, 1.70, 7.0, 2.55),
            (6912.0, 1.41, 3.5, 2.78),
            (7680.0, 1.50, 3.5, 3.29),
        ];
        for (c, f, y, tcups) in rows {
            let hw = HardwareModel::new(c, f, y).unwrap();
            let got = theoretical_peak(&hw) / 1000.0;
            assert!((got - tcups).abs() <= 0.01, "{c} {f} {y}: {got}");
        }
        let v100 = HardwareModel::new(5120.0, 1.91, AFFINE_CYCLES_PER_CELL).unwrap();
        assert_eq!(theoretical_peak(&v100).round(), 1397.0);
        let a100 = HardwareModel::new(6912.0, 1.41, PACKED_AFFINE_CYCLES_PER_CELL).unwrap();
        assert_eq!(theoretical_peak(&a100).floor(), 2784.0);
    }

    #[test]
    fn rejects_non_positive_model() {
        assert!(HardwareModel::new(0.0, 1.0, 7.0).is_err());
        assert!(HardwareModel::new(8.0, -1.0, 7.0).is_err());
        assert!(HardwareModel::new(8.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn median_rule() {
        let speeds = [9.0, 1.0, 8.0, 2.0, 7.0, 3.0, 6.0, 4.0, 5.0, 10.0];
        assert_eq!(median(&speeds), Some(5.5));
        assert_eq!(median(&[4.2]), Some(4.2));
        assert_eq!(median(&[3.0, 3.0]), Some(3.0));
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[]), None);
    }

    fn job(seqs: &[Sequence]) -> BatchJob<'_> {
        BatchJob {
            queries: seqs,
            subjects: seqs,
            pairs: all_pairs(seqs.len(), seqs.len()),
            cfg: AlignConfig::score_only(AlignType::Global, GapModel::Affine),
            scheme: ScoringScheme::affine(2, -1, 2, 1).unwrap(),
            tuning: EngineTuning::new(4, 2).unwrap(),
            workers: 1,
        }
    }

    #[test]
    fn report_counts_score_cells() {
        let seqs: Vec<Sequence> = ["ACGTACGT", "ACG", "TTTTGGGGCC"]
            .iter()
            .enumerate()
            .map(|(i, s)| Sequence::from_bytes(format!("s{i}"), s.as_bytes()).unwrap())
            .collect();
        let hw = HardwareModel::new(4.0, 2.0, 7.0).unwrap();
        let r = measure_gcups(&job(&seqs), 3, Some(&hw)).unwrap();
        assert_eq!(r.cells, 21 * 21);
        assert_eq!(r.runs_gcups.len(), 3);
        assert_eq!(r.tpp_gcups, Some(8.0 / 7.0));
        assert!((r.efficiency.unwrap() - r.achieved_gcups / r.tpp_gcups.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zero_reps_rejected() {
        let seqs = [Sequence::from_bytes("a", b"ACGT").unwrap()];
        assert!(matches!(
            measure_gcups(&job(&seqs), 0, None),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn json_keys_stable() {
        let seqs = [Sequence::from_bytes("a", b"ACGT").unwrap()];
        let r = measure_gcups(&job(&seqs), 1, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["achieved_gcups", "tpp_gcups", "efficiency", "cells", "wall_s", "config"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["config"]["align_type"], "global");
    }
}
