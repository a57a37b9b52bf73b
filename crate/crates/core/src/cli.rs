//! Command-line front end.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::batch::{all_pairs, run_batch, BatchJob};
use crate::bench::{measure_gcups, HardwareModel};
use crate::engine::EngineTuning;
use crate::error::{Error, Result};
use crate::io::{format_results_tsv, random_genome, read_fasta, simulate_reads, write_fasta, ResultRow, SimSpec};
use crate::scoring::{AlignConfig, AlignType, GapModel, ResultMode, ScoringScheme};
use crate::selftest::run_selftest;
use crate::seq::Sequence;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "waveseq", version, about = "Batched pairwise DNA alignment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align query/subject pairs and write a TSV of results.
    Align(AlignArgs),
    /// Measure throughput and print a JSON report.
    Bench(BenchArgs),
    /// Simulate reads from a random genome and write FASTA.
    Simulate(SimulateArgs),
    /// Run the randomized equivalence suite against the reference DP.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TypeArg {
    Local,
    Global,
    #[value(name = "semiglobal", alias = "semi-global")]
    SemiGlobal,
}

impl From<TypeArg> for AlignType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Local => AlignType::Local,
            TypeArg::Global => AlignType::Global,
            TypeArg::SemiGlobal => AlignType::SemiGlobal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GapArg {
    Linear,
    Affine,
}

impl From<GapArg> for GapModel {
    fn from(g: GapArg) -> Self {
        match g {
            GapArg::Linear => GapModel::Linear,
            GapArg::Affine => GapModel::Affine,
        }
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("pairing").required(true).args(["pairs", "all_pairs"]))]
pub struct JobArgs {
    #[arg(long)]
    pub queries: PathBuf,
    /// Defaults to the query file for `bench`.
    #[arg(long)]
    pub subjects: Option<PathBuf>,
    /// File of `query_id subject_id` lines.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub all_pairs: bool,
    #[arg(long = "type", value_enum, default_value = "global")]
    pub align_type: TypeArg,
    #[arg(long, value_enum, default_value = "linear")]
    pub gaps: GapArg,
    #[arg(long = "match", default_value_t = 2, allow_negative_numbers = true)]
    pub match_score: i32,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    pub mismatch: i32,
    #[arg(long, default_value_t = 1)]
    pub gap_open: i32,
    /// Defaults to the opening penalty.
    #[arg(long)]
    pub gap_extend: Option<i32>,
    #[arg(long)]
    pub traceback: bool,
    #[arg(long, value_parser = ["4", "8", "16", "32", "64"])]
    pub lanes: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub cols_per_lane: Option<u8>,
    #[arg(long)]
    pub packed: bool,
    #[arg(long, env = "WAVESEQ_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Output TSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub job: JobArgs,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    #[arg(long, requires = "clock")]
    pub cores: Option<f64>,
    #[arg(long, requires = "cores")]
    pub clock: Option<f64>,
    /// Defaults to the score operations per cell of the configured kernel.
    #[arg(long, requires = "cores")]
    pub cycles: Option<f64>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 100_000)]
    pub genome_len: usize,
    #[arg(long, default_value_t = 256)]
    pub reads: usize,
    #[arg(long, default_value_t = 512)]
    pub read_len: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sub_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ins_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub del_rate: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub genome_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub cases: u64,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::InvalidScheme(_)
            | Error::InvalidTuning(_)
            | Error::ConfigMismatch(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

struct Loaded {
    queries: Vec<Sequence>,
    subjects: Vec<Sequence>,
    pairs: Vec<(usize, usize)>,
}

fn index_by_id(seqs: &[Sequence]) -> HashMap<&str, usize> {
    let mut map = HashMap::with_capacity(seqs.len());
    for (i, s) in seqs.iter().enumerate() {
        map.entry(s.id()).or_insert(i);
    }
    map
}

/// Parses a pair list: one `query_id subject_id` per line, `#` comments.
pub fn read_pairs(path: &Path, queries: &[Sequence], subjects: &[Sequence]) -> Result<Vec<(usize, usize)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (qi, si) = (index_by_id(queries), index_by_id(subjects));
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            msg,
        };
        let mut fields = line.split_whitespace();
        let (Some(q), Some(s), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse("expected `query_id subject_id`".into()));
        };
        let q = *qi.get(q).ok_or_else(|| parse(format!("unknown query `{q}`")))?;
        let s = *si.get(s).ok_or_else(|| parse(format!("unknown subject `{s}`")))?;
        pairs.push((q, s));
    }
    Ok(pairs)
}

impl JobArgs {
    fn load(&self, subjects_required: bool) -> std::result::Result<Loaded, Failure> {
        let subjects_path = match (&self.subjects, subjects_required) {
            (Some(p), _) => p.clone(),
            (None, false) => self.queries.clone(),
            (None, true) => {
                return Err(Failure {
                    code: EXIT_USAGE,
                    msg: "--subjects is required".into(),
                })
            }
        };
        let queries = read_fasta(&self.queries)?;
        let subjects = read_fasta(&subjects_path)?;
        let pairs = match &self.pairs {
            Some(p) => read_pairs(p, &queries, &subjects)?,
            None => all_pairs(queries.len(), subjects.len()),
        };
        Ok(Loaded {
            queries,
            subjects,
            pairs,
        })
    }

    fn scheme(&self) -> Result<ScoringScheme> {
        let extend = self.gap_extend.unwrap_or(self.gap_open);
        ScoringScheme::new(self.match_score, self.mismatch, self.gap_open, extend, self.gaps.into())
    }

    fn config(&self) -> AlignConfig {
        let mode = if self.traceback {
            ResultMode::Traceback
        } else {
            ResultMode::ScoreOnly
        };
        AlignConfig::new(self.align_type.into(), self.gaps.into(), mode)
    }

    fn tuning(&self, loaded: &Loaded) -> Result<EngineTuning> {
        let longest = loaded
            .pairs
            .iter()
            .map(|&(q, s)| loaded.queries[q].len().max(loaded.subjects[s].len()))
            .max()
            .unwrap_or(0);
        let auto = EngineTuning::auto(longest);
        let p = self
            .lanes
            .as_deref()
            .map_or(Ok(auto.p), str::parse)
            .map_err(|_| Error::InvalidArgument("--lanes must be a number".into()))?;
        let k = self.cols_per_lane.map_or(auto.k, usize::from);
        let tuning = EngineTuning::new(p, k)?.packed(self.packed);
        Ok(tuning)
    }

    fn workers(&self) -> usize {
        self.workers
            .map(usize::from)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    fn job<'a>(&self, loaded: &'a Loaded) -> Result<BatchJob<'a>> {
        Ok(BatchJob {
            queries: &loaded.queries,
            subjects: &loaded.subjects,
            pairs: loaded.pairs.clone(),
            cfg: self.config(),
            scheme: self.scheme()?,
            tuning: self.tuning(loaded)?,
            workers: self.workers(),
        })
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_align(args: &AlignArgs, out: &mut dyn Write) -> CmdResult {
    let loaded = args.job.load(true)?;
    let job = args.job.job(&loaded)?;
    let report = run_batch(&job)?;
    log::info!(
        "{} pairs, {} cells in {:.3}s ({:.3} GCUPS)",
        job.pairs.len(),
        report.total_cells,
        report.wall_time,
        report.gcups
    );
    let rows: Vec<ResultRow> = job
        .pairs
        .iter()
        .zip(&report.results)
        .map(|(&(q, s), result)| ResultRow {
            query_id: loaded.queries[q].id(),
            subject_id: loaded.subjects[s].id(),
            result,
        })
        .collect();
    let tsv = format_results_tsv(&rows);
    match &args.out {
        Some(path) => write_file(path, &tsv)?,
        None => write_stdout(out, &tsv)?,
    }
    Ok(())
}

/// Score operations per cell of the kernel selected by `job`.
fn kernel_cycles(job: &BatchJob) -> f64 {
    let ops = match job.cfg.gap_model {
        GapModel::Affine => 7.0,
        GapModel::Linear => 4.0,
    };
    if job.tuning.packed {
        ops / 2.0
    } else {
        ops
    }
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let loaded = args.job.load(false)?;
    let job = args.job.job(&loaded)?;
    let hw = match (args.cores, args.clock) {
        (Some(cores), Some(clock)) => Some(HardwareModel::new(
            cores,
            clock,
            args.cycles.unwrap_or_else(|| kernel_cycles(&job)),
        )?),
        _ => None,
    };
    let report = measure_gcups(&job, args.reps as usize, hw.as_ref())?;
    let mut json = report.to_json();
    json.push('\n');
    if let Some(path) = &args.out {
        write_file(path, &json)?;
    }
    write_stdout(out, &json)?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let genome = random_genome("genome", args.genome_len, args.seed)?;
    let spec = SimSpec {
        count: args.reads,
        read_len: args.read_len,
        sub_rate: args.sub_rate,
        ins_rate: args.ins_rate,
        del_rate: args.del_rate,
        seed: args.seed.wrapping_add(1),
    };
    spec.check().map_err(|e| Failure {
        code: EXIT_USAGE,
        msg: e.to_string(),
    })?;
    let (reads, counters) = simulate_reads(&genome, &spec)?;
    write_fasta(&args.out, &reads)?;
    if let Some(path) = &args.genome_out {
        write_fasta(path, std::slice::from_ref(&genome))?;
    }
    log::info!("{} reads; {counters:?}", reads.len());
    Ok(())
}

fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> CmdResult {
    let cases = args.cases as usize;
    let report = run_selftest(args.seed, cases);
    match report.failure {
        None => {
            write_stdout(out, &format!("{}/{} ok\n", report.passed, report.total))?;
            Ok(())
        }
        Some(f) => Err(Failure {
            code: EXIT_RUNTIME,
            msg: format!(
                "{}/{} ok; case {} failed the {} check\nrepro: {}",
                report.passed,
                report.total,
                f.case.index,
                f.check,
                f.repro()
            ),
        }),
    }
}

fn write_stdout(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Align(a) => cmd_align(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Selftest(a) => cmd_selftest(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("waveseq").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["selftest", "--cases", "0"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["bench", "--queries", "q.fa", "--all-pairs", "--reps", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["align", "--queries", "q.fa", "--subjects", "s.fa"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["align", "--queries", "q.fa", "--all-pairs", "--lanes", "12"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn missing_subjects_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let q = dir.path().join("q.fa");
        std::fs::write(&q, ">a\nACGT\n").unwrap();
        let (code, _, err) = run_args(&["align", "--queries", q.to_str().unwrap(), "--all-pairs"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--subjects"));
    }

    #[test]
    fn missing_file_is_runtime_error() {
        let (code, _, err) = run_args(&[
            "align",
            "--queries",
            "/nonexistent/q.fa",
            "--subjects",
            "/nonexistent/s.fa",
            "--all-pairs",
        ]);
        assert_eq!(code, EXIT_RUNTIME);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn pair_file_resolves_ids() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pairs.txt");
        std::fs::write(&p, "# q s\nb x\n\na y\n").unwrap();
        let q = [
            Sequence::from_bytes("a", b"A").unwrap(),
            Sequence::from_bytes("b", b"C").unwrap(),
        ];
        let s = [
            Sequence::from_bytes("x", b"G").unwrap(),
            Sequence::from_bytes("y", b"T").unwrap(),
        ];
        assert_eq!(read_pairs(&p, &q, &s).unwrap(), vec![(1, 0), (0, 1)]);
        std::fs::write(&p, "a z\n").unwrap();
        assert!(matches!(read_pairs(&p, &q, &s), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn selftest_prints_counts() {
        let (code, out, _) = run_args(&["selftest", "--seed", "7", "--cases", "20"]);
        assert_eq!((code, out.as_str()), (EXIT_OK, "20/20 ok\n"));
    }
}
