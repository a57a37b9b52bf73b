use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seq::Sequence;

/// Parameters of the mutation simulator. Rates are per genome symbol walked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub count: usize,
    pub read_len: usize,
    pub sub_rate: f64,
    pub ins_rate: f64,
    pub del_rate: f64,
    pub seed: u64,
}

impl SimSpec {
    pub fn exact(count: usize, read_len: usize, seed: u64) -> Self {
        SimSpec {
            count,
            read_len,
            sub_rate: 0.0,
            ins_rate: 0.0,
            del_rate: 0.0,
            seed,
        }
    }

    pub fn check(&self) -> Result<()> {
        let rates = [self.sub_rate, self.ins_rate, self.del_rate];
        if rates.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(Error::InvalidSimSpec("rates must lie in [0, 1)".into()));
        }
        if rates.iter().sum::<f64>() >= 1.0 {
            return Err(Error::InvalidSimSpec("rates must sum to less than 1".into()));
        }
        if self.read_len == 0 {
            return Err(Error::InvalidSimSpec("read length must be positive".into()));
        }
        Ok(())
    }
}

/// Event counts accumulated over a simulation run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimCounters {
    /// Genome symbols visited (copied, substituted or deleted).
    pub walked: u64,
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
}

/// Uniform random genome over ACGT.
pub fn random_genome(id: &str, len: usize, seed: u64) -> Result<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let syms: Vec<u8> = (0..len).map(|_| rng.gen_range(0..4u8)).collect();
    Sequence::from_symbols(id, &syms)
}

/// Samples reads from uniform start positions of `genome`, applying
/// per-symbol substitutions, insertions and deletions. Read ids encode the
/// origin as `read<k>_pos<start>`. A read whose walk hits the genome end is
/// returned shorter than `read_len`.
pub fn simulate_reads(genome: &Sequence, spec: &SimSpec) -> Result<(Vec<Sequence>, SimCounters)> {
    spec.check()?;
    if genome.len() < spec.read_len {
        return Err(Error::InvalidSimSpec(format!(
            "read length {} exceeds genome length {}",
            spec.read_len,
            genome.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut counters = SimCounters::default();
    let mut reads = Vec::with_capacity(spec.count);
    let (d, di, dis) = (
        spec.del_rate,
        spec.del_rate + spec.ins_rate,
        spec.del_rate + spec.ins_rate + spec.sub_rate,
    );
    for k in 0..spec.count {
        let start = rng.gen_range(0..=genome.len() - spec.read_len);
        let mut pos = start;
        let mut read = Vec::with_capacity(spec.read_len);
        while read.len() < spec.read_len && pos < genome.len() {
            let r: f64 = rng.gen();
            let base = genome.symbol(pos);
            if r < d {
                counters.deletions += 1;
                counters.walked += 1;
                pos += 1;
            } else if r < di {
                counters.insertions += 1;
                read.push(rng.gen_range(0..4u8));
            } else if r < dis {
                counters.substitutions += 1;
                counters.walked += 1;
                let shift = rng.gen_range(1..4u8);
                read.push(if base < 4 { (base + shift) % 4 } else { shift });
                pos += 1;
            } else {
                counters.walked += 1;
                read.push(base);
                pos += 1;
            }
        }
        reads.push(Sequence::from_symbols(format!("read{k}_pos{start}"), &read)?);
    }
    Ok((reads, counters))
}
