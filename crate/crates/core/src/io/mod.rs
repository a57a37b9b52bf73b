//! FASTA input, TSV output and the read simulator.

mod fasta;
mod sim;
mod tsv;

pub use fasta::{parse_fasta, read_fasta, write_fasta, FastaRecord};
pub use sim::{random_genome, simulate_reads, SimCounters, SimSpec};
pub use tsv::{cigar_string, format_results_tsv, write_results_tsv, ResultRow, TSV_HEADER};
