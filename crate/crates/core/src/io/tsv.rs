use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::result::{AlignmentResult, EditOp};

pub const TSV_HEADER: &str = "query_id\tsubject_id\tscore\tq_start\tq_end\ts_start\ts_end\tcigar";

/// Run-length CIGAR over M/I/D; adjacent runs of one op are merged.
pub fn cigar_string(result: &AlignmentResult) -> String {
    let mut out = String::new();
    let Some(ops) = &result.ops else {
        return out;
    };
    let mut pending: Option<(EditOp, usize)> = None;
    for r in ops.iter().filter(|r| r.len > 0) {
        pending = match pending {
            Some((op, len)) if op == r.op => Some((op, len + r.len)),
            Some((op, len)) => {
                let _ = write!(out, "{len}{}", op.letter());
                Some((r.op, r.len))
            }
            None => Some((r.op, r.len)),
        };
    }
    if let Some((op, len)) = pending {
        let _ = write!(out, "{len}{}", op.letter());
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct ResultRow<'a> {
    pub query_id: &'a str,
    pub subject_id: &'a str,
    pub result: &'a AlignmentResult,
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn format_results_tsv(rows: &[ResultRow<'_>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(TSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = row.result;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.query_id,
            row.subject_id,
            r.score,
            opt(r.q_start),
            r.q_end,
            opt(r.s_start),
            r.s_end,
            cigar_string(r)
        );
    }
    out
}

pub fn write_results_tsv(rows: &[ResultRow<'_>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_results_tsv(rows)).map_err(|e| Error::io(path, e))
}
