use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::seq::Sequence;

/// A raw FASTA record; `id` is the header text up to the first whitespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub seq: String,
}

pub fn parse_fasta(reader: impl BufRead, path: &Path) -> Result<Vec<FastaRecord>> {
    let perr = |line: usize, msg: &str| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.to_string(),
    };
    let mut records: Vec<FastaRecord> = Vec::new();
    let mut current: Option<FastaRecord> = None;
    let mut lineno = 0;
    for line in reader.lines() {
        lineno += 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches(['\r', '\n']);
        if let Some(header) = line.strip_prefix('>') {
            if let Some(rec) = current.take() {
                if rec.seq.is_empty() {
                    return Err(perr(lineno, &format!("record `{}` has an empty body", rec.id)));
                }
                records.push(rec);
            }
            let id = header.split_whitespace().next().unwrap_or("");
            if id.is_empty() {
                return Err(perr(lineno, "header has no identifier"));
            }
            current = Some(FastaRecord {
                id: id.to_string(),
                seq: String::new(),
            });
        } else if line.trim().is_empty() {
            continue;
        } else {
            match current.as_mut() {
                Some(rec) => rec.seq.extend(line.chars().filter(|c| !c.is_whitespace())),
                None => return Err(perr(lineno, "sequence data before the first header")),
            }
        }
    }
    if let Some(rec) = current.take() {
        if rec.seq.is_empty() {
            return Err(perr(lineno + 1, &format!("record `{}` has an empty body", rec.id)));
        }
        records.push(rec);
    }
    Ok(records)
}

/// Reads every record of a FASTA file, in file order.
pub fn read_fasta(path: impl AsRef<Path>) -> Result<Vec<Sequence>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_fasta(BufReader::new(file), path)?
        .into_iter()
        .map(|r| Sequence::from_bytes(r.id, r.seq.as_bytes()))
        .collect()
}

const LINE_WIDTH: usize = 80;

pub fn write_fasta(path: impl AsRef<Path>, seqs: &[Sequence]) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for s in seqs {
        writeln!(out, ">{}", s.id()).expect("write to Vec");
        let text = s.decode();
        for chunk in text.as_bytes().chunks(LINE_WIDTH) {
            out.extend_from_slice(chunk);
            out.push(b'\n');
        }
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
