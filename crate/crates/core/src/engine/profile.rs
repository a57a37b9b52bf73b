use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;
use crate::seq::SYMBOLS;

use super::EngineTuning;

/// Substitution scores of every query symbol against one subject chunk.
///
/// `table[c][x]` is the score of query symbol `c` against chunk column `x`.
/// Row [`crate::seq::FLAGGED`] covers flagged query positions and is all
/// mismatch. Columns past `chunk_len` are padding and hold the mismatch score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringProfile {
    pub table: Vec<Vec<i32>>,
    pub chunk_len: usize,
}

impl ScoringProfile {
    pub fn width(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }
}

/// Builds the profile for a chunk of unpacked subject symbols in one pass.
pub fn build_scoring_profile(chunk: &[u8], scheme: &ScoringScheme, tuning: &EngineTuning) -> Result<ScoringProfile> {
    let width = tuning.stage_width();
    if chunk.len() > width {
        return Err(Error::ChunkOverflow {
            len: chunk.len(),
            width,
        });
    }
    let mut table = vec![vec![scheme.mismatch_score; width]; SYMBOLS];
    for (x, &b) in chunk.iter().enumerate() {
        for (c, row) in table.iter_mut().enumerate() {
            row[x] = scheme.substitution(c as u8, b);
        }
    }
    Ok(ScoringProfile {
        table,
        chunk_len: chunk.len(),
    })
}
