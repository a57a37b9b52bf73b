//! 2-bit packed DNA sequences.
//!
//! Symbols are coded `A=0, C=1, G=2, T=3`. Any other input byte is stored as
//! code 0 with a side-channel flag; flagged positions never match anything.

use crate::error::{Error, Result};

pub const ALPHABET: [u8; 4] = *b"ACGT";

/// Unpacked code used for flagged (non-ACGT) positions.
pub const FLAGGED: u8 = 4;

/// Number of distinct unpacked symbol codes (four bases plus the flagged code).
pub const SYMBOLS: usize = 5;

#[derive(Clone, PartialEq, Eq)]
pub struct Sequence {
    id: String,
    packed: Vec<u8>,
    flags: Vec<u64>,
    len: usize,
}

#[inline]
fn base_code(b: u8) -> Option<u8> {
    match b {
        b'A' | b'a' => Some(0),
        b'C' | b'c' => Some(1),
        b'G' | b'g' => Some(2),
        b'T' | b't' => Some(3),
        _ => None,
    }
}

impl Sequence {
    pub fn from_bytes(id: impl Into<String>, raw: &[u8]) -> Result<Self> {
        let id = id.into();
        if raw.is_empty() {
            return Err(Error::EmptySequence(id));
        }
        let len = raw.len();
        let mut packed = vec![0u8; len.div_ceil(4)];
        let mut flags = vec![0u64; len.div_ceil(64)];
        for (i, &b) in raw.iter().enumerate() {
            match base_code(b) {
                Some(c) => packed[i / 4] |= c << ((i % 4) * 2),
                None => flags[i / 64] |= 1 << (i % 64),
            }
        }
        Ok(Sequence { id, packed, flags, len })
    }

    /// Builds a sequence from unpacked codes (`0..=3`, or [`FLAGGED`]).
    pub fn from_symbols(id: impl Into<String>, symbols: &[u8]) -> Result<Self> {
        let raw: Vec<u8> = symbols
            .iter()
            .map(|&c| ALPHABET.get(c as usize).copied().unwrap_or(b'N'))
            .collect();
        Self::from_bytes(id, &raw)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed 2-bit code at `i`, in `0..=3`.
    #[inline]
    pub fn code(&self, i: usize) -> u8 {
        (self.packed[i / 4] >> ((i % 4) * 2)) & 3
    }

    #[inline]
    pub fn is_flagged(&self, i: usize) -> bool {
        self.flags[i / 64] >> (i % 64) & 1 == 1
    }

    /// Unpacked symbol at `i`: the 2-bit code, or [`FLAGGED`].
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        if self.is_flagged(i) {
            FLAGGED
        } else {
            self.code(i)
        }
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.symbol(i)).collect()
    }

    pub fn codes(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.code(i)).collect()
    }

    pub fn flagged_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.is_flagged(i)).collect()
    }

    /// Text form; flagged positions decode as `N`.
    pub fn decode(&self) -> String {
        (0..self.len)
            .map(|i| match self.symbol(i) {
                FLAGGED => 'N',
                c => ALPHABET[c as usize] as char,
            })
            .collect()
    }
}

impl std::fmt::Debug for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Sequence({:?}, {})", self.id, self.decode())
    }
}

pub fn encode_sequence(id: &str, raw: &str) -> Result<Sequence> {
    Sequence::from_bytes(id, raw.as_bytes())
}
