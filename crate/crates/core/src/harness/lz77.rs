//! Sliding-window LZ77 baseline.
//!
//! Greedy longest match over the previous `window_len` symbols, emitted as
//! `(offset, length, literal)` triples. Offsets and lengths use fixed-width
//! binary fields of `ceil(log2(window_len + 1))` bits; literals use 8 bits.
//! Match search is exhaustive, O(n * window_len) in the worst case.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub offset: u32,
    pub length: u32,
    pub literal: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz77Encoding {
    pub window_len: usize,
    pub input_len: usize,
    pub triples: Vec<Triple>,
}

impl Lz77Encoding {
    pub fn field_bits(&self) -> u64 {
        field_bits(self.window_len)
    }

    /// Size of the encoding in bits: one triple per step plus a 64-bit length.
    pub fn bits(&self) -> u64 {
        64 + self.triples.len() as u64 * (2 * self.field_bits() + 8)
    }

    pub fn decode(&self) -> Result<Vec<u8>> {
        let mut out: Vec<u8> = Vec::with_capacity(self.input_len);
        for t in &self.triples {
            let (off, len) = (t.offset as usize, t.length as usize);
            if len > 0 {
                if off == 0 || off > out.len() || off > self.window_len {
                    return Err(Error::corrupt(format!("offset {off} outside the window")));
                }
                let start = out.len() - off;
                for i in 0..len {
                    out.push(out[start + i]);
                }
            }
            out.push(t.literal);
        }
        if out.len() != self.input_len {
            return Err(Error::corrupt("LZ77 output length mismatch"));
        }
        Ok(out)
    }
}

fn field_bits(window_len: usize) -> u64 {
    (usize::BITS - window_len.leading_zeros()) as u64
}

pub fn lz77_window_encode(input: &[u8], window_len: usize) -> Result<Lz77Encoding> {
    if window_len == 0 {
        return Err(Error::validation(
            "LZ77 window must hold at least one symbol",
        ));
    }
    let mut triples = Vec::new();
    let mut pos = 0;
    while pos < input.len() {
        let max_len = (input.len() - pos - 1).min(window_len);
        let mut best = (0usize, 0usize);
        for off in 1..=pos.min(window_len) {
            let src = pos - off;
            let mut l = 0;
            while l < max_len && input[src + l] == input[pos + l] {
                l += 1;
            }
            if l > best.1 {
                best = (off, l);
                if l == max_len {
                    break;
                }
            }
        }
        let (offset, length) = best;
        let literal = input[pos + length];
        triples.push(Triple {
            offset: offset as u32,
            length: length as u32,
            literal,
        });
        pos += length + 1;
    }
    Ok(Lz77Encoding {
        window_len,
        input_len: input.len(),
        triples,
    })
}
