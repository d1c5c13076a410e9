//! Zero-run coding of move-to-front ranks.
//!
//! A run of `z` zeros is written as the digits of `z` in bijective base 2,
//! least significant first: [`RUN_A`] is digit 1 and [`RUN_B`] digit 2.
//! A nonzero rank `r` becomes token `r + 1`.

use crate::error::{Error, Result};

pub type Token = u16;

pub const RUN_A: Token = 0;
pub const RUN_B: Token = 1;

/// Largest token produced for byte ranks.
pub const MAX_RANK_TOKEN: Token = 256;

pub fn rle0_encode(ranks: &[u8]) -> Vec<Token> {
    let mut tokens = Vec::with_capacity(ranks.len() / 2 + 1);
    let mut run = 0usize;
    for &r in ranks {
        if r == 0 {
            run += 1;
        } else {
            push_run(&mut tokens, run);
            run = 0;
            tokens.push(r as Token + 1);
        }
    }
    push_run(&mut tokens, run);
    tokens
}

pub(crate) fn push_run(tokens: &mut Vec<Token>, mut run: usize) {
    while run > 0 {
        if run & 1 == 1 {
            tokens.push(RUN_A);
            run = (run - 1) / 2;
        } else {
            tokens.push(RUN_B);
            run = (run - 2) / 2;
        }
    }
}

pub fn rle0_decode(tokens: &[Token]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut decoder = Rle0Decoder::default();
    for &t in tokens {
        decoder.push(t, &mut out, usize::MAX)?;
    }
    decoder.finish(&mut out, usize::MAX)?;
    Ok(out)
}

/// Incremental decoder that refuses to grow its output past a limit.
#[derive(Debug, Default)]
pub(crate) struct Rle0Decoder {
    run: usize,
    weight: usize,
}

impl Rle0Decoder {
    pub(crate) fn push(&mut self, token: Token, out: &mut Vec<u8>, limit: usize) -> Result<()> {
        match token {
            RUN_A | RUN_B => {
                if self.weight == 0 {
                    self.weight = 1;
                }
                let digit: usize = if token == RUN_A { 1 } else { 2 };
                self.run = digit
                    .checked_mul(self.weight)
                    .and_then(|d| self.run.checked_add(d))
                    .filter(|&r| r <= limit - out.len().min(limit))
                    .ok_or_else(|| Error::corrupt("zero run exceeds the block length"))?;
                self.weight = self.weight.saturating_mul(2);
            }
            t if t <= MAX_RANK_TOKEN => {
                self.finish(out, limit)?;
                if out.len() >= limit {
                    return Err(Error::corrupt("decoded ranks exceed the block length"));
                }
                out.push((t - 1) as u8);
            }
            t => return Err(Error::corrupt(format!("invalid run-length token {t}"))),
        }
        Ok(())
    }

    pub(crate) fn finish(&mut self, out: &mut Vec<u8>, limit: usize) -> Result<()> {
        if self.run > limit.saturating_sub(out.len()) {
            return Err(Error::corrupt("zero run exceeds the block length"));
        }
        out.resize(out.len() + self.run, 0);
        self.run = 0;
        self.weight = 0;
        Ok(())
    }
}
