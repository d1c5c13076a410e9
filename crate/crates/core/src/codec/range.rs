//! Adaptive order-0 range coder over a small token alphabet.
//!
//! The encoder is the carry-propagating byte-oriented scheme used by LZMA;
//! the leading byte it would always emit as zero is omitted. Frequencies are
//! kept in a Fenwick tree, incremented after every symbol and halved whenever
//! the total passes [`FREQ_CAP`].
//!
//! Two model settings are tried for every token string and the shorter
//! output kept; a leading tag byte names the winner:
//!
//! | tag | initial count | increment |
//! |-----|---------------|-----------|
//! | 0   | 8             | 1         |
//! | 1   | 1             | 32        |
//!
//! The first suits near-uniform data, the second skewed data such as
//! move-to-front output.

use super::rle0::Token;
use crate::error::{Error, Result};

pub const FREQ_CAP: u32 = 1 << 16;
const TOP: u32 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    pub initial: u32,
    pub increment: u32,
}

pub const MODELS: [ModelParams; 2] = [
    ModelParams {
        initial: 8,
        increment: 1,
    },
    ModelParams {
        initial: 1,
        increment: 32,
    },
];

/// Adaptive frequency table.
#[derive(Debug, Clone)]
pub struct FrequencyModel {
    freq: Vec<u32>,
    tree: Vec<u32>,
    total: u32,
    increment: u32,
    top_bit: usize,
}

impl FrequencyModel {
    pub fn new(symbols: usize, params: ModelParams) -> Self {
        assert!(symbols >= 1 && (symbols as u64) * params.initial as u64 <= FREQ_CAP as u64);
        let mut m = FrequencyModel {
            freq: vec![params.initial; symbols],
            tree: vec![0; symbols + 1],
            total: 0,
            increment: params.increment,
            top_bit: symbols.next_power_of_two(),
        };
        m.rebuild();
        m
    }

    pub fn symbols(&self) -> usize {
        self.freq.len()
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    fn rebuild(&mut self) {
        self.tree.iter_mut().for_each(|t| *t = 0);
        self.total = 0;
        for i in 0..self.freq.len() {
            let mut j = i + 1;
            while j < self.tree.len() {
                self.tree[j] += self.freq[i];
                j += j & j.wrapping_neg();
            }
            self.total += self.freq[i];
        }
    }

    /// Cumulative frequency of symbols below `sym`.
    pub fn cumulative(&self, sym: usize) -> u32 {
        let mut i = sym;
        let mut acc = 0;
        while i > 0 {
            acc += self.tree[i];
            i &= i - 1;
        }
        acc
    }

    pub fn frequency(&self, sym: usize) -> u32 {
        self.freq[sym]
    }

    /// Symbol whose cumulative interval contains `target`, with its low end.
    pub fn find(&self, target: u32) -> (usize, u32) {
        let mut pos = 0;
        let mut rem = target;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        (pos, target - rem)
    }

    pub fn update(&mut self, sym: usize) {
        self.freq[sym] += self.increment;
        self.total += self.increment;
        let mut j = sym + 1;
        while j < self.tree.len() {
            self.tree[j] += self.increment;
            j += j & j.wrapping_neg();
        }
        if self.total > FREQ_CAP {
            for f in &mut self.freq {
                *f = f.div_ceil(2);
            }
            self.rebuild();
        }
    }
}

pub struct RangeEncoder {
    out: Vec<u8>,
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    skip_first: bool,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        RangeEncoder {
            out: Vec::new(),
            low: 0,
            range: u32::MAX,
            cache: 0,
            cache_size: 1,
            skip_first: true,
        }
    }

    pub fn encode(&mut self, model: &mut FrequencyModel, sym: usize) {
        let r = self.range / model.total();
        self.low += r as u64 * model.cumulative(sym) as u64;
        self.range = r * model.frequency(sym);
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
        model.update(sym);
    }

    fn shift_low(&mut self) {
        if (self.low as u32) < 0xFF00_0000 || (self.low >> 32) != 0 {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.emit(byte.wrapping_add(carry));
                byte = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    fn emit(&mut self, byte: u8) {
        if self.skip_first {
            debug_assert_eq!(byte, 0);
            self.skip_first = false;
        } else {
            self.out.push(byte);
        }
    }

    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }
}

pub struct RangeDecoder<'a> {
    data: &'a [u8],
    pos: usize,
    code: u32,
    range: u32,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self> {
        let mut d = RangeDecoder {
            data,
            pos: 0,
            code: 0,
            range: u32::MAX,
        };
        for _ in 0..4 {
            d.code = (d.code << 8) | d.next_byte()? as u32;
        }
        Ok(d)
    }

    fn next_byte(&mut self) -> Result<u8> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| Error::corrupt("entropy-coded body is truncated"))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn decode(&mut self, model: &mut FrequencyModel) -> Result<usize> {
        let r = self.range / model.total();
        let target = self.code / r;
        if target >= model.total() {
            return Err(Error::corrupt(
                "entropy-coded value outside the model range",
            ));
        }
        let (sym, cum) = model.find(target);
        self.code -= r * cum;
        self.range = r * model.frequency(sym);
        while self.range < TOP {
            self.range <<= 8;
            self.code = (self.code << 8) | self.next_byte()? as u32;
        }
        model.update(sym);
        Ok(sym)
    }

    /// Checks that the stream ended exactly where the encoder flushed it.
    pub fn finish(self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::corrupt(format!(
                "{} trailing bytes after entropy-coded body",
                self.data.len() - self.pos
            )));
        }
        if self.code != 0 {
            return Err(Error::corrupt(
                "entropy-coded body failed its final-state check",
            ));
        }
        Ok(())
    }
}

fn encode_with(tokens: &[Token], symbols: usize, tag: u8) -> Vec<u8> {
    let mut model = FrequencyModel::new(symbols, MODELS[tag as usize]);
    let mut enc = RangeEncoder::new();
    for &t in tokens {
        enc.encode(&mut model, t as usize);
    }
    let body = enc.finish();
    let mut out = Vec::with_capacity(body.len() + 1);
    out.push(tag);
    out.extend_from_slice(&body);
    out
}

/// Entropy-codes `tokens`, each below `symbols`.
pub fn entropy_encode(tokens: &[Token], symbols: usize) -> Result<Vec<u8>> {
    if let Some(&bad) = tokens.iter().find(|&&t| t as usize >= symbols) {
        return Err(Error::validation(format!(
            "token {bad} outside alphabet of {symbols} tokens"
        )));
    }
    if tokens.is_empty() {
        return Ok(encode_with(tokens, symbols, 0));
    }
    let a = encode_with(tokens, symbols, 0);
    let b = encode_with(tokens, symbols, 1);
    Ok(if b.len() < a.len() { b } else { a })
}

/// Decodes exactly `count` tokens and checks the body is fully consumed.
pub fn entropy_decode(bytes: &[u8], symbols: usize, count: usize) -> Result<Vec<Token>> {
    let mut dec = TokenDecoder::new(bytes, symbols)?;
    let tokens = (0..count)
        .map(|_| dec.next_token())
        .collect::<Result<Vec<_>>>()?;
    dec.finish()?;
    Ok(tokens)
}

/// Streaming token decoder for bodies produced by [`entropy_encode`].
pub struct TokenDecoder<'a> {
    model: FrequencyModel,
    dec: RangeDecoder<'a>,
}

impl<'a> TokenDecoder<'a> {
    pub fn new(bytes: &'a [u8], symbols: usize) -> Result<Self> {
        let (&tag, body) = bytes
            .split_first()
            .ok_or_else(|| Error::corrupt("entropy-coded body is empty"))?;
        let params = *MODELS
            .get(tag as usize)
            .ok_or_else(|| Error::corrupt(format!("unknown model tag {tag}")))?;
        Ok(TokenDecoder {
            model: FrequencyModel::new(symbols, params),
            dec: RangeDecoder::new(body)?,
        })
    }

    pub fn next_token(&mut self) -> Result<Token> {
        Ok(self.dec.decode(&mut self.model)? as Token)
    }

    pub fn finish(self) -> Result<()> {
        self.dec.finish()
    }
}
