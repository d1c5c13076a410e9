//! Per-block compressor: BWT, move-to-front, zero-run coding and an adaptive
//! order-0 range coder.
//!
//! The token stream of a block is the run-length coded MTF ranks of the
//! sentinel-free BWT column, closed by an end-of-block token. With alphabet
//! size `sigma` the token alphabet is `0..sigma + 2`: the two run digits,
//! ranks `1..sigma` shifted up by one, and the end-of-block token `sigma + 1`.
//! The sentinel's row travels in the payload as `primary_index`.

pub mod bwt;
pub mod mtf;
pub mod range;
pub mod rle0;
pub mod sais;

use std::io::{self, Read, Write};

use crate::entropy::AlphabetSpec;
use crate::error::{Error, Result};
use crate::memory::MemoryMeter;

pub use bwt::{bwt_forward, bwt_inverse, BwtOutput, SENTINEL};
pub use mtf::{mtf_decode, mtf_encode};
pub use range::{entropy_decode, entropy_encode};
pub use rle0::{rle0_decode, rle0_encode, Token};

/// Serialized size of a payload header: raw_len, primary_index, body length.
pub const RECORD_HEADER_BYTES: usize = 12;

/// One compressed block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPayload {
    pub raw_len: u32,
    pub primary_index: u32,
    pub body: Vec<u8>,
}

impl BlockPayload {
    pub fn encoded_len(&self) -> usize {
        RECORD_HEADER_BYTES + self.body.len()
    }

    /// Writes `raw_len`, `primary_index` and body length as little-endian
    /// `u32`s, then the body.
    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&self.raw_len.to_le_bytes())?;
        w.write_all(&self.primary_index.to_le_bytes())?;
        w.write_all(&(self.body.len() as u32).to_le_bytes())?;
        w.write_all(&self.body)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.encoded_len());
        self.write_to(&mut v).expect("writing to a Vec");
        v
    }

    /// Reads one record. A record with `raw_len == 0` is the stream
    /// terminator and is returned as-is.
    pub fn read_from<R: Read>(r: &mut R) -> Result<BlockPayload> {
        let mut head = [0u8; RECORD_HEADER_BYTES];
        r.read_exact(&mut head)?;
        let field = |i: usize| u32::from_le_bytes(head[4 * i..4 * i + 4].try_into().unwrap());
        let (raw_len, primary_index, body_len) = (field(0), field(1), field(2));
        if raw_len == 0 {
            if primary_index != 0 || body_len != 0 {
                return Err(Error::corrupt("malformed terminator record"));
            }
            return Ok(BlockPayload {
                raw_len,
                primary_index,
                body: Vec::new(),
            });
        }
        // Bodies never exceed the raw block by more than the coder's framing;
        // reject absurd lengths before allocating.
        if body_len as u64 > 2 * raw_len as u64 + 64 {
            return Err(Error::corrupt(format!(
                "body length {body_len} implausible for {raw_len} symbols"
            )));
        }
        let mut body = vec![0u8; body_len as usize];
        r.read_exact(&mut body)?;
        Ok(BlockPayload {
            raw_len,
            primary_index,
            body,
        })
    }

    pub fn is_terminator(&self) -> bool {
        self.raw_len == 0
    }
}

fn token_alphabet(alphabet: AlphabetSpec) -> usize {
    alphabet.sigma() + 2
}

fn end_of_block(alphabet: AlphabetSpec) -> Token {
    (alphabet.sigma() + 1) as Token
}

pub fn compress_block(block: &[u8], alphabet: AlphabetSpec) -> Result<BlockPayload> {
    compress_block_metered(block, alphabet, &mut MemoryMeter::new())
}

/// [`compress_block`] with working buffers registered on `meter`. The
/// returned body stays registered; the caller frees it once written out.
pub fn compress_block_metered(
    block: &[u8],
    alphabet: AlphabetSpec,
    meter: &mut MemoryMeter,
) -> Result<BlockPayload> {
    if block.is_empty() {
        return Err(Error::validation("cannot compress an empty block"));
    }
    if block.len() >= u32::MAX as usize {
        return Err(Error::validation("block longer than 2^32 - 2 symbols"));
    }
    alphabet.check(block)?;
    let n = block.len();

    let (column, primary_index) = bwt::bwt_column(block, meter);
    meter.alloc(n);
    let ranks = mtf::mtf_encode(&column, alphabet)?;
    drop(column);
    meter.free(n);

    let mut tokens = rle0::rle0_encode(&ranks);
    tokens.push(end_of_block(alphabet));
    meter.alloc(2 * tokens.len());
    drop(ranks);
    meter.free(n);

    // Both candidate bodies are alive while the shorter one is chosen.
    let budget = 2 * (tokens.len() * 2 + 16);
    meter.alloc(budget);
    let body = range::entropy_encode(&tokens, token_alphabet(alphabet))?;
    meter.free(budget);
    meter.alloc(body.len());
    meter.free(2 * tokens.len());

    Ok(BlockPayload {
        raw_len: n as u32,
        primary_index: primary_index as u32,
        body,
    })
}

pub fn decompress_block(payload: &BlockPayload, alphabet: AlphabetSpec) -> Result<Vec<u8>> {
    let n = payload.raw_len as usize;
    if n == 0 {
        return Err(Error::corrupt("block record with zero length"));
    }
    if payload.primary_index as usize > n {
        return Err(Error::corrupt(format!(
            "primary index {} out of range for block of {n} symbols",
            payload.primary_index
        )));
    }

    let eob = end_of_block(alphabet);
    let mut dec = range::TokenDecoder::new(&payload.body, token_alphabet(alphabet))?;
    let mut ranks = Vec::with_capacity(n);
    let mut runs = rle0::Rle0Decoder::default();
    loop {
        let t = dec.next_token()?;
        if t == eob {
            break;
        }
        runs.push(t, &mut ranks, n)?;
    }
    runs.finish(&mut ranks, n)?;
    dec.finish()?;
    if ranks.len() != n {
        return Err(Error::corrupt(format!(
            "decoded {} symbols, record declares {n}",
            ranks.len()
        )));
    }

    let column = mtf::mtf_decode(&ranks, alphabet)?;
    bwt::invert_column(&column, payload.primary_index as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::debruijn::{adversarial_corpus, DeBruijnSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(rng: &mut ChaCha8Rng, len: usize, sigma: usize) -> Vec<u8> {
        (0..len).map(|_| rng.gen_range(0..sigma) as u8).collect()
    }

    #[test]
    fn roundtrip_alphabets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for sigma in [2, 16, 256] {
            let a = AlphabetSpec::new(sigma).unwrap();
            for len in [1, 2, 3, 17, 1000, 20_000] {
                let b = random_block(&mut rng, len, sigma);
                let p = compress_block(&b, a).unwrap();
                assert_eq!(decompress_block(&p, a).unwrap(), b);
            }
        }
    }

    #[test]
    fn length_one() {
        let a = AlphabetSpec::BYTES;
        for byte in [0u8, 1, 200, 255] {
            let p = compress_block(&[byte], a).unwrap();
            assert_eq!(p.raw_len, 1);
            assert_eq!(decompress_block(&p, a).unwrap(), vec![byte]);
        }
    }

    #[test]
    fn empty_block_rejected() {
        assert!(matches!(
            compress_block(&[], AlphabetSpec::BYTES),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn identical_symbols_compress_to_little() {
        let b = vec![b'x'; 4096];
        let p = compress_block(&b, AlphabetSpec::BYTES).unwrap();
        assert!(p.body.len() <= 64, "{} bytes", p.body.len());
        assert_eq!(decompress_block(&p, AlphabetSpec::BYTES).unwrap(), b);
    }

    #[test]
    fn periodic_corpus_costs_about_one_period() {
        let spec = DeBruijnSpec::new(2, 8).unwrap();
        let b = adversarial_corpus(spec, 256 * 64, 0).unwrap();
        assert_eq!(b.len(), 256 * 64);
        let a = AlphabetSpec::new(2).unwrap();
        let p = compress_block(&b, a).unwrap();
        let bits = (p.encoded_len() * 8) as f64;
        assert!(bits <= 256.0 + 0.1 * b.len() as f64, "{bits} bits");
        assert_eq!(decompress_block(&p, a).unwrap(), b);
    }

    #[test]
    fn length_mismatch_is_corrupt() {
        let a = AlphabetSpec::BYTES;
        let mut p = compress_block(b"hello world", a).unwrap();
        p.raw_len += 1;
        assert!(matches!(
            decompress_block(&p, a),
            Err(Error::Corrupt { .. })
        ));
        p.raw_len -= 2;
        assert!(matches!(
            decompress_block(&p, a),
            Err(Error::Corrupt { .. })
        ));
    }

    #[test]
    fn tampering_never_yields_silent_wrong_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sigma in [2usize, 4, 256] {
            let a = AlphabetSpec::new(sigma).unwrap();
            let b = random_block(&mut rng, 3000, sigma);
            let p = compress_block(&b, a).unwrap();
            for i in 0..p.body.len() {
                for flip in [0x01u8, 0x80, 0xFF] {
                    let mut t = p.clone();
                    t.body[i] ^= flip;
                    match decompress_block(&t, a) {
                        Err(_) => {}
                        Ok(out) => assert_eq!(out, b, "sigma {sigma}, byte {i}, flip {flip:#x}"),
                    }
                }
            }
        }
    }

    #[test]
    fn record_serialization() {
        let p = compress_block(b"abracadabra", AlphabetSpec::BYTES).unwrap();
        let bytes = p.to_bytes();
        assert_eq!(&bytes[0..4], &11u32.to_le_bytes());
        assert_eq!(&bytes[4..8], &p.primary_index.to_le_bytes());
        assert_eq!(&bytes[8..12], &(p.body.len() as u32).to_le_bytes());
        let q = BlockPayload::read_from(&mut bytes.as_slice()).unwrap();
        assert_eq!(p, q);
        assert!(BlockPayload::read_from(&mut &bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn meter_reports_linear_scratch() {
        let mut meter = MemoryMeter::new();
        let b = vec![7u8; 10_000];
        let p = compress_block_metered(&b, AlphabetSpec::BYTES, &mut meter).unwrap();
        assert_eq!(meter.current(), p.body.len());
        assert!(meter.peak() >= 4 * b.len());
        assert!(meter.peak() <= 16 * b.len());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn roundtrip_small_alphabet(b in proptest::collection::vec(0u8..4, 1..3000)) {
            let a = AlphabetSpec::new(4).unwrap();
            let p = compress_block(&b, a).unwrap();
            prop_assert_eq!(decompress_block(&p, a).unwrap(), b);
        }
    }
}
