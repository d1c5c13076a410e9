//! One-pass, memory-bounded lossless compression.
//!
//! The input is cut into blocks whose length grows as `n^(c - eps/2)`; each
//! block is compressed independently by a BWT pipeline and written out before
//! the next one is read. Working memory is therefore bounded by the block
//! length while the output stays within a per-block redundancy term of the
//! k-th order empirical entropy of the whole input.
//!
//! Modules:
//! - [`entropy`]: k-th order empirical entropy and context statistics.
//! - [`codec`]: the per-block BWT / move-to-front / zero-run / range coder.
//! - [`stream`]: block sizing, the one-pass encoder and decoder, the
//!   container format and memory accounting.
//! - [`debruijn`]: de Bruijn sequences and zero-entropy repetition corpora.
//! - [`harness`]: experiments, the Markov fixture, and an LZ77 baseline.

pub mod codec;
pub mod debruijn;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod memory;
pub mod stream;

pub use codec::{compress_block, decompress_block, BlockPayload};
pub use debruijn::DeBruijnSpec;
pub use entropy::{empirical_entropy, entropy_profile, AlphabetSpec, EntropyProfile};
pub use error::{Error, Result};
pub use memory::MemoryMeter;
pub use stream::{EncodedStream, MemoryReport, TradeoffParams};

/// `ceil(x)` that ignores floating-point noise just above an integer, so that
/// exact powers such as `2^(20 * 0.4)` round to themselves.
pub fn ceil_tolerant(x: f64) -> f64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil()
}
