//! k-th order empirical entropy of symbol strings.
//!
//! `H_k(s)` is computed from context statistics: every position `i > k` is
//! grouped by its `k` preceding characters, and each group contributes the
//! zeroth-order entropy of the characters that follow that context. The first
//! `k` characters contribute nothing. All values are in bits per character.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// An alphabet of `sigma` symbols, the byte values `0..sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlphabetSpec {
    sigma: u16,
}

impl AlphabetSpec {
    pub const BYTES: AlphabetSpec = AlphabetSpec { sigma: 256 };

    pub fn new(sigma: usize) -> Result<Self> {
        if !(2..=256).contains(&sigma) {
            return Err(Error::validation(format!(
                "alphabet size must be in 2..=256, got {sigma}"
            )));
        }
        Ok(AlphabetSpec {
            sigma: sigma as u16,
        })
    }

    /// Smallest alphabet (at least binary) that covers every byte of `data`.
    pub fn covering(data: &[u8]) -> Self {
        let max = data.iter().copied().max().unwrap_or(0) as u16;
        AlphabetSpec {
            sigma: (max + 1).max(2),
        }
    }

    pub fn sigma(self) -> usize {
        self.sigma as usize
    }

    pub fn log2_sigma(self) -> f64 {
        (self.sigma as f64).log2()
    }

    /// Fails with a validation error on the first symbol outside the alphabet.
    pub fn check(self, s: &[u8]) -> Result<()> {
        match s.iter().position(|&b| b as u16 >= self.sigma) {
            None => Ok(()),
            Some(i) => Err(Error::validation(format!(
                "symbol {} at position {i} is outside the alphabet of size {}",
                s[i], self.sigma
            ))),
        }
    }
}

/// Entropy per character at orders `0..=kmax` for one string.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub n: usize,
    pub values: Vec<f64>,
}

impl EntropyProfile {
    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    /// Total self-information `n * H_k` in bits.
    pub fn bits(&self, k: usize) -> f64 {
        self.n as f64 * self.values[k]
    }
}

/// Follower counts for every length-`k` context occurring in `s`.
///
/// Each value is a frequency vector of length `sigma`; entry `c` counts the
/// positions where context `w` is immediately followed by symbol `c`.
pub fn context_stats(
    s: &[u8],
    k: usize,
    alphabet: AlphabetSpec,
) -> Result<BTreeMap<Vec<u8>, Vec<u64>>> {
    alphabet.check(s)?;
    let mut stats: BTreeMap<Vec<u8>, Vec<u64>> = BTreeMap::new();
    if s.len() <= k {
        return Ok(stats);
    }
    for window in s.windows(k + 1) {
        let (ctx, next) = window.split_at(k);
        let counts = stats
            .entry(ctx.to_vec())
            .or_insert_with(|| vec![0; alphabet.sigma()]);
        counts[next[0] as usize] += 1;
    }
    Ok(stats)
}

/// Zeroth-order entropy of a frequency vector, in bits per symbol.
pub fn h0_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    weighted_entropy(counts.iter().copied(), total) / total as f64
}

/// `sum_c n_c * log2(total / n_c)`, skipping zero counts.
fn weighted_entropy(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let t = total as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| c as f64 * (t / c as f64).log2())
        .sum()
}

/// `H_k(s)` in bits per character.
pub fn empirical_entropy(s: &[u8], k: usize, alphabet: AlphabetSpec) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::validation("empirical entropy of an empty string"));
    }
    alphabet.check(s)?;
    Ok(entropy_bits_unchecked(s, k) / s.len() as f64)
}

/// `n * H_k(s)` in bits, without alphabet validation.
pub(crate) fn entropy_bits_unchecked(s: &[u8], k: usize) -> f64 {
    if s.len() <= k {
        return 0.0;
    }
    if k == 0 {
        let mut counts = [0u64; 256];
        for &b in s {
            counts[b as usize] += 1;
        }
        return weighted_entropy(counts.iter().copied(), s.len() as u64);
    }

    let mut grams: HashMap<&[u8], u64> = HashMap::new();
    for window in s.windows(k + 1) {
        *grams.entry(window).or_insert(0) += 1;
    }
    let mut grams: Vec<(&[u8], u64)> = grams.into_iter().collect();
    // Sorted order groups each context's followers together and makes the
    // floating-point summation order reproducible.
    grams.sort_unstable_by(|a, b| a.0.cmp(b.0));

    let mut total = 0.0;
    let mut start = 0;
    while start < grams.len() {
        let ctx = &grams[start].0[..k];
        let mut end = start + 1;
        while end < grams.len() && &grams[end].0[..k] == ctx {
            end += 1;
        }
        let group = &grams[start..end];
        let mass: u64 = group.iter().map(|g| g.1).sum();
        total += weighted_entropy(group.iter().map(|g| g.1), mass);
        start = end;
    }
    total
}

/// `H_0..=H_kmax` of `s`.
///
/// Orders above roughly `log_sigma(n)` are legal but statistically vacuous;
/// see [`vacuous_order`].
pub fn entropy_profile(s: &[u8], kmax: usize, alphabet: AlphabetSpec) -> Result<EntropyProfile> {
    if s.is_empty() {
        return Err(Error::validation("entropy profile of an empty string"));
    }
    if kmax > s.len() {
        return Err(Error::validation(format!(
            "kmax {kmax} exceeds the string length {}",
            s.len()
        )));
    }
    alphabet.check(s)?;
    let values = (0..=kmax)
        .map(|k| entropy_bits_unchecked(s, k) / s.len() as f64)
        .collect();
    Ok(EntropyProfile { n: s.len(), values })
}

/// First order at which most contexts of a length-`n` string are unique, so
/// `H_k` says little about the source: `ceil(log_sigma n) + 1`.
pub fn vacuous_order(n: usize, alphabet: AlphabetSpec) -> usize {
    let n = n.max(1) as f64;
    (n.ln() / (alphabet.sigma() as f64).ln()).ceil() as usize + 1
}
