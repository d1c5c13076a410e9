//! De Bruijn sequences: canonical generation, random sampling, verification,
//! exhaustive counting, and the repeated-prefix corpora that have zero
//! k-th order empirical entropy.
//!
//! Sequences are *linear*: length `sigma^k + k - 1`, every k-tuple exactly
//! once, and the first `k - 1` symbols equal the last `k - 1`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ceil_tolerant;
use crate::error::{Error, Result};

/// Largest `sigma^k` for which sequences are enumerated exhaustively.
pub const ENUMERATION_LIMIT: usize = 16;

/// Largest `sigma^k` accepted for generation.
pub const GENERATION_LIMIT: usize = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeBruijnSpec {
    sigma: usize,
    k: usize,
}

impl DeBruijnSpec {
    pub fn new(sigma: usize, k: usize) -> Result<Self> {
        if !(2..=256).contains(&sigma) {
            return Err(Error::validation(format!(
                "de Bruijn alphabet size must be in 2..=256, got {sigma}"
            )));
        }
        if k == 0 {
            return Err(Error::validation("de Bruijn order must be at least 1"));
        }
        match sigma.checked_pow(k as u32) {
            Some(t) if t <= GENERATION_LIMIT => Ok(DeBruijnSpec { sigma, k }),
            _ => Err(Error::validation(format!(
                "{sigma}^{k} tuples exceed the generation limit of {GENERATION_LIMIT}"
            ))),
        }
    }

    pub fn sigma(self) -> usize {
        self.sigma
    }

    pub fn order(self) -> usize {
        self.k
    }

    /// Number of k-tuples, `sigma^k`.
    pub fn tuples(self) -> usize {
        self.sigma.pow(self.k as u32)
    }

    /// Length of a linear sequence, `sigma^k + k - 1`.
    pub fn sequence_len(self) -> usize {
        self.tuples() + self.k - 1
    }

    /// Closed-form family size `(sigma!)^(sigma^(k-1))`, if it fits in `u128`.
    pub fn family_size(self) -> Option<u128> {
        let fact = (1..=self.sigma as u128).try_fold(1u128, |a, b| a.checked_mul(b))?;
        let exp = u32::try_from(self.sigma.pow(self.k as u32 - 1)).ok()?;
        fact.checked_pow(exp)
    }
}

/// Canonical sequence: the concatenation of Lyndon words whose lengths divide
/// `k`, in lexicographic order, followed by its own first `k - 1` symbols.
pub fn generate(spec: DeBruijnSpec) -> Vec<u8> {
    let (sigma, k) = (spec.sigma, spec.k);
    let mut out = Vec::with_capacity(spec.sequence_len());
    // Iterative FKM: `word` walks the prenecklaces in lexicographic order.
    let mut word = vec![0usize; k + 1];
    let mut p = 1;
    loop {
        if k % p == 0 {
            out.extend(word[1..=p].iter().map(|&c| c as u8));
        }
        let mut i = k;
        while i > 0 && word[i] == sigma - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        word[i] += 1;
        for j in i + 1..=k {
            word[j] = word[j - i];
        }
        p = i;
    }
    out.extend_from_within(..k - 1);
    out
}

pub fn verify(s: &[u8], spec: DeBruijnSpec) -> bool {
    let (sigma, k) = (spec.sigma, spec.k);
    if s.len() != spec.sequence_len() || s.iter().any(|&c| c as usize >= sigma) {
        return false;
    }
    if s[..k - 1] != s[s.len() - (k - 1)..] {
        return false;
    }
    let mut seen = vec![false; spec.tuples()];
    for w in s.windows(k) {
        let code = w.iter().fold(0usize, |a, &c| a * sigma + c as usize);
        if std::mem::replace(&mut seen[code], true) {
            return false;
        }
    }
    true
}

fn require_enumerable(spec: DeBruijnSpec) -> Result<()> {
    if spec.tuples() > ENUMERATION_LIMIT {
        return Err(Error::validation(format!(
            "exhaustive enumeration needs sigma^k <= {ENUMERATION_LIMIT}, got {}",
            spec.tuples()
        )));
    }
    Ok(())
}

/// Depth-first search over strings of length `sigma^k + k - 1` that never
/// repeat a k-tuple; calls `visit` on every complete valid sequence.
fn search(spec: DeBruijnSpec, mut visit: impl FnMut(&[u8])) {
    let (sigma, k) = (spec.sigma, spec.k);
    let len = spec.sequence_len();
    let mut s = vec![0u8; len];
    let mut used = vec![false; spec.tuples()];
    let modulus = spec.tuples() / sigma;

    fn extend(
        s: &mut [u8],
        at: usize,
        used: &mut [bool],
        spec: DeBruijnSpec,
        modulus: usize,
        visit: &mut dyn FnMut(&[u8]),
    ) {
        let (sigma, k) = (spec.sigma, spec.k);
        if at == s.len() {
            if s[..k - 1] == s[s.len() - (k - 1)..] {
                visit(s);
            }
            return;
        }
        let prefix = s[at + 1 - k..at]
            .iter()
            .fold(0usize, |a, &c| a * sigma + c as usize)
            % modulus.max(1);
        for c in 0..sigma {
            let code = prefix * sigma + c;
            if used[code] {
                continue;
            }
            used[code] = true;
            s[at] = c as u8;
            extend(s, at + 1, used, spec, modulus, visit);
            used[code] = false;
        }
    }

    // Every choice of the first k - 1 symbols, then extend one tuple at a time.
    let starts = modulus;
    for start in 0..starts {
        let mut v = start;
        for i in (0..k - 1).rev() {
            s[i] = (v % sigma) as u8;
            v /= sigma;
        }
        extend(&mut s, k - 1, &mut used, spec, modulus, &mut visit);
    }
}

/// Number of valid linear sequences, by exhaustive search.
pub fn enumerate_count(spec: DeBruijnSpec) -> Result<u64> {
    require_enumerable(spec)?;
    let mut count = 0u64;
    search(spec, |_| count += 1);
    Ok(count)
}

/// Every valid linear sequence, in lexicographic order.
pub fn enumerate_all(spec: DeBruijnSpec) -> Result<Vec<Vec<u8>>> {
    require_enumerable(spec)?;
    let mut all = Vec::new();
    search(spec, |s| all.push(s.to_vec()));
    Ok(all)
}

/// A valid sequence chosen by `seed`.
///
/// Small families (`sigma^k <= 16`) are sampled uniformly from the full
/// enumeration. Larger ones come from an Eulerian circuit of the de Bruijn
/// graph found by Hierholzer's algorithm with shuffled edge order; these
/// samples are valid but not uniform.
pub fn random_debruijn(spec: DeBruijnSpec, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if spec.tuples() <= ENUMERATION_LIMIT {
        let all = enumerate_all(spec).expect("within enumeration limit");
        return all[rng.gen_range(0..all.len())].clone();
    }

    let (sigma, k) = (spec.sigma, spec.k);
    let nodes = spec.tuples() / sigma;
    let mut edges: Vec<u8> = (0..spec.tuples()).map(|i| (i % sigma) as u8).collect();
    for out in edges.chunks_mut(sigma) {
        out.shuffle(&mut rng);
    }
    let mut next_edge = vec![0usize; nodes];
    let start = rng.gen_range(0..nodes);

    let mut stack: Vec<(usize, u8)> = Vec::with_capacity(spec.tuples());
    let mut circuit: Vec<u8> = Vec::with_capacity(spec.tuples());
    let mut node = start;
    loop {
        if next_edge[node] < sigma {
            let c = edges[node * sigma + next_edge[node]];
            next_edge[node] += 1;
            stack.push((node, c));
            node = (node * sigma + c as usize) % nodes;
        } else if let Some((from, c)) = stack.pop() {
            circuit.push(c);
            node = from;
        } else {
            break;
        }
    }
    circuit.reverse();

    let mut out = Vec::with_capacity(spec.sequence_len());
    let mut v = start;
    let mut head = vec![0u8; k - 1];
    for slot in head.iter_mut().rev() {
        *slot = (v % sigma) as u8;
        v /= sigma;
    }
    out.extend_from_slice(&head);
    out.extend_from_slice(&circuit);
    out
}

/// Whole repetitions of `d`, the first `sigma^k` symbols of a random
/// sequence, filling at most `n` symbols.
pub fn adversarial_corpus(spec: DeBruijnSpec, n: usize, seed: u64) -> Result<Vec<u8>> {
    let period = spec.tuples();
    if n < period {
        return Err(Error::validation(format!(
            "corpus length {n} is shorter than one period of {period} symbols"
        )));
    }
    let seq = random_debruijn(spec, seed);
    Ok(seq[..period].repeat(n / period))
}

/// Context order `ceil((c + eps/2) * log_sigma n)` at which the repeated
/// corpus defeats an `n^c`-memory encoder.
pub fn theorem3_order(n: u64, sigma: usize, c: f64, eps: f64) -> usize {
    let log = (n as f64).ln() / (sigma as f64).ln();
    ceil_tolerant((c + eps / 2.0) * log).max(0.0) as usize
}
