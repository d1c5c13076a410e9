use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use onepass::codec::{compress_block, decompress_block};
use onepass::harness::{experiment_tradeoff, markov_corpus};
use onepass::stream::{block_length, decode, encode_known_n, encode_unknown_n, TradeoffParams};
use onepass::{empirical_entropy, entropy_profile, AlphabetSpec};

/// `n * H_k` by charging each position `log2(n_w / n_wc)`, with both counts
/// found by rescanning the whole string.
fn entropy_bits_by_scanning(s: &[u8], k: usize) -> f64 {
    let mut bits = 0.0;
    for i in k..s.len() {
        let w = &s[i - k..i];
        let (mut n_w, mut n_wc) = (0u32, 0u32);
        for j in k..s.len() {
            if &s[j - k..j] == w {
                n_w += 1;
                if s[j] == s[i] {
                    n_wc += 1;
                }
            }
        }
        bits += (n_w as f64 / n_wc as f64).log2();
    }
    bits
}

fn all_strings(sigma: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..sigma).map(move |c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

#[test]
fn entropy_matches_scanning_oracle_exhaustively() {
    for sigma in 2..=3u8 {
        let a = AlphabetSpec::new(sigma as usize).unwrap();
        let max_len = if sigma == 2 { 12 } else { 8 };
        for len in 1..=max_len {
            for s in all_strings(sigma, len) {
                for k in 0..=len.min(4) {
                    let got = len as f64 * empirical_entropy(&s, k, a).unwrap();
                    let want = entropy_bits_by_scanning(&s, k);
                    assert!((got - want).abs() < 1e-9, "{s:?} k={k}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn entropy_matches_scanning_oracle_on_random_strings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let sigma = rng.gen_range(2..=3);
        let s: Vec<u8> = (0..12).map(|_| rng.gen_range(0..sigma)).collect();
        let a = AlphabetSpec::new(sigma as usize).unwrap();
        for k in 0..=6 {
            let got = 12.0 * empirical_entropy(&s, k, a).unwrap();
            assert!((got - entropy_bits_by_scanning(&s, k)).abs() < 1e-9);
        }
    }
}

#[test]
fn hand_traced_values() {
    let bytes = AlphabetSpec::BYTES;
    assert_eq!(empirical_entropy(b"aaaa", 0, bytes).unwrap(), 0.0);
    assert!((empirical_entropy(b"abab", 0, bytes).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(empirical_entropy(b"abab", 1, bytes).unwrap(), 0.0);
    // "aab": context "a" is followed once by 'a' and once by 'b'.
    assert!((empirical_entropy(b"aab", 1, bytes).unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn tradeoff_rows_are_consistent() {
    let data = markov_corpus(1 << 14, 3);
    let report = experiment_tradeoff(&data, &[0.4, 0.7, 1.0], 0.2, 4).unwrap();
    let profile = entropy_profile(&data, 4, AlphabetSpec::new(2).unwrap()).unwrap();
    let mut best_per_c = BTreeMap::new();
    for r in &report.rows {
        let params = TradeoffParams::known(r.c, r.eps, r.n).unwrap();
        let len = block_length(r.n, &params);
        assert_eq!(r.b, (r.n as usize).div_ceil(len));
        assert!((r.entropy_bits - profile.bits(r.k)).abs() < 1e-6);
        assert!((r.redundancy_bits - (r.encoded_bits as f64 - r.entropy_bits)).abs() < 1e-6);
        assert!(
            (r.bound_bits - report.beta * r.bound_scale()).abs()
                < 1e-6 * r.bound_bits.abs().max(1.0)
        );
        if r.row_kind == "best" {
            assert!(best_per_c.insert(r.c.to_bits(), r.k).is_none());
        }
    }
    assert_eq!(best_per_c.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_monotone_and_bounded(
        sigma in 2usize..=5,
        raw in proptest::collection::vec(any::<u8>(), 1..400),
    ) {
        let s: Vec<u8> = raw.iter().map(|b| b % sigma as u8).collect();
        let a = AlphabetSpec::new(sigma).unwrap();
        let kmax = s.len().min(6);
        let p = entropy_profile(&s, kmax, a).unwrap();
        for w in p.values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for &h in &p.values {
            prop_assert!(h >= 0.0 && h <= a.log2_sigma() + 1e-12);
        }
    }

    #[test]
    fn block_roundtrip(
        sigma in prop_oneof![Just(2usize), Just(4), Just(16), Just(256)],
        raw in proptest::collection::vec(any::<u8>(), 1..3000),
    ) {
        let s: Vec<u8> = raw.iter().map(|&b| (b as usize % sigma) as u8).collect();
        let a = AlphabetSpec::new(sigma).unwrap();
        let payload = compress_block(&s, a).unwrap();
        prop_assert_eq!(decompress_block(&payload, a).unwrap(), s);
    }

    #[test]
    fn stream_roundtrip(
        raw in proptest::collection::vec(0u8..3, 1..20_000),
        c in 0.0f64..=1.0,
        eps in 0.05f64..0.5,
    ) {
        let a = AlphabetSpec::new(3).unwrap();
        let (known, _) = encode_known_n(&raw[..], &TradeoffParams::known(c, eps, raw.len() as u64).unwrap(), a).unwrap();
        prop_assert_eq!(known.raw_len(), raw.len() as u64);
        prop_assert_eq!(decode(&known).unwrap(), raw.clone());
        let (unknown, _) = encode_unknown_n(&raw[..], &TradeoffParams::unknown(c, eps).unwrap(), a).unwrap();
        prop_assert_eq!(decode(&unknown).unwrap(), raw);
    }
}
