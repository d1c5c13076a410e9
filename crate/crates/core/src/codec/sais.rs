//! Suffix array construction by induced sorting (SA-IS).
//!
//! Suffixes are ordered so that a proper prefix sorts before any longer
//! suffix that extends it, which is exactly the order obtained by appending a
//! unique end marker smaller than every symbol.

use crate::memory::MemoryMeter;

const NONE: u32 = u32::MAX;

pub(crate) trait Symbol: Copy + Eq {
    fn idx(self) -> usize;
}

impl Symbol for u8 {
    #[inline]
    fn idx(self) -> usize {
        self as usize
    }
}

impl Symbol for u32 {
    #[inline]
    fn idx(self) -> usize {
        self as usize
    }
}

/// Suffix array of a byte string.
pub fn suffix_array(s: &[u8]) -> Vec<u32> {
    suffix_array_metered(s, &mut MemoryMeter::new())
}

pub(crate) fn suffix_array_metered(s: &[u8], meter: &mut MemoryMeter) -> Vec<u32> {
    assert!(
        s.len() < NONE as usize,
        "input too long for 32-bit suffix array"
    );
    sa_is(s, 255, meter, 0)
}

fn sa_is<T: Symbol>(s: &[T], upper: usize, meter: &mut MemoryMeter, depth: usize) -> Vec<u32> {
    let n = s.len();
    if n <= 2 {
        // The returned array is registered like the general case's.
        meter.alloc(4 * n);
    }
    match n {
        0 => return vec![],
        1 => return vec![0],
        2 => {
            return if s[0].idx() < s[1].idx() {
                vec![0, 1]
            } else {
                vec![1, 0]
            }
        }
        _ => {}
    }

    // Bucket tables at the top level are sized by the byte alphabet; only the
    // recursive ones scale with the input.
    let bucket_bytes = if depth > 0 { 3 * 4 * (upper + 2) } else { 0 };
    let scratch = 4 * n + n + 4 * (n + 1) + bucket_bytes;
    meter.alloc(scratch);

    let mut sa = vec![NONE; n];
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] {
            ls[i + 1]
        } else {
            s[i].idx() < s[i + 1].idx()
        };
    }

    let mut sum_l = vec![0u32; upper + 2];
    let mut sum_s = vec![0u32; upper + 2];
    for i in 0..n {
        if ls[i] {
            sum_l[s[i].idx() + 1] += 1;
        } else {
            sum_s[s[i].idx()] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        sum_l[i + 1] += sum_s[i];
    }

    let induce = |lms: &[u32], sa: &mut [u32]| {
        sa.fill(NONE);
        let mut buf = sum_s.clone();
        for &d in lms {
            let d = d as usize;
            if d == n {
                continue;
            }
            let b = &mut buf[s[d].idx()];
            sa[*b as usize] = d as u32;
            *b += 1;
        }
        buf.copy_from_slice(&sum_l);
        let last = s[n - 1].idx();
        sa[buf[last] as usize] = (n - 1) as u32;
        buf[last] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != NONE && v >= 1 && !ls[v as usize - 1] {
                let c = s[v as usize - 1].idx();
                sa[buf[c] as usize] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != NONE && v >= 1 && ls[v as usize - 1] {
                let c = s[v as usize - 1].idx() + 1;
                buf[c] -= 1;
                sa[buf[c] as usize] = v - 1;
            }
        }
    };

    let mut lms_map = vec![NONE; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();
    meter.alloc(4 * m);

    induce(&lms, &mut sa);

    if m > 0 {
        meter.alloc(2 * 4 * m);
        let mut sorted_lms: Vec<u32> = sa
            .iter()
            .copied()
            .filter(|&v| lms_map[v as usize] != NONE)
            .collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0usize;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        for i in 1..m {
            let mut l = sorted_lms[i - 1] as usize;
            let mut r = sorted_lms[i] as usize;
            let next = |p: usize| {
                let j = lms_map[p] as usize + 1;
                if j < m {
                    lms[j] as usize
                } else {
                    n
                }
            };
            let end_l = next(l);
            let end_r = next(r);
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper as u32;
        }

        let rec_sa = sa_is(&rec_s, rec_upper, meter, depth + 1);
        for (slot, &r) in sorted_lms.iter_mut().zip(&rec_sa) {
            *slot = lms[r as usize];
        }
        meter.free(4 * rec_sa.len());
        drop(rec_sa);
        induce(&sorted_lms, &mut sa);
        meter.free(2 * 4 * m);
    }

    meter.free(4 * m);
    // The returned array stays live; it is released by the caller.
    meter.free(scratch - 4 * n);
    sa
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(s: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    #[test]
    fn banana() {
        assert_eq!(suffix_array(b"banana"), vec![5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn degenerate() {
        assert_eq!(suffix_array(b""), Vec::<u32>::new());
        assert_eq!(suffix_array(b"x"), vec![0]);
        assert_eq!(suffix_array(b"aaaa"), vec![3, 2, 1, 0]);
        assert_eq!(suffix_array(b"abab"), vec![2, 0, 3, 1]);
    }

    #[test]
    fn meter_balances_tiny() {
        for s in [&b""[..], b"a", b"ba"] {
            let mut meter = MemoryMeter::new();
            let sa = suffix_array_metered(s, &mut meter);
            assert_eq!(meter.current(), 4 * sa.len());
        }
    }

    #[test]
    fn meter_balances() {
        let s: Vec<u8> = (0..5000u32).map(|i| (i * i % 7) as u8).collect();
        let mut meter = MemoryMeter::new();
        let sa = suffix_array_metered(&s, &mut meter);
        assert_eq!(meter.current(), 4 * sa.len());
        assert!(meter.peak() >= 9 * s.len());
    }

    proptest! {
        #[test]
        fn matches_naive(s in proptest::collection::vec(0u8..4, 0..300)) {
            prop_assert_eq!(suffix_array(&s), naive(&s));
        }

        #[test]
        fn matches_naive_bytes(s in proptest::collection::vec(any::<u8>(), 0..300)) {
            prop_assert_eq!(suffix_array(&s), naive(&s));
        }
    }
}
