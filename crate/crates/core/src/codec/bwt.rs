//! Burrows-Wheeler transform with a virtual end-of-block sentinel.
//!
//! The sentinel sorts before every byte value and is never drawn from the
//! data alphabet, so blocks containing all 256 byte values transform
//! correctly.

use super::sais::suffix_array_metered;
use crate::error::{Error, Result};
use crate::memory::MemoryMeter;

/// The sentinel in a transformed column. Data symbols are `0..=255`.
pub const SENTINEL: u16 = 256;

/// Last column of the sorted rotation matrix of `block` followed by the
/// sentinel, plus the row of the original string (where the sentinel lands).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtOutput {
    pub transformed: Vec<u16>,
    pub primary_index: usize,
}

pub fn bwt_forward(block: &[u8]) -> Result<BwtOutput> {
    if block.is_empty() {
        return Err(Error::validation("cannot transform an empty block"));
    }
    let (column, primary_index) = bwt_column(block, &mut MemoryMeter::new());
    let mut transformed: Vec<u16> = column.iter().map(|&b| b as u16).collect();
    transformed.insert(primary_index, SENTINEL);
    Ok(BwtOutput {
        transformed,
        primary_index,
    })
}

pub fn bwt_inverse(transformed: &[u16], primary_index: usize) -> Result<Vec<u8>> {
    let sentinels = transformed.iter().filter(|&&c| c == SENTINEL).count();
    if sentinels != 1 {
        return Err(Error::corrupt(format!(
            "transformed block has {sentinels} sentinels, expected exactly one"
        )));
    }
    if transformed.get(primary_index) != Some(&SENTINEL) {
        return Err(Error::corrupt(
            "primary index does not point at the sentinel",
        ));
    }
    if let Some(&bad) = transformed.iter().find(|&&c| c > SENTINEL) {
        return Err(Error::corrupt(format!("symbol {bad} is not a byte")));
    }
    let column: Vec<u8> = transformed
        .iter()
        .filter(|&&c| c != SENTINEL)
        .map(|&c| c as u8)
        .collect();
    invert_column(&column, primary_index)
}

/// Transform producing the column with the sentinel removed; the sentinel's
/// row is returned separately.
pub(crate) fn bwt_column(block: &[u8], meter: &mut MemoryMeter) -> (Vec<u8>, usize) {
    let n = block.len();
    let sa = suffix_array_metered(block, meter);
    meter.alloc(n);
    let mut column = Vec::with_capacity(n);
    // Row 0 is the rotation starting at the sentinel; its last symbol is the
    // final byte of the block.
    column.push(block[n - 1]);
    let mut primary_index = 0;
    for (row, &pos) in sa.iter().enumerate() {
        if pos == 0 {
            primary_index = row + 1;
        } else {
            column.push(block[pos as usize - 1]);
        }
    }
    meter.free(4 * n);
    drop(sa);
    (column, primary_index)
}

/// Inverse transform of a sentinel-free column whose sentinel sat at
/// `primary_index` in the full `n + 1` row matrix.
pub(crate) fn invert_column(column: &[u8], primary_index: usize) -> Result<Vec<u8>> {
    let n = column.len();
    if primary_index > n {
        return Err(Error::corrupt(format!(
            "primary index {primary_index} out of range for block of {n} symbols"
        )));
    }

    let mut counts = [0u32; 256];
    for &c in column {
        counts[c as usize] += 1;
    }
    // First-column offset of each symbol; row 0 of the first column is the sentinel.
    let mut start = [0u32; 256];
    let mut acc = 1u32;
    for c in 0..256 {
        start[c] = acc;
        acc += counts[c];
    }

    // lf[row] maps a row to the row of the rotation one position earlier.
    let mut lf = vec![0u32; n + 1];
    let mut seen = [0u32; 256];
    for row in 0..=n {
        if row == primary_index {
            continue;
        }
        let c = column[row - usize::from(row > primary_index)] as usize;
        lf[row] = start[c] + seen[c];
        seen[c] += 1;
    }

    let mut out = vec![0u8; n];
    let mut row = 0usize;
    for i in (0..n).rev() {
        if row == primary_index {
            return Err(Error::corrupt("transform does not form a single cycle"));
        }
        out[i] = column[row - usize::from(row > primary_index)];
        row = lf[row] as usize;
    }
    if row != primary_index {
        return Err(Error::corrupt(
            "inverse transform ended away from the primary row",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn render(t: &BwtOutput) -> String {
        t.transformed
            .iter()
            .map(|&c| if c == SENTINEL { '$' } else { c as u8 as char })
            .collect()
    }

    #[test]
    fn banana() {
        let t = bwt_forward(b"banana").unwrap();
        assert_eq!(render(&t), "annb$aa");
        assert_eq!(t.primary_index, 4);
        assert_eq!(
            bwt_inverse(&t.transformed, t.primary_index).unwrap(),
            b"banana"
        );
    }

    #[test]
    fn single_symbol() {
        let t = bwt_forward(b"a").unwrap();
        assert_eq!(t.transformed.len(), 2);
        assert_eq!(bwt_inverse(&t.transformed, t.primary_index).unwrap(), b"a");
    }

    #[test]
    fn empty_is_rejected() {
        assert!(matches!(bwt_forward(b""), Err(Error::Validation(_))));
    }

    #[test]
    fn sentinel_count_checked() {
        let none: Vec<u16> = b"abc".iter().map(|&b| b as u16).collect();
        assert!(matches!(bwt_inverse(&none, 0), Err(Error::Corrupt { .. })));
        let two = vec![SENTINEL, 97, SENTINEL];
        assert!(matches!(bwt_inverse(&two, 0), Err(Error::Corrupt { .. })));
    }

    #[test]
    fn wrong_primary_index() {
        let t = bwt_forward(b"mississippi").unwrap();
        assert!(bwt_inverse(&t.transformed, (t.primary_index + 1) % 12).is_err());
    }

    #[test]
    fn non_cycle_is_corrupt() {
        // "ab$ab" style columns whose LF permutation splits into several cycles.
        let mut found = false;
        for p in 0..=4usize {
            for bits in 0u8..16 {
                let column: Vec<u8> = (0..4).map(|i| (bits >> i) & 1).collect();
                if let Err(e) = invert_column(&column, p) {
                    assert!(matches!(e, Error::Corrupt { .. }));
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn all_byte_values() {
        let block: Vec<u8> = (0..=255u8).rev().chain(0..=255u8).collect();
        let t = bwt_forward(&block).unwrap();
        assert_eq!(bwt_inverse(&t.transformed, t.primary_index).unwrap(), block);
    }

    proptest! {
        #[test]
        fn roundtrip(block in proptest::collection::vec(any::<u8>(), 1..500)) {
            let t = bwt_forward(&block).unwrap();
            prop_assert_eq!(bwt_inverse(&t.transformed, t.primary_index).unwrap(), block);
        }

        #[test]
        fn permutation(block in proptest::collection::vec(0u8..3, 1..200)) {
            let t = bwt_forward(&block).unwrap();
            let mut a: Vec<u16> = t.transformed.iter().copied().filter(|&c| c != SENTINEL).collect();
            let mut b: Vec<u16> = block.iter().map(|&c| c as u16).collect();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }
}
