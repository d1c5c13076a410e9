use crate::entropy::AlphabetSpec;
use crate::error::{Error, Result};

/// Recency list over `0..sigma`, most recent symbol first.
struct MtfList {
    order: [u8; 256],
    len: usize,
}

impl MtfList {
    fn new(alphabet: AlphabetSpec) -> Self {
        let mut order = [0u8; 256];
        for (i, slot) in order.iter_mut().enumerate() {
            *slot = i as u8;
        }
        MtfList {
            order,
            len: alphabet.sigma(),
        }
    }

    #[inline]
    fn promote(&mut self, rank: usize) -> u8 {
        let sym = self.order[rank];
        self.order.copy_within(0..rank, 1);
        self.order[0] = sym;
        sym
    }
}

pub fn mtf_encode(s: &[u8], alphabet: AlphabetSpec) -> Result<Vec<u8>> {
    alphabet.check(s)?;
    let mut list = MtfList::new(alphabet);
    let ranks = s
        .iter()
        .map(|&sym| {
            let rank = list.order[..list.len]
                .iter()
                .position(|&x| x == sym)
                .expect("symbol checked against alphabet");
            list.promote(rank);
            rank as u8
        })
        .collect();
    Ok(ranks)
}

pub fn mtf_decode(ranks: &[u8], alphabet: AlphabetSpec) -> Result<Vec<u8>> {
    let mut list = MtfList::new(alphabet);
    ranks
        .iter()
        .map(|&rank| {
            if rank as usize >= list.len {
                return Err(Error::corrupt(format!(
                    "move-to-front rank {rank} outside alphabet of size {}",
                    list.len
                )));
            }
            Ok(list.promote(rank as usize))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let ab = AlphabetSpec::new(2).unwrap();
        assert_eq!(mtf_encode(&[0, 0, 0, 0], ab).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(mtf_encode(&[1, 0], ab).unwrap(), vec![1, 1]);
        assert_eq!(
            mtf_encode(b"bananaaa", AlphabetSpec::BYTES).unwrap()[3..],
            [1, 1, 1, 0, 0]
        );
    }

    #[test]
    fn rejects_out_of_range() {
        let ab = AlphabetSpec::new(2).unwrap();
        assert!(matches!(mtf_encode(&[2], ab), Err(Error::Validation(_))));
        assert!(matches!(mtf_decode(&[2], ab), Err(Error::Corrupt { .. })));
    }

    proptest! {
        #[test]
        fn roundtrip(s in proptest::collection::vec(any::<u8>(), 0..400)) {
            let ranks = mtf_encode(&s, AlphabetSpec::BYTES).unwrap();
            prop_assert_eq!(mtf_decode(&ranks, AlphabetSpec::BYTES).unwrap(), s);
        }
    }
}
