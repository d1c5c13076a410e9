//! Container layout.
//!
//! ```text
//! "OPC1"            4 bytes magic
//! 0x01              version
//! flags             bit 0: input length known
//! sigma             u16 LE
//! c, eps            f64 LE each
//! n                 u64 LE, only when bit 0 of flags is set
//! records...        raw_len u32, primary_index u32, body_len u32, body
//! terminator        a record with raw_len = 0 (12 zero bytes)
//! ```

use std::io::{Read, Write};

use crate::codec::{BlockPayload, RECORD_HEADER_BYTES};
use crate::entropy::AlphabetSpec;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"OPC1";
pub const VERSION: u8 = 1;
pub const FLAG_KNOWN_N: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Header {
    pub sigma: u16,
    pub c: f64,
    pub eps: f64,
    pub n: Option<u64>,
}

impl Header {
    pub fn alphabet(&self) -> AlphabetSpec {
        AlphabetSpec::new(self.sigma as usize).expect("validated on construction")
    }

    pub fn encoded_len(&self) -> usize {
        4 + 1 + 1 + 2 + 8 + 8 + if self.n.is_some() { 8 } else { 0 }
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&[VERSION])?;
        w.write_all(&[if self.n.is_some() { FLAG_KNOWN_N } else { 0 }])?;
        w.write_all(&self.sigma.to_le_bytes())?;
        w.write_all(&self.c.to_le_bytes())?;
        w.write_all(&self.eps.to_le_bytes())?;
        if let Some(n) = self.n {
            w.write_all(&n.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Header> {
        let truncated = |_| Error::corrupt("truncated header");
        let mut fixed = [0u8; 24];
        r.read_exact(&mut fixed[..4]).map_err(truncated)?;
        if fixed[..4] != MAGIC {
            return Err(Error::corrupt(format!(
                "magic mismatch: expected {:?}, found {:02x?}",
                String::from_utf8_lossy(&MAGIC),
                &fixed[..4]
            )));
        }
        r.read_exact(&mut fixed[4..]).map_err(truncated)?;
        if fixed[4] != VERSION {
            return Err(Error::corrupt(format!("unsupported version {}", fixed[4])));
        }
        let flags = fixed[5];
        if flags & !FLAG_KNOWN_N != 0 {
            return Err(Error::corrupt(format!("unknown flag bits {flags:#04x}")));
        }
        let sigma = u16::from_le_bytes([fixed[6], fixed[7]]);
        let c = f64::from_le_bytes(fixed[8..16].try_into().unwrap());
        let eps = f64::from_le_bytes(fixed[16..24].try_into().unwrap());
        if !(2..=256).contains(&sigma) {
            return Err(Error::corrupt(format!(
                "alphabet size {sigma} out of range"
            )));
        }
        if super::params::validate_exponents(c, eps).is_err() {
            return Err(Error::corrupt(format!(
                "invalid parameters c={c}, eps={eps}"
            )));
        }
        let n = if flags & FLAG_KNOWN_N != 0 {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(truncated)?;
            Some(u64::from_le_bytes(b))
        } else {
            None
        };
        Ok(Header { sigma, c, eps, n })
    }
}

/// A whole encoded stream held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedStream {
    pub header: Header,
    pub records: Vec<BlockPayload>,
}

impl EncodedStream {
    /// Total symbols described by the records.
    pub fn raw_len(&self) -> u64 {
        self.records.iter().map(|r| r.raw_len as u64).sum()
    }

    /// Serialized size in bytes, including header and terminator.
    pub fn encoded_len(&self) -> usize {
        self.header.encoded_len()
            + self
                .records
                .iter()
                .map(BlockPayload::encoded_len)
                .sum::<usize>()
            + RECORD_HEADER_BYTES
    }

    pub fn encoded_bits(&self) -> u64 {
        8 * self.encoded_len() as u64
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        self.header.write_to(&mut out).expect("writing to a Vec");
        for r in &self.records {
            r.write_to(&mut out).expect("writing to a Vec");
        }
        out.extend_from_slice(&[0u8; RECORD_HEADER_BYTES]);
        out
    }

    /// Parses a complete stream. Record payloads are not decompressed.
    pub fn from_bytes(mut bytes: &[u8]) -> Result<EncodedStream> {
        let header = Header::read_from(&mut bytes)?;
        let mut records = Vec::new();
        loop {
            let index = records.len();
            let r = BlockPayload::read_from(&mut bytes).map_err(|e| e.in_record(index))?;
            if r.is_terminator() {
                break;
            }
            records.push(r);
        }
        if !bytes.is_empty() {
            return Err(Error::corrupt(format!(
                "{} bytes after the terminator record",
                bytes.len()
            )));
        }
        Ok(EncodedStream { header, records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let h = Header {
            sigma: 256,
            c: 0.5,
            eps: 0.25,
            n: Some(1000),
        };
        let mut bytes = Vec::new();
        h.write_to(&mut bytes).unwrap();
        assert_eq!(bytes.len(), h.encoded_len());
        assert_eq!(&bytes[..6], b"OPC1\x01\x01");
        assert_eq!(&bytes[6..8], &[0x00, 0x01]);
        assert_eq!(&bytes[8..16], &0.5f64.to_le_bytes());
        assert_eq!(&bytes[16..24], &0.25f64.to_le_bytes());
        assert_eq!(&bytes[24..32], &1000u64.to_le_bytes());
        assert_eq!(Header::read_from(&mut bytes.as_slice()).unwrap(), h);

        let h = Header { n: None, ..h };
        let mut bytes = Vec::new();
        h.write_to(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 24);
        assert_eq!(bytes[5], 0);
    }

    #[test]
    fn bad_magic_is_named() {
        let err =
            Header::read_from(&mut &b"PK\x03\x04rest of it......................"[..]).unwrap_err();
        assert!(err.to_string().contains("magic"), "{err}");
    }

    #[test]
    fn header_field_checks() {
        let good = Header {
            sigma: 4,
            c: 0.5,
            eps: 0.1,
            n: None,
        };
        let mut bytes = Vec::new();
        good.write_to(&mut bytes).unwrap();
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(Header::read_from(&mut bad.as_slice()).is_err());
        let mut bad = bytes.clone();
        bad[5] = 0x80;
        assert!(Header::read_from(&mut bad.as_slice()).is_err());
        let mut bad = bytes.clone();
        bad[6] = 1;
        assert!(Header::read_from(&mut bad.as_slice()).is_err());
        let mut bad = bytes.clone();
        bad[16..24].copy_from_slice(&0.0f64.to_le_bytes());
        assert!(Header::read_from(&mut bad.as_slice()).is_err());
        assert!(Header::read_from(&mut &bytes[..20]).is_err());
    }
}
