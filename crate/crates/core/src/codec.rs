//! Fixed-width big-endian element encodings and 2-bit ternary packing.
//!
//! These byte layouts feed both the wire frames and the protocol hashes, so
//! they are normative: changing them changes every challenge value.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vectors::TernaryVec;

/// ceil(log2(x)) for x >= 2.
pub fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 2);
    64 - (x - 1).leading_zeros()
}

/// Whole bytes needed for one element of [0, modulus).
pub fn element_width(modulus: u64) -> usize {
    (ceil_log2(modulus) as usize + 7) / 8
}

pub fn write_be(out: &mut Vec<u8>, value: u64, width: usize) {
    debug_assert!(width <= 8);
    let be = value.to_be_bytes();
    out.extend_from_slice(&be[8 - width..]);
}

pub fn read_be(bytes: &[u8], width: usize) -> Result<u64> {
    if bytes.len() < width {
        return Err(Error::TruncatedInput);
    }
    let mut v = 0u64;
    for &b in &bytes[..width] {
        v = (v << 8) | b as u64;
    }
    Ok(v)
}

/// Pack ternary entries two bits each, MSB-first: 00 -> 0, 01 -> +1, 10 -> -1.
/// Unused padding bits in the final byte stay 00.
pub fn pack_ternary(entries: &[i8]) -> Vec<u8> {
    let mut out = alloc::vec![0u8; entries.len().div_ceil(4)];
    for (i, &e) in entries.iter().enumerate() {
        let code: u8 = match e {
            0 => 0b00,
            1 => 0b01,
            -1 => 0b10,
            _ => unreachable!("ternary out of range"),
        };
        out[i / 4] |= code << (6 - 2 * (i % 4));
    }
    out
}

/// Inverse of [`pack_ternary`]; rejects code 11 and nonzero padding.
pub fn unpack_ternary(bytes: &[u8], n: usize) -> Result<TernaryVec> {
    let width = n.div_ceil(4);
    if bytes.len() < width {
        return Err(Error::TruncatedInput);
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let code = (bytes[i / 4] >> (6 - 2 * (i % 4))) & 0b11;
        out.push(match code {
            0b00 => 0,
            0b01 => 1,
            0b10 => -1,
            _ => return Err(Error::InvalidTernaryCode),
        });
    }
    // padding must be zero so encodings stay canonical
    if n % 4 != 0 {
        let mask = (1u8 << (8 - 2 * (n % 4))) - 1;
        if bytes[width - 1] & mask != 0 {
            return Err(Error::InvalidTernaryCode);
        }
    }
    TernaryVec::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(ceil_log2(101), 7);
        assert_eq!(ceil_log2(419), 9);
        assert_eq!(ceil_log2(251), 8);
        assert_eq!(element_width(101), 1);
        assert_eq!(element_width(419), 2);
    }

    #[test]
    fn be_round_trip() {
        let mut buf = Vec::new();
        write_be(&mut buf, 419, 2);
        assert_eq!(buf, [0x01, 0xa3]);
        assert_eq!(read_be(&buf, 2).unwrap(), 419);
        assert!(read_be(&buf[..1], 2).is_err());
    }

    #[test]
    fn ternary_packing_layout() {
        // entries (0, 1, -1, 1) -> 00 01 10 01
        let packed = pack_ternary(&[0, 1, -1, 1]);
        assert_eq!(packed, [0b0001_1001]);
        let got = unpack_ternary(&packed, 4).unwrap();
        assert_eq!(got.entries(), &[0, 1, -1, 1]);
    }

    #[test]
    fn ternary_rejects_code_11_and_padding() {
        assert!(matches!(
            unpack_ternary(&[0b1100_0000], 4),
            Err(Error::InvalidTernaryCode)
        ));
        // three entries, padding bits set
        assert!(matches!(
            unpack_ternary(&[0b0000_0001], 3),
            Err(Error::InvalidTernaryCode)
        ));
    }
}
