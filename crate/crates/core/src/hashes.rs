//! Deterministic hashes into {-1,1}^n and {-1,0,1}^n.
//!
//! Both maps run SHAKE-256 over a two-byte ASCII domain tag followed by the
//! input. The sign hash consumes one output bit per entry (MSB-first, 0 maps
//! to +1); the ternary hash consumes 2-bit chunks with 11 rejected, which
//! keeps all three values exactly equal-mass.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::vectors::{SignVec, TernaryVec};

const TAG_PM1: &[u8] = b"H1";
const TAG_TERNARY: &[u8] = b"H2";

pub fn hash_pm1(data: &[u8], n: usize) -> SignVec {
    let mut hasher = Shake256::default();
    hasher.update(TAG_PM1);
    hasher.update(data);
    let mut reader = hasher.finalize_xof();
    let mut out = alloc::vec::Vec::with_capacity(n);
    let mut byte = [0u8; 1];
    let mut used = 8;
    for _ in 0..n {
        if used == 8 {
            reader.read(&mut byte);
            used = 0;
        }
        let bit = (byte[0] >> (7 - used)) & 1;
        used += 1;
        out.push(if bit == 0 { 1 } else { -1 });
    }
    SignVec::new(out).expect("entries are signs by construction")
}

pub fn hash_ternary(data: &[u8], n: usize) -> TernaryVec {
    let mut hasher = Shake256::default();
    hasher.update(TAG_TERNARY);
    hasher.update(data);
    let mut reader = hasher.finalize_xof();
    let mut out = alloc::vec::Vec::with_capacity(n);
    let mut byte = [0u8; 1];
    let mut used = 4;
    while out.len() < n {
        if used == 4 {
            reader.read(&mut byte);
            used = 0;
        }
        let chunk = (byte[0] >> (6 - 2 * used)) & 0b11;
        used += 1;
        match chunk {
            0b00 => out.push(0),
            0b01 => out.push(1),
            0b10 => out.push(-1),
            _ => {}
        }
    }
    TernaryVec::new(out).expect("entries are ternary by construction")
}
