//! (Super-)exceptional sets modulo N.
//!
//! An exceptional set {c_1 = 1, c_2, ..., c_n} has all pairwise differences
//! invertible mod N; the super variant additionally requires every sum
//! c_i + c_j, including i = j, to be invertible.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::modn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSet {
    values: Vec<u64>,
    is_super: bool,
}

impl ExceptionalSet {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_super(&self) -> bool {
        self.is_super
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Build a (super-)exceptional set of size n modulo `modulus`.
///
/// The canonical choice c_i = i is used whenever it validates (always the
/// case for prime N > 2n); otherwise distinct values are rejection-sampled.
pub fn gen_exceptional_set(
    n: usize,
    modulus: u64,
    super_set: bool,
    rng: &mut impl RngCore,
) -> Result<ExceptionalSet> {
    if modulus % 2 == 0 {
        return Err(Error::EvenModulus(modulus));
    }
    if n == 0 || n as u64 >= modulus {
        return Err(Error::SetUnsatisfiable { n, modulus });
    }
    let canonical: Vec<u64> = (1..=n as u64).collect();
    if check_exceptional_set(&canonical, modulus, super_set) {
        return Ok(ExceptionalSet {
            values: canonical,
            is_super: super_set,
        });
    }
    let mut values = alloc::vec![0u64; n];
    values[0] = 1;
    'attempt: for _ in 0..4096 {
        for v in values.iter_mut().skip(1) {
            *v = 1 + modn::sample(rng, modulus - 1);
        }
        for i in 0..n {
            for j in 0..i {
                if values[i] == values[j] {
                    continue 'attempt;
                }
            }
        }
        if check_exceptional_set(&values, modulus, super_set) {
            return Ok(ExceptionalSet {
                values,
                is_super: super_set,
            });
        }
    }
    Err(Error::SetUnsatisfiable { n, modulus })
}

/// Validate the defining invariants: c_1 = 1, differences of distinct
/// elements invertible, and for super sets all sums (including i = j).
pub fn check_exceptional_set(values: &[u64], modulus: u64, super_set: bool) -> bool {
    if values.is_empty() || values[0] % modulus != 1 {
        return false;
    }
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i != j {
                let d = modn::sub(modulus, values[i] % modulus, values[j] % modulus);
                if modn::inv(modulus, d).is_none() {
                    return false;
                }
            }
            if super_set && j <= i {
                let s = modn::add(modulus, values[i] % modulus, values[j] % modulus);
                if modn::inv(modulus, s).is_none() {
                    return false;
                }
            }
        }
    }
    true
}
