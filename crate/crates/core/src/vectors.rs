//! Length-n vectors over Z_N, {-1,1} and {-1,0,1}.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::modn;

/// Vector over Z_N with entries in canonical range [0, N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVec(Vec<u64>);

/// Vector with entries in {-1, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVec(Vec<i8>);

/// Vector with entries in {-1, 0, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryVec(Vec<i8>);

impl ExponentVec {
    pub fn new(entries: Vec<u64>, modulus: u64) -> Result<Self> {
        if let Some(&v) = entries.iter().find(|&&v| v >= modulus) {
            return Err(Error::OutOfRange { value: v, modulus });
        }
        Ok(ExponentVec(entries))
    }

    pub fn sample(rng: &mut impl RngCore, modulus: u64, n: usize) -> Self {
        ExponentVec((0..n).map(|_| modn::sample(rng, modulus)).collect())
    }

    pub fn zero(n: usize) -> Self {
        ExponentVec(alloc::vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn add(&self, other: &Self, modulus: u64) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(ExponentVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| modn::add(modulus, a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self, modulus: u64) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(ExponentVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| modn::sub(modulus, a, b))
                .collect(),
        ))
    }

    /// Componentwise product with a sign vector.
    pub fn mul_signs(&self, signs: &SignVec, modulus: u64) -> Result<Self> {
        check_len(self.len(), signs.len())?;
        Ok(ExponentVec(
            self.0
                .iter()
                .zip(signs.entries())
                .map(|(&a, &s)| modn::mul_sign(modulus, a, s))
                .collect(),
        ))
    }

    /// Componentwise product with a ternary vector.
    pub fn mul_ternary(&self, t: &TernaryVec, modulus: u64) -> Result<Self> {
        check_len(self.len(), t.len())?;
        Ok(ExponentVec(
            self.0
                .iter()
                .zip(t.entries())
                .map(|(&a, &c)| modn::mul_ternary(modulus, a, c))
                .collect(),
        ))
    }
}

impl SignVec {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidSign(
                *entries.iter().find(|&&e| e != 1 && e != -1).unwrap(),
            ));
        }
        Ok(SignVec(entries))
    }

    pub fn sample(rng: &mut impl RngCore, n: usize) -> Self {
        SignVec(
            (0..n)
                .map(|_| if rng.next_u32() & 1 == 0 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn product(&self, other: &SignVec) -> Result<SignVec> {
        check_len(self.len(), other.len())?;
        Ok(SignVec(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).collect(),
        ))
    }

    pub fn to_ternary(&self) -> TernaryVec {
        TernaryVec(self.0.clone())
    }
}

impl TernaryVec {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| !(-1..=1).contains(&e)) {
            return Err(Error::InvalidTernaryCode);
        }
        Ok(TernaryVec(entries))
    }

    pub fn sample(rng: &mut impl RngCore, n: usize) -> Self {
        // rejection over 2-bit chunks keeps the three values equal-mass
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let w = rng.next_u32();
            for shift in (0..32).step_by(2) {
                if out.len() == n {
                    break;
                }
                match (w >> shift) & 0b11 {
                    0b00 => out.push(0),
                    0b01 => out.push(1),
                    0b10 => out.push(-1),
                    _ => {}
                }
            }
        }
        TernaryVec(out)
    }

    /// Uniform over {0, 1}^n, the restricted challenge alphabet.
    pub fn sample_binary(rng: &mut impl RngCore, n: usize) -> Self {
        TernaryVec(
            (0..n)
                .map(|_| if rng.next_u32() & 1 == 0 { 0 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn product(&self, other: &TernaryVec) -> Result<TernaryVec> {
        check_len(self.len(), other.len())?;
        Ok(TernaryVec(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).collect(),
        ))
    }

    pub fn product_signs(&self, signs: &SignVec) -> Result<TernaryVec> {
        check_len(self.len(), signs.len())?;
        Ok(TernaryVec(
            self.0
                .iter()
                .zip(signs.entries())
                .map(|(&a, &b)| a * b)
                .collect(),
        ))
    }

    /// True when no entry is zero.
    pub fn is_sign_only(&self) -> bool {
        self.0.iter().all(|&e| e != 0)
    }

    /// Reinterpret as a sign vector; fails on zero entries.
    pub fn to_signs(&self) -> Result<SignVec> {
        SignVec::new(self.0.clone())
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
