//! Variable-time arithmetic modulo an odd integer N.
//!
//! Exponents are kept in the canonical range [0, N) everywhere; signed
//! representations never leave serialization boundaries.

use rand_core::RngCore;

pub fn add(n: u64, a: u64, b: u64) -> u64 {
    debug_assert!(a < n && b < n);
    let s = a as u128 + b as u128;
    (s % n as u128) as u64
}

pub fn sub(n: u64, a: u64, b: u64) -> u64 {
    debug_assert!(a < n && b < n);
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

pub fn neg(n: u64, a: u64) -> u64 {
    debug_assert!(a < n);
    if a == 0 {
        0
    } else {
        n - a
    }
}

pub fn mul(n: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Multiply by a sign in {-1, 1}.
pub fn mul_sign(n: u64, a: u64, s: i8) -> u64 {
    debug_assert!(s == 1 || s == -1);
    if s == 1 {
        a % n
    } else {
        neg(n, a % n)
    }
}

/// Multiply by a ternary coefficient in {-1, 0, 1}.
pub fn mul_ternary(n: u64, a: u64, t: i8) -> u64 {
    match t {
        0 => 0,
        1 => a % n,
        -1 => neg(n, a % n),
        _ => unreachable!("ternary out of range"),
    }
}

/// Inverse via extended gcd. Returns None when gcd(a, n) != 1.
pub fn inv(n: u64, a: u64) -> Option<u64> {
    let a = (a % n) as i128;
    let n_i = n as i128;
    let (mut r0, mut r1) = (n_i, a);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n_i) as u64)
}

/// Uniform sample from [0, n) by rejection from the raw RNG stream.
pub fn sample(rng: &mut impl RngCore, n: u64) -> u64 {
    debug_assert!(n > 0);
    // Largest multiple of n that fits in u64; values at or above it are
    // rejected so every residue keeps equal mass.
    let zone = u64::MAX - (u64::MAX % n + 1) % n;
    loop {
        let r = rng.next_u64();
        if r <= zone {
            return r % n;
        }
    }
}
