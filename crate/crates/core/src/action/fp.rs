//! Variable-time prime field helpers for desk-scale moduli.

pub fn add(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn sub(p: u64, a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(p: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(p, acc, base);
        }
        base = mul(p, base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv(p: u64, a: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow(p, a, p - 2)
}

/// Legendre symbol as -1, 0, 1.
pub fn legendre(p: u64, a: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow(p, a, (p - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

/// Square root for p = 3 mod 4; None when a is a non-residue.
pub fn sqrt(p: u64, a: u64) -> Option<u64> {
    debug_assert!(p % 4 == 3);
    let a = a % p;
    let r = pow(p, a, (p + 1) / 4);
    if mul(p, r, r) == a {
        Some(r)
    } else {
        None
    }
}

/// Trial-division primality, ample for desk-scale parameters.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
