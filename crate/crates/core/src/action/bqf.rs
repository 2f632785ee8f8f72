//! Class numbers by enumeration of reduced binary quadratic forms.
//!
//! Serves as the independent oracle for the orbit length: the forms of
//! discriminant -4p are counted without any curve arithmetic.

use crate::error::{Error, Result};

/// Count reduced primitive forms (a, b, c) with b^2 - 4ac = d, d < 0.
pub fn class_number_bqf(d: i64) -> Result<u64> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d));
    }
    let abs_d = (-d) as u64;
    let mut h = 0u64;
    let mut b = abs_d % 2;
    while b * b <= abs_d / 3 {
        // b^2 - d = 4ac by the parity choice of b
        let m = (b * b + abs_d) / 4;
        let mut a = if b == 0 { 1 } else { b };
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                if gcd(gcd(a, b), c) == 1 {
                    // forms with |b| = a, a = c or b = 0 only count once
                    h += if b == 0 || a == b || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(h)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
