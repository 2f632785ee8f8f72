//! x-only Montgomery arithmetic and prime-degree isogeny steps.
//!
//! Curves are y^2 = x^3 + A x^2 + x over F_p. Points are projective
//! (X : Z) with the y-coordinate never materialised, so the same ladder
//! serves points of the curve and of its quadratic twist.

use super::fp;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct XPoint {
    pub x: u64,
    pub z: u64,
}

impl XPoint {
    pub fn infinity() -> Self {
        XPoint { x: 1, z: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.z == 0
    }

    pub fn affine(&self, p: u64) -> Option<u64> {
        if self.z == 0 {
            None
        } else {
            Some(fp::mul(p, self.x, fp::inv(p, self.z)))
        }
    }
}

/// a24 = (A + 2) / 4.
fn a24(p: u64, a: u64) -> u64 {
    fp::mul(p, fp::add(p, a, 2), fp::inv(p, 4))
}

fn xdbl(p: u64, a24: u64, pt: &XPoint) -> XPoint {
    let s = fp::add(p, pt.x, pt.z);
    let d = fp::sub(p, pt.x, pt.z);
    let s2 = fp::mul(p, s, s);
    let d2 = fp::mul(p, d, d);
    let c = fp::sub(p, s2, d2); // 4XZ
    XPoint {
        x: fp::mul(p, s2, d2),
        z: fp::mul(p, c, fp::add(p, d2, fp::mul(p, a24, c))),
    }
}

/// Differential addition: P + Q given P - Q.
fn xadd(p: u64, pt_p: &XPoint, pt_q: &XPoint, diff: &XPoint) -> XPoint {
    let a = fp::mul(p, fp::add(p, pt_p.x, pt_p.z), fp::sub(p, pt_q.x, pt_q.z));
    let b = fp::mul(p, fp::sub(p, pt_p.x, pt_p.z), fp::add(p, pt_q.x, pt_q.z));
    let s = fp::add(p, a, b);
    let d = fp::sub(p, a, b);
    XPoint {
        x: fp::mul(p, diff.z, fp::mul(p, s, s)),
        z: fp::mul(p, diff.x, fp::mul(p, d, d)),
    }
}

/// Montgomery ladder: x-only [k]P from an affine x-coordinate.
pub fn ladder(p: u64, a: u64, k: u64, x: u64) -> XPoint {
    if k == 0 {
        return XPoint::infinity();
    }
    let a24 = a24(p, a);
    let base = XPoint { x, z: 1 };
    let mut r0 = base;
    let mut r1 = xdbl(p, a24, &base);
    let bits = 64 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        if (k >> i) & 1 == 1 {
            r0 = xadd(p, &r1, &r0, &base);
            r1 = xdbl(p, a24, &r1);
        } else {
            r1 = xadd(p, &r0, &r1, &base);
            r0 = xdbl(p, a24, &r0);
        }
    }
    r0
}

/// One ell-isogeny step from the curve with coefficient `a`.
///
/// `direction = +1` walks the kernel of the Frobenius-fixed ideal (points of
/// the curve itself); `direction = -1` walks the twist side. The kernel is
/// located by scanning x-coordinates, filtering on the Legendre symbol of
/// x^3 + A x^2 + x and projecting into the ell-torsion by the cofactor; the
/// surviving subgroup is unique, so the scan order cannot change the answer.
///
/// The codomain coefficient uses the half-kernel product form
/// A' = (A + 6 * (sum 1/x_i - sum x_i)) * (prod x_i)^2.
pub fn velu_step(p: u64, a: u64, ell: u64, direction: i8) -> Result<u64> {
    if direction != 1 && direction != -1 {
        return Err(Error::InvalidSign(direction));
    }
    let cofactor = (p + 1) / ell;
    let mut budget = 0u32;
    for x in 1..p {
        let fx = fp::mul(p, x, fp::add(p, fp::mul(p, x, fp::add(p, x, a)), 1));
        if fx == 0 || fp::legendre(p, fx) != direction {
            continue;
        }
        let kernel = ladder(p, a, cofactor, x);
        if kernel.is_infinity() {
            // order divides the cofactor; try the next x
            budget += 1;
            if budget > 4096 {
                break;
            }
            continue;
        }
        let xk = kernel.affine(p).expect("nonzero Z checked");
        return Ok(codomain_from_kernel(p, a, ell, xk));
    }
    Err(Error::PointSearchExhausted { ell })
}

fn codomain_from_kernel(p: u64, a: u64, ell: u64, xk: u64) -> u64 {
    let d = (ell - 1) / 2;
    let base = XPoint { x: xk, z: 1 };
    let mut sigma = 0u64;
    let mut sigma_inv = 0u64;
    let mut pi = 1u64;
    let mut prev = XPoint::infinity();
    let mut cur = base;
    for i in 0..d {
        let xi = cur
            .affine(p)
            .expect("kernel multiples below ell are finite");
        sigma = fp::add(p, sigma, xi);
        sigma_inv = fp::add(p, sigma_inv, fp::inv(p, xi));
        pi = fp::mul(p, pi, xi);
        if i + 1 < d {
            let next = if i == 0 {
                xdbl(p, a24(p, a), &cur)
            } else {
                xadd(p, &cur, &base, &prev)
            };
            prev = cur;
            cur = next;
        }
    }
    let six_term = fp::mul(p, 6, fp::sub(p, sigma_inv, sigma));
    let pi2 = fp::mul(p, pi, pi);
    fp::mul(p, fp::add(p, a, six_term), pi2)
}
