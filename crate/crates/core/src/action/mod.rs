//! Commutative group action [g^a] * E with two interchangeable backends.
//!
//! The toy backend realises the action as addition modulo an odd N with the
//! quadratic twist as negation. The csidh backend walks supersingular
//! Montgomery curves over a desk-scale prime p = 4 * prod(ell_i) - 1; the
//! orbit of the distinguished degree-3 step is enumerated once at
//! construction, after which the action is a table rotation while
//! [`Backend::velu_step`] stays available for direct verification.

mod bqf;
pub mod fp;
mod montgomery;

pub use bqf::class_number_bqf;
pub use montgomery::{ladder, XPoint};

use alloc::string::String;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::modn;
use crate::vectors::ExponentVec;

pub const DEFAULT_CSIDH_PRIME: u64 = 419;
pub const DEFAULT_CSIDH_ELLS: [u64; 3] = [3, 5, 7];
pub const DEFAULT_TOY_MODULUS: u64 = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Toy,
    Csidh,
}

/// Backend description: the protocol-level security parameter n plus the
/// arithmetic the action runs over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionParams {
    pub kind: BackendKind,
    /// Field prime (csidh only).
    pub p: Option<u64>,
    /// Small odd primes whose ideals generate the walk (csidh only).
    pub ells: Vec<u64>,
    /// Class number of the orbit; the toy modulus plays the same role.
    pub class_number: u64,
    /// Vector length of the protocols.
    pub n: usize,
    /// Convention tag for the distinguished generator.
    pub generator: String,
}

/// An element of the orbit of the base curve: the Montgomery coefficient on
/// the csidh backend, a residue mod N on the toy backend. The base curve is
/// the zero value on both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Curve(pub u64);

impl Curve {
    pub const BASE: Curve = Curve(0);
}

pub struct Backend {
    params: ActionParams,
    /// Orbit table for csidh: position i holds [g^i] * E0.
    orbit: Vec<u64>,
    actions: AtomicU64,
}

impl Backend {
    /// Toy backend over Z_modulus; the modulus must be odd.
    pub fn toy(n: usize, modulus: u64) -> Result<Backend> {
        if modulus % 2 == 0 {
            return Err(Error::EvenModulus(modulus));
        }
        if modulus < 3 {
            return Err(Error::BadFieldPrime {
                p: modulus,
                reason: "toy modulus must be at least 3",
            });
        }
        Ok(Backend {
            params: ActionParams {
                kind: BackendKind::Toy,
                p: None,
                ells: Vec::new(),
                class_number: modulus,
                n,
                generator: String::from("shift-by-one"),
            },
            orbit: Vec::new(),
            actions: AtomicU64::new(0),
        })
    }

    /// Desk-scale csidh backend with the default prime 419.
    pub fn csidh(n: usize) -> Result<Backend> {
        Backend::csidh_with(n, DEFAULT_CSIDH_PRIME, &DEFAULT_CSIDH_ELLS, 4096)
    }

    /// csidh backend with explicit parameters. Checks p = 4 * prod(ells) - 1
    /// and primality, enumerates the orbit of the degree-3 step and
    /// cross-checks its length against the form class number of -4p.
    pub fn csidh_with(n: usize, p: u64, ells: &[u64], orbit_bound: usize) -> Result<Backend> {
        if !fp::is_prime(p) {
            return Err(Error::BadFieldPrime {
                p,
                reason: "not prime",
            });
        }
        let mut prod = 4u64;
        for &l in ells {
            if l % 2 == 0 || !fp::is_prime(l) {
                return Err(Error::UnsupportedEll(l));
            }
            prod = prod.checked_mul(l).ok_or(Error::BadFieldPrime {
                p,
                reason: "ell product overflow",
            })?;
        }
        if prod != p + 1 {
            return Err(Error::BadFieldPrime {
                p,
                reason: "p + 1 != 4 * prod(ells)",
            });
        }
        let walk_ell = *ells.first().ok_or(Error::UnsupportedEll(0))?;
        let mut orbit = alloc::vec![0u64];
        loop {
            let next = montgomery::velu_step(p, *orbit.last().unwrap(), walk_ell, 1)?;
            if next == 0 {
                break;
            }
            orbit.push(next);
            if orbit.len() > orbit_bound {
                return Err(Error::OrbitBoundExceeded { bound: orbit_bound });
            }
        }
        let class_number = orbit.len() as u64;
        if class_number % 2 == 0 {
            return Err(Error::EvenModulus(class_number));
        }
        let bqf = class_number_bqf(-4 * p as i64)?;
        if bqf != class_number {
            return Err(Error::ClassNumberMismatch {
                orbit: class_number,
                bqf,
            });
        }
        Ok(Backend {
            params: ActionParams {
                kind: BackendKind::Csidh,
                p: Some(p),
                ells: ells.to_vec(),
                class_number,
                n,
                generator: String::from("ell3-frobenius-minus-one"),
            },
            orbit,
            actions: AtomicU64::new(0),
        })
    }

    pub fn params(&self) -> &ActionParams {
        &self.params
    }

    pub fn kind(&self) -> BackendKind {
        self.params.kind
    }

    /// Class number N; exponent arithmetic runs mod this value.
    pub fn modulus(&self) -> u64 {
        self.params.class_number
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Number of group-action evaluations since construction.
    pub fn action_count(&self) -> u64 {
        self.actions.load(Ordering::Relaxed)
    }

    fn position(&self, curve: Curve) -> Result<u64> {
        match self.params.kind {
            BackendKind::Toy => {
                if curve.0 < self.params.class_number {
                    Ok(curve.0)
                } else {
                    Err(Error::CurveNotInOrbit(curve.0))
                }
            }
            BackendKind::Csidh => self
                .orbit
                .iter()
                .position(|&a| a == curve.0)
                .map(|i| i as u64)
                .ok_or(Error::CurveNotInOrbit(curve.0)),
        }
    }

    /// [g^e] * E. Free and transitive on the orbit.
    pub fn act(&self, e: u64, curve: Curve) -> Result<Curve> {
        self.actions.fetch_add(1, Ordering::Relaxed);
        let n = self.params.class_number;
        let pos = self.position(curve)?;
        let target = modn::add(n, pos, e % n);
        match self.params.kind {
            BackendKind::Toy => Ok(Curve(target)),
            BackendKind::Csidh => Ok(Curve(self.orbit[target as usize])),
        }
    }

    /// Componentwise action on equal-length vectors.
    pub fn act_vec(&self, exps: &ExponentVec, curves: &[Curve]) -> Result<Vec<Curve>> {
        if exps.len() != curves.len() {
            return Err(Error::LengthMismatch {
                expected: exps.len(),
                got: curves.len(),
            });
        }
        exps.entries()
            .iter()
            .zip(curves)
            .map(|(&e, &c)| self.act(e, c))
            .collect()
    }

    /// Action on n copies of the base curve.
    pub fn act_vec_base(&self, exps: &ExponentVec) -> Result<Vec<Curve>> {
        exps.entries()
            .iter()
            .map(|&e| self.act(e, Curve::BASE))
            .collect()
    }

    /// Quadratic twist; an involution fixing the base curve and satisfying
    /// twist([g^a] * E) = [g^-a] * twist(E).
    pub fn twist(&self, curve: Curve) -> Result<Curve> {
        self.position(curve)?;
        match self.params.kind {
            BackendKind::Toy => Ok(Curve(modn::neg(self.params.class_number, curve.0))),
            BackendKind::Csidh => {
                let p = self.params.p.unwrap();
                Ok(Curve(if curve.0 == 0 { 0 } else { p - curve.0 }))
            }
        }
    }

    /// E when s = 1, twist(E) when s = -1.
    pub fn curve_power(&self, curve: Curve, s: i8) -> Result<Curve> {
        match s {
            1 => {
                self.position(curve)?;
                Ok(curve)
            }
            -1 => self.twist(curve),
            _ => Err(Error::InvalidSign(s)),
        }
    }

    /// One ell-isogeny step, computed directly with Velu's formulas rather
    /// than served from the orbit table.
    pub fn velu_step(&self, curve: Curve, ell: u64, direction: i8) -> Result<Curve> {
        let p = self.params.p.ok_or(Error::CsidhOnly("velu_step"))?;
        if !self.params.ells.contains(&ell) {
            return Err(Error::UnsupportedEll(ell));
        }
        self.position(curve)?;
        Ok(Curve(montgomery::velu_step(p, curve.0, ell, direction)?))
    }

    /// The orbit [E0, g*E0, g^2*E0, ...] in generator order.
    pub fn enumerate_orbit(&self) -> Vec<Curve> {
        match self.params.kind {
            BackendKind::Toy => (0..self.params.class_number).map(Curve).collect(),
            BackendKind::Csidh => self.orbit.iter().copied().map(Curve).collect(),
        }
    }

    /// The unique a with [g^a] * E0 = E, by table search.
    pub fn gaip_bruteforce(&self, curve: Curve) -> Result<u64> {
        self.position(curve)
    }

    /// Exponents a with E_i = [g^a] * E_j for every ordered pair of distinct
    /// inputs, the multi-target variant of the inversion problem.
    pub fn mt_gaip_bruteforce(&self, curves: &[Curve]) -> Result<Vec<(usize, usize, u64)>> {
        let n = self.params.class_number;
        let mut out = Vec::new();
        for (i, &ci) in curves.iter().enumerate() {
            for (j, &cj) in curves.iter().enumerate() {
                if i != j {
                    let a = modn::sub(n, self.position(ci)?, self.position(cj)?);
                    out.push((i, j, a));
                }
            }
        }
        Ok(out)
    }

    /// Uniform exponent in [0, N).
    pub fn sample_exponent(&self, rng: &mut impl RngCore) -> u64 {
        modn::sample(rng, self.params.class_number)
    }

    pub fn sample_exponent_vec(&self, rng: &mut impl RngCore, n: usize) -> ExponentVec {
        ExponentVec::sample(rng, self.params.class_number, n)
    }

    /// Serialized width of one curve in bytes.
    pub fn curve_width(&self) -> usize {
        match self.params.kind {
            BackendKind::Toy => crate::codec::element_width(self.params.class_number),
            BackendKind::Csidh => crate::codec::element_width(self.params.p.unwrap()),
        }
    }

    /// Serialized width of one exponent in bytes.
    pub fn exponent_width(&self) -> usize {
        crate::codec::element_width(self.params.class_number)
    }

    /// Fixed-width big-endian concatenation in index order; this byte layout
    /// is what the protocol hashes consume.
    pub fn curves_to_bytes(&self, curves: &[Curve]) -> Vec<u8> {
        let w = self.curve_width();
        let mut out = Vec::with_capacity(w * curves.len());
        for c in curves {
            crate::codec::write_be(&mut out, c.0, w);
        }
        out
    }

    pub fn curves_from_bytes(&self, bytes: &[u8], count: usize) -> Result<Vec<Curve>> {
        let w = self.curve_width();
        if bytes.len() < w * count {
            return Err(Error::TruncatedInput);
        }
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let v = crate::codec::read_be(&bytes[i * w..], w)?;
            let c = Curve(v);
            self.position(c)?;
            out.push(c);
        }
        Ok(out)
    }
}
