//! Identity-based blind signatures over a commutative group action, desk
//! scale.
//!
//! The stack is layered as: a group-action backend ([`action`], toy shift or
//! csidh isogeny walk), hashes into sign and ternary alphabets ([`hashes`]),
//! (super-)exceptional sets ([`exceptional`]), the two-key OR sigma protocol
//! ([`sigma`]), identity-based identification ([`ibid`]) and the four-move
//! identity-based blind signature ([`ibbs`]), plus size and operation-count
//! accounting ([`report`]).
//!
//! Everything is `no_std` + `alloc`; randomness is caller-supplied through
//! `rand_core::RngCore`. None of the arithmetic is constant time: this is a
//! research artifact for protocol verification, not a hardened library.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod action;
pub mod codec;
pub mod error;
pub mod exceptional;
pub mod hashes;
pub mod ibbs;
pub mod ibid;
pub mod modn;
pub mod report;
pub mod sigma;
pub mod vectors;

pub use action::{ActionParams, Backend, BackendKind, Curve};
pub use error::{Error, Result};
pub use exceptional::{check_exceptional_set, gen_exceptional_set, ExceptionalSet};
pub use hashes::{hash_pm1, hash_ternary};
pub use vectors::{ExponentVec, SignVec, TernaryVec};
