//! Two-key OR sigma protocol: knowledge of one action preimage out of two.
//!
//! The prover holds (delta, x_delta) for the statement (X_0, X_1) with
//! X_b = [g^{x_b}] * E0 componentwise. The real side commits with fresh
//! randomness, the other side is simulated from a presampled sign challenge.
//! Challenges live in {-1,0,1}^n; a zero entry proves nothing about the
//! witness at that index and the verifier recomputes it against the base
//! curve alone.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::action::{Backend, Curve};
use crate::error::{Error, Result};
use crate::modn;
use crate::vectors::{ExponentVec, SignVec, TernaryVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrStatement {
    /// (X_0, X_1), n curves per side.
    pub x: [Vec<Curve>; 2],
}

#[derive(Clone, Debug)]
pub struct OrKeypair {
    pub delta: u8,
    pub x_delta: ExponentVec,
    pub statement: OrStatement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrCommitment {
    pub y: [Vec<Curve>; 2],
}

/// Single-shot prover state; responding consumes it, so a commitment can
/// never answer two challenges (that pair is exactly what the extractor
/// exploits).
#[derive(Debug)]
pub struct OrProverState {
    y_delta: ExponentVec,
    c_other: SignVec,
    r_other: ExponentVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrResponse {
    pub r: [ExponentVec; 2],
    pub c: [TernaryVec; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrTranscript {
    pub commitment: OrCommitment,
    pub challenge: TernaryVec,
    pub response: OrResponse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractedWitness {
    pub side: u8,
    pub index: usize,
    pub exponent: u64,
}

pub fn or_keygen(backend: &Backend, rng: &mut impl RngCore) -> Result<OrKeypair> {
    let n = backend.n();
    let delta = (rng.next_u32() & 1) as u8;
    let x_delta = backend.sample_exponent_vec(rng, n);
    // the other side is honestly generated and its witness dropped
    let x_other = backend.sample_exponent_vec(rng, n);
    or_keypair_from_witness(backend, delta, x_delta, x_other)
}

/// Keypair from explicit witnesses; the non-delta witness is discarded
/// after building the statement.
pub fn or_keypair_from_witness(
    backend: &Backend,
    delta: u8,
    x_delta: ExponentVec,
    x_other: ExponentVec,
) -> Result<OrKeypair> {
    let x_d = backend.act_vec_base(&x_delta)?;
    let x_o = backend.act_vec_base(&x_other)?;
    let mut x = [Vec::new(), Vec::new()];
    x[delta as usize] = x_d;
    x[1 - delta as usize] = x_o;
    Ok(OrKeypair {
        delta,
        x_delta,
        statement: OrStatement { x },
    })
}

pub fn or_commit(
    backend: &Backend,
    key: &OrKeypair,
    rng: &mut impl RngCore,
) -> Result<(OrCommitment, OrProverState)> {
    let n = backend.n();
    let y_delta = backend.sample_exponent_vec(rng, n);
    let c_other = SignVec::sample(rng, n);
    let r_other = backend.sample_exponent_vec(rng, n);
    or_commit_derand(backend, key, y_delta, c_other, r_other)
}

/// Commitment from explicit randomness. Reusing randomness across
/// commitments leaks the witness; this exists for derandomised tests and
/// vector generation.
pub fn or_commit_derand(
    backend: &Backend,
    key: &OrKeypair,
    y_delta: ExponentVec,
    c_other: SignVec,
    r_other: ExponentVec,
) -> Result<(OrCommitment, OrProverState)> {
    let delta = key.delta as usize;
    let y_d = backend.act_vec_base(&y_delta)?;
    let y_o = simulate_side(backend, &key.statement.x[1 - delta], &r_other, &c_other)?;
    let mut y = [Vec::new(), Vec::new()];
    y[delta] = y_d;
    y[1 - delta] = y_o;
    Ok((
        OrCommitment { y },
        OrProverState {
            y_delta,
            c_other,
            r_other,
        },
    ))
}

fn simulate_side(
    backend: &Backend,
    x_side: &[Curve],
    r: &ExponentVec,
    c: &SignVec,
) -> Result<Vec<Curve>> {
    if x_side.len() != r.len() || x_side.len() != c.len() {
        return Err(Error::LengthMismatch {
            expected: x_side.len(),
            got: r.len(),
        });
    }
    x_side
        .iter()
        .zip(r.entries().iter().zip(c.entries()))
        .map(|(&xc, (&ri, &ci))| backend.act(ri, backend.curve_power(xc, ci)?))
        .collect()
}

pub fn or_respond(
    backend: &Backend,
    state: OrProverState,
    key: &OrKeypair,
    challenge: &TernaryVec,
) -> Result<OrResponse> {
    let n = backend.n();
    if challenge.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: challenge.len(),
        });
    }
    let nmod = backend.modulus();
    let delta = key.delta as usize;
    let c_delta = challenge.product_signs(&state.c_other)?;
    let r_delta = state
        .y_delta
        .sub(&key.x_delta.mul_ternary(&c_delta, nmod)?, nmod)?;
    let mut r = [ExponentVec::zero(0), ExponentVec::zero(0)];
    let mut c = [TernaryVec::new(Vec::new())?, TernaryVec::new(Vec::new())?];
    r[delta] = r_delta;
    r[1 - delta] = state.r_other;
    c[delta] = c_delta;
    c[1 - delta] = state.c_other.to_ternary();
    Ok(OrResponse { r, c })
}

/// Branch rule shared by verifier and simulator: base E0 when the challenge
/// entry is zero, otherwise the (possibly twisted) statement curve.
fn recompute_side(
    backend: &Backend,
    x_side: &[Curve],
    r: &ExponentVec,
    c: &TernaryVec,
) -> Result<Vec<Curve>> {
    if x_side.len() != r.len() || x_side.len() != c.len() {
        return Err(Error::LengthMismatch {
            expected: x_side.len(),
            got: r.len(),
        });
    }
    x_side
        .iter()
        .zip(r.entries().iter().zip(c.entries()))
        .map(|(&xc, (&ri, &ci))| {
            let base = if ci == 0 {
                Curve::BASE
            } else {
                backend.curve_power(xc, ci)?
            };
            backend.act(ri, base)
        })
        .collect()
}

pub fn or_verify(
    backend: &Backend,
    statement: &OrStatement,
    transcript: &OrTranscript,
) -> Result<bool> {
    let n = backend.n();
    for b in 0..2 {
        if statement.x[b].len() != n
            || transcript.commitment.y[b].len() != n
            || transcript.response.r[b].len() != n
            || transcript.response.c[b].len() != n
        {
            return Err(Error::LengthMismatch {
                expected: n,
                got: statement.x[b].len(),
            });
        }
    }
    if transcript.challenge.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: transcript.challenge.len(),
        });
    }
    let product = transcript.response.c[0].product(&transcript.response.c[1])?;
    if product != transcript.challenge {
        return Ok(false);
    }
    for b in 0..2 {
        let recomputed = recompute_side(
            backend,
            &statement.x[b],
            &transcript.response.r[b],
            &transcript.response.c[b],
        )?;
        if recomputed != transcript.commitment.y[b] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Simulator for a known challenge. Zero challenge entries are placed on a
/// uniformly chosen side; see [`or_simulate_with_zero_side`] for why the
/// placement matters.
pub fn or_simulate(
    backend: &Backend,
    statement: &OrStatement,
    challenge: &TernaryVec,
    rng: &mut impl RngCore,
) -> Result<OrTranscript> {
    let side = (rng.next_u32() & 1) as u8;
    or_simulate_with_zero_side(backend, statement, challenge, side, rng)
}

/// Simulator with the zero entries of the challenge split onto `zero_side`.
///
/// An honest prover always answers a zero challenge entry on its witness
/// side with c_{delta,i} = 0 and a sign on the other side, so the placement
/// of zeros is observable. Matching a fixed prover's transcript
/// distribution exactly therefore requires pinning the side; for challenges
/// without zero entries the two variants coincide.
pub fn or_simulate_with_zero_side(
    backend: &Backend,
    statement: &OrStatement,
    challenge: &TernaryVec,
    zero_side: u8,
    rng: &mut impl RngCore,
) -> Result<OrTranscript> {
    let n = backend.n();
    let u = SignVec::sample(rng, n);
    let r = [
        backend.sample_exponent_vec(rng, n),
        backend.sample_exponent_vec(rng, n),
    ];
    or_simulate_derand(backend, statement, challenge, zero_side, &u, r)
}

/// Fully derandomised simulator core: `u` carries the per-index sign choice
/// and `r` both response vectors. Exists so distribution tests can walk the
/// whole randomness space.
pub fn or_simulate_derand(
    backend: &Backend,
    statement: &OrStatement,
    challenge: &TernaryVec,
    zero_side: u8,
    u: &SignVec,
    r: [ExponentVec; 2],
) -> Result<OrTranscript> {
    let n = backend.n();
    if challenge.len() != n || u.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: challenge.len(),
        });
    }
    let zs = (zero_side & 1) as usize;
    let mut c0 = Vec::with_capacity(n);
    let mut c1 = Vec::with_capacity(n);
    for (&ci, &ui) in challenge.entries().iter().zip(u.entries()) {
        let (on_zs, on_other) = if ci == 0 { (0, ui) } else { (ci * ui, ui) };
        if zs == 0 {
            c0.push(on_zs);
            c1.push(on_other);
        } else {
            c0.push(on_other);
            c1.push(on_zs);
        }
    }
    let c = [TernaryVec::new(c0)?, TernaryVec::new(c1)?];
    let y = [
        recompute_side(backend, &statement.x[0], &r[0], &c[0])?,
        recompute_side(backend, &statement.x[1], &r[1], &c[1])?,
    ];
    Ok(OrTranscript {
        commitment: OrCommitment { y },
        challenge: challenge.clone(),
        response: OrResponse { r, c },
    })
}

/// Witness extraction from two accepting transcripts over the same
/// commitment with different challenges: at the first index where the
/// per-side challenges differ, x = (r' - r) / (c - c') mod N. The divisor
/// lies in {-2,-1,1,2} and N is odd, so it is invertible.
pub fn or_extract(
    backend: &Backend,
    t1: &OrTranscript,
    t2: &OrTranscript,
) -> Result<ExtractedWitness> {
    if t1.commitment != t2.commitment {
        return Err(Error::CommitmentMismatch);
    }
    if t1.challenge == t2.challenge {
        return Err(Error::IdenticalChallenges);
    }
    let nmod = backend.modulus();
    for b in 0..2 {
        for i in 0..t1.response.c[b].len() {
            let c1 = t1.response.c[b].entries()[i];
            let c2 = t2.response.c[b].entries()[i];
            if c1 == c2 {
                continue;
            }
            let num = modn::sub(
                nmod,
                t2.response.r[b].entries()[i],
                t1.response.r[b].entries()[i],
            );
            let den = {
                let d = c1 - c2; // in {-2,-1,1,2}
                if d > 0 {
                    d as u64 % nmod
                } else {
                    modn::neg(nmod, (-d) as u64 % nmod)
                }
            };
            let inv = modn::inv(nmod, den).expect("divisor in {1,2} up to sign, N odd");
            return Ok(ExtractedWitness {
                side: b as u8,
                index: i,
                exponent: modn::mul(nmod, num, inv),
            });
        }
    }
    // accepting transcripts with c != c' must differ someplace per side
    Err(Error::IdenticalChallenges)
}
