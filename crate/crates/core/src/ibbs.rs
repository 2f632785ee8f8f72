//! Identity-based blind signatures: KGC setup and extraction, the four-move
//! signer/user interaction (S1 -> U1 -> S2 -> U2), verification, blinding
//! reconstruction and retry orchestration.
//!
//! Two modes share the message flow:
//!
//! * `Paper` keeps the scheme equations verbatim: the real commitment runs
//!   over the master-curve base (E_delta)^{u_delta}, the witness is x_delta
//!   and challenges are ternary. Under twist semantics an honest session
//!   only survives U2 at indices where c*_{delta,i} = 1, or where it is 0
//!   with v_{delta,i} = 1, so completeness is probabilistic at (1/2)^n.
//! * `Otter` commits over the plain base curve with witness r_delta and
//!   sign-only challenges, which restores perfect completeness. The zero
//!   verification branch disappears and with it any in-signature binding to
//!   the identity: binding rests on KGC issuance, which callers should
//!   surface in output metadata.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::action::{Backend, Curve};
use crate::error::{Error, Result};
use crate::exceptional::{check_exceptional_set, gen_exceptional_set};
use crate::hashes::{hash_pm1, hash_ternary};
use crate::ibid::extract_witness;
use crate::modn;
use crate::vectors::{ExponentVec, SignVec, TernaryVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IbbsMode {
    Paper,
    Otter,
}

impl IbbsMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IbbsMode::Paper => "paper",
            IbbsMode::Otter => "otter",
        }
    }
}

/// How setup treats exceptional-set generation failures.
///
/// `Validated` propagates them. `Structural` falls back to the canonical
/// values c_i = i without invertibility guarantees and flags the parameters;
/// the interaction itself never divides by set elements, only the
/// paper-mode key-compression argument does, so otter-mode deployments on
/// backends whose class number has small prime factors remain runnable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetPolicy {
    Validated,
    Structural,
}

#[derive(Clone, Debug)]
pub struct IbbsParams {
    pub mode: IbbsMode,
    pub set: Vec<u64>,
    /// Whether `set` validates as super-exceptional for the backend modulus.
    pub set_valid: bool,
    /// E_{b,i} = [g^{s_b * c_i}] * E0.
    pub master_curves: [Vec<Curve>; 2],
    /// Session retry budget; one attempt suffices in otter mode.
    pub retry_limit: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbbsMasterSecret {
    pub s: [u64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbbsPublicKey {
    /// (X_0, X_1) with X_b = [g^{r_b}] * E0.
    pub x: [Vec<Curve>; 2],
}

/// Exactly one witness form leaves the KGC per mode. x_delta and r_delta
/// together reveal the master secret (s = (r_i - x_i) * u_i^-1 * c_i^-1), so
/// the pair is unrepresentable by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IbbsWitness {
    /// x_delta = r_delta - s_delta * u_delta (.) c.
    Paper(ExponentVec),
    /// r_delta, the plain action preimage of X_delta.
    Otter(ExponentVec),
}

#[derive(Clone, Debug)]
pub struct IbbsUserKeys {
    pub delta: u8,
    pub witness: IbbsWitness,
    pub u: [SignVec; 2],
    pub pk: IbbsPublicKey,
}

/// KGC-side extraction record; both witness forms for both sides. Never
/// handed to protocol parties, used by tests and audits.
#[derive(Clone, Debug)]
pub struct KgcExtractRecord {
    pub r: [ExponentVec; 2],
    pub x: [ExponentVec; 2],
}

/// First sender message rho_S1 = (Y_0, Y_1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbbsCommit {
    pub y: [Vec<Curve>; 2],
}

/// Signer state between S1 and S2; consumed by S2, so a commitment answers
/// at most one blinded challenge (answering two leaks y_delta relations).
#[derive(Debug)]
pub struct SignerSession {
    y_delta: ExponentVec,
    c_star_other: TernaryVec,
    r_star_other: ExponentVec,
}

/// Second sender message rho_S2 = (c*_0, c*_1, r*_0, r*_1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbbsResponse {
    pub c_star: [TernaryVec; 2],
    pub r_star: [ExponentVec; 2],
}

/// User state between U1 and U2; consumed by U2.
#[derive(Debug)]
pub struct UserSession {
    v: [SignVec; 2],
    w: [ExponentVec; 2],
    z: [Vec<Curve>; 2],
    c: TernaryVec,
    m: Vec<u8>,
}

impl UserSession {
    pub fn v(&self) -> &[SignVec; 2] {
        &self.v
    }

    pub fn w(&self) -> &[ExponentVec; 2] {
        &self.w
    }

    pub fn z_curves(&self) -> &[Vec<Curve>; 2] {
        &self.z
    }

    pub fn challenge(&self) -> &TernaryVec {
        &self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlindSignature {
    pub c_tilde: [TernaryVec; 2],
    pub r_tilde: [ExponentVec; 2],
}

/// U2 either emits a signature or signals rejection; rejection is an
/// expected protocol outcome, not a fault. Both arms carry the (side,
/// index) pairs where the recomputed curve differed from the U1 value: the
/// decision itself compares hashes, so at small n a session can scrape
/// through on a hash match despite curve mismatches, and such accepts are
/// only visible here.
#[derive(Clone, Debug)]
pub enum U2Outcome {
    Signature {
        sig: BlindSignature,
        mismatches: Vec<(u8, usize)>,
    },
    Rejected {
        candidate: BlindSignature,
        mismatches: Vec<(u8, usize)>,
    },
}

impl U2Outcome {
    pub fn signature(&self) -> Option<&BlindSignature> {
        match self {
            U2Outcome::Signature { sig, .. } => Some(sig),
            U2Outcome::Rejected { .. } => None,
        }
    }

    pub fn mismatches(&self) -> &[(u8, usize)] {
        match self {
            U2Outcome::Signature { mismatches, .. } => mismatches,
            U2Outcome::Rejected { mismatches, .. } => mismatches,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructedState {
    pub v: [SignVec; 2],
    pub w: [ExponentVec; 2],
    /// Z_b re-derived from the reconstructed state and rho_S1.
    pub z: [Vec<Curve>; 2],
}

pub fn ibbs_setup(
    backend: &Backend,
    mode: IbbsMode,
    rng: &mut impl RngCore,
) -> Result<(IbbsParams, IbbsMasterSecret)> {
    ibbs_setup_with_policy(backend, mode, SetPolicy::Validated, rng)
}

pub fn ibbs_setup_with_policy(
    backend: &Backend,
    mode: IbbsMode,
    policy: SetPolicy,
    rng: &mut impl RngCore,
) -> Result<(IbbsParams, IbbsMasterSecret)> {
    let n = backend.n();
    let nmod = backend.modulus();
    let set: Vec<u64> = match gen_exceptional_set(n, nmod, true, rng) {
        Ok(s) => s.values().to_vec(),
        Err(e) => match policy {
            SetPolicy::Validated => return Err(e),
            SetPolicy::Structural => {
                if n as u64 >= nmod {
                    return Err(e);
                }
                (1..=n as u64).collect()
            }
        },
    };
    let s = [backend.sample_exponent(rng), backend.sample_exponent(rng)];
    ibbs_setup_from_secrets(backend, mode, set, s)
}

pub fn ibbs_setup_from_secrets(
    backend: &Backend,
    mode: IbbsMode,
    set: Vec<u64>,
    s: [u64; 2],
) -> Result<(IbbsParams, IbbsMasterSecret)> {
    let n = backend.n();
    let nmod = backend.modulus();
    if set.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: set.len(),
        });
    }
    let set_valid = check_exceptional_set(&set, nmod, true);
    let mut master_curves = [Vec::new(), Vec::new()];
    for b in 0..2 {
        master_curves[b] = set
            .iter()
            .map(|&c| backend.act(modn::mul(nmod, s[b] % nmod, c % nmod), Curve::BASE))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok((
        IbbsParams {
            mode,
            set,
            set_valid,
            master_curves,
            retry_limit: default_retry_limit(mode, n),
        },
        IbbsMasterSecret { s },
    ))
}

pub fn ibbs_extract(
    backend: &Backend,
    params: &IbbsParams,
    msk: &IbbsMasterSecret,
    id: &[u8],
    rng: &mut impl RngCore,
) -> Result<IbbsUserKeys> {
    Ok(ibbs_extract_full(backend, params, msk, id, rng)?.0)
}

/// Extraction returning the KGC record alongside the user key material.
pub fn ibbs_extract_full(
    backend: &Backend,
    params: &IbbsParams,
    msk: &IbbsMasterSecret,
    id: &[u8],
    rng: &mut impl RngCore,
) -> Result<(IbbsUserKeys, KgcExtractRecord)> {
    let n = backend.n();
    let nmod = backend.modulus();
    let mut r = [ExponentVec::zero(0), ExponentVec::zero(0)];
    let mut x = [ExponentVec::zero(0), ExponentVec::zero(0)];
    let mut u = [SignVec::sample(rng, 0), SignVec::sample(rng, 0)];
    let mut pk = [Vec::new(), Vec::new()];
    for b in 0..2 {
        r[b] = backend.sample_exponent_vec(rng, n);
        pk[b] = backend.act_vec_base(&r[b])?;
        let mut data = Vec::from(id);
        data.extend_from_slice(&backend.curves_to_bytes(&pk[b]));
        u[b] = hash_pm1(&data, n);
        x[b] = extract_witness(nmod, &r[b], msk.s[b], &params.set, &u[b]);
    }
    let delta = (rng.next_u32() & 1) as u8;
    let witness = match params.mode {
        IbbsMode::Paper => IbbsWitness::Paper(x[delta as usize].clone()),
        IbbsMode::Otter => IbbsWitness::Otter(r[delta as usize].clone()),
    };
    Ok((
        IbbsUserKeys {
            delta,
            witness,
            u,
            pk: IbbsPublicKey { x: pk },
        },
        KgcExtractRecord { r, x },
    ))
}

pub fn ibbs_s1(
    backend: &Backend,
    params: &IbbsParams,
    keys: &IbbsUserKeys,
    rng: &mut impl RngCore,
) -> Result<(IbbsCommit, SignerSession)> {
    let n = backend.n();
    let y_delta = backend.sample_exponent_vec(rng, n);
    let c_tilde_other = SignVec::sample(rng, n);
    let r_star_other = backend.sample_exponent_vec(rng, n);
    ibbs_s1_derand(backend, params, keys, y_delta, c_tilde_other, r_star_other)
}

pub fn ibbs_s1_derand(
    backend: &Backend,
    params: &IbbsParams,
    keys: &IbbsUserKeys,
    y_delta: ExponentVec,
    c_tilde_other: SignVec,
    r_star_other: ExponentVec,
) -> Result<(IbbsCommit, SignerSession)> {
    check_witness_mode(params, keys)?;
    let delta = keys.delta as usize;
    let other = 1 - delta;
    // real side: base (E_delta)^{u_delta} in paper mode, E0 in otter mode
    let y_real: Vec<Curve> = match params.mode {
        IbbsMode::Paper => params.master_curves[delta]
            .iter()
            .zip(y_delta.entries().iter().zip(keys.u[delta].entries()))
            .map(|(&e, (&yi, &ui))| backend.act(yi, backend.curve_power(e, ui)?))
            .collect::<Result<Vec<_>>>()?,
        IbbsMode::Otter => backend.act_vec_base(&y_delta)?,
    };
    // simulated side: c*_{1-d} = c~_{1-d} (.) u_{1-d}, then the branch rule
    let c_star_other = c_tilde_other.product(&keys.u[other])?.to_ternary();
    let y_sim: Vec<Curve> = keys.pk.x[other]
        .iter()
        .zip(r_star_other.entries().iter().zip(c_star_other.entries()))
        .map(|(&xc, (&ri, &ci))| backend.act(ri, backend.curve_power(xc, ci)?))
        .collect::<Result<Vec<_>>>()?;
    let mut y = [Vec::new(), Vec::new()];
    y[delta] = y_real;
    y[other] = y_sim;
    Ok((
        IbbsCommit { y },
        SignerSession {
            y_delta,
            c_star_other,
            r_star_other,
        },
    ))
}

pub fn ibbs_u1(
    backend: &Backend,
    params: &IbbsParams,
    commit: &IbbsCommit,
    message: &[u8],
    rng: &mut impl RngCore,
) -> Result<(TernaryVec, UserSession)> {
    let n = backend.n();
    let v = [SignVec::sample(rng, n), SignVec::sample(rng, n)];
    let w = [
        backend.sample_exponent_vec(rng, n),
        backend.sample_exponent_vec(rng, n),
    ];
    ibbs_u1_derand(backend, params, commit, message, v, w)
}

pub fn ibbs_u1_derand(
    backend: &Backend,
    params: &IbbsParams,
    commit: &IbbsCommit,
    message: &[u8],
    v: [SignVec; 2],
    w: [ExponentVec; 2],
) -> Result<(TernaryVec, UserSession)> {
    let n = backend.n();
    if commit.y[0].len() != n || commit.y[1].len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: commit.y[0].len(),
        });
    }
    let mut z = [Vec::new(), Vec::new()];
    for b in 0..2 {
        z[b] = commit.y[b]
            .iter()
            .zip(w[b].entries().iter().zip(v[b].entries()))
            .map(|(&yc, (&wi, &vi))| backend.act(wi, backend.curve_power(yc, vi)?))
            .collect::<Result<Vec<_>>>()?;
    }
    let c = challenge_hash(backend, params.mode, &z[0], &z[1], message);
    let c_star = c.product_signs(&v[0])?.product_signs(&v[1])?;
    Ok((
        c_star,
        UserSession {
            v,
            w,
            z,
            c,
            m: Vec::from(message),
        },
    ))
}

pub fn ibbs_s2(
    backend: &Backend,
    params: &IbbsParams,
    session: SignerSession,
    keys: &IbbsUserKeys,
    c_star: &TernaryVec,
) -> Result<IbbsResponse> {
    check_witness_mode(params, keys)?;
    let n = backend.n();
    let nmod = backend.modulus();
    if c_star.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c_star.len(),
        });
    }
    if params.mode == IbbsMode::Otter && !c_star.is_sign_only() {
        return Err(Error::Malformed(alloc::string::String::from(
            "otter mode blinded challenge must be sign-only",
        )));
    }
    let delta = keys.delta as usize;
    let c_star_delta = c_star.product(&session.c_star_other)?;
    let witness = match &keys.witness {
        IbbsWitness::Paper(x) => x,
        IbbsWitness::Otter(r) => r,
    };
    let r_star_delta = session
        .y_delta
        .sub(&witness.mul_ternary(&c_star_delta, nmod)?, nmod)?;
    let mut c_out = [TernaryVec::new(Vec::new())?, TernaryVec::new(Vec::new())?];
    let mut r_out = [ExponentVec::zero(0), ExponentVec::zero(0)];
    c_out[delta] = c_star_delta;
    c_out[1 - delta] = session.c_star_other;
    r_out[delta] = r_star_delta;
    r_out[1 - delta] = session.r_star_other;
    Ok(IbbsResponse {
        c_star: c_out,
        r_star: r_out,
    })
}

pub fn ibbs_u2(
    backend: &Backend,
    params: &IbbsParams,
    pk: &IbbsPublicKey,
    id: &[u8],
    session: UserSession,
    resp: &IbbsResponse,
) -> Result<U2Outcome> {
    let n = backend.n();
    let nmod = backend.modulus();
    for b in 0..2 {
        if resp.c_star[b].len() != n || resp.r_star[b].len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: resp.c_star[b].len(),
            });
        }
    }
    let mut c_tilde_arr = [TernaryVec::new(Vec::new())?, TernaryVec::new(Vec::new())?];
    let mut r_tilde_arr = [ExponentVec::zero(0), ExponentVec::zero(0)];
    for b in 0..2 {
        c_tilde_arr[b] = resp.c_star[b].product_signs(&session.v[b])?;
        r_tilde_arr[b] = session.w[b].add(&resp.r_star[b].mul_signs(&session.v[b], nmod)?, nmod)?;
    }
    let sig = BlindSignature {
        c_tilde: c_tilde_arr,
        r_tilde: r_tilde_arr,
    };
    let mut mismatches = Vec::new();
    let mut z_tilde = [Vec::new(), Vec::new()];
    for b in 0..2 {
        z_tilde[b] = recompute_z_side(backend, params, pk, id, &sig, b)?;
        for i in 0..n {
            if z_tilde[b][i] != session.z[b][i] {
                mismatches.push((b as u8, i));
            }
        }
    }
    let c_hat = challenge_hash(backend, params.mode, &z_tilde[0], &z_tilde[1], &session.m);
    let product = sig.c_tilde[0].product(&sig.c_tilde[1])?;
    if c_hat == product {
        Ok(U2Outcome::Signature { sig, mismatches })
    } else {
        Ok(U2Outcome::Rejected {
            candidate: sig,
            mismatches,
        })
    }
}

pub fn ibbs_verify(
    backend: &Backend,
    params: &IbbsParams,
    pk: &IbbsPublicKey,
    id: &[u8],
    sig: &BlindSignature,
    message: &[u8],
) -> Result<bool> {
    let n = backend.n();
    for b in 0..2 {
        if sig.c_tilde[b].len() != n || sig.r_tilde[b].len() != n || pk.x[b].len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: sig.c_tilde[b].len(),
            });
        }
        // the zero branch does not exist in otter mode
        if params.mode == IbbsMode::Otter && !sig.c_tilde[b].is_sign_only() {
            return Ok(false);
        }
    }
    let z0 = recompute_z_side(backend, params, pk, id, sig, 0)?;
    let z1 = recompute_z_side(backend, params, pk, id, sig, 1)?;
    let c_hat = challenge_hash(backend, params.mode, &z0, &z1, message);
    Ok(c_hat == sig.c_tilde[0].product(&sig.c_tilde[1])?)
}

/// Shared recompute rule of U2 and Verify: base (E_{b,i})^{u_{b,i}} when the
/// challenge entry is zero, else (X_{b,i})^{c~_{b,i}}.
fn recompute_z_side(
    backend: &Backend,
    params: &IbbsParams,
    pk: &IbbsPublicKey,
    id: &[u8],
    sig: &BlindSignature,
    b: usize,
) -> Result<Vec<Curve>> {
    let n = backend.n();
    let mut data = Vec::from(id);
    data.extend_from_slice(&backend.curves_to_bytes(&pk.x[b]));
    let u = hash_pm1(&data, n);
    (0..n)
        .map(|i| {
            let ci = sig.c_tilde[b].entries()[i];
            let base = if ci == 0 {
                backend.curve_power(params.master_curves[b][i], u.entries()[i])?
            } else {
                backend.curve_power(pk.x[b][i], ci)?
            };
            backend.act(sig.r_tilde[b].entries()[i], base)
        })
        .collect()
}

fn challenge_hash(
    backend: &Backend,
    mode: IbbsMode,
    z0: &[Curve],
    z1: &[Curve],
    message: &[u8],
) -> TernaryVec {
    let mut data = backend.curves_to_bytes(z0);
    data.extend_from_slice(&backend.curves_to_bytes(z1));
    data.extend_from_slice(message);
    match mode {
        IbbsMode::Paper => hash_ternary(&data, backend.n()),
        IbbsMode::Otter => hash_pm1(&data, backend.n()).to_ternary(),
    }
}

fn check_witness_mode(params: &IbbsParams, keys: &IbbsUserKeys) -> Result<()> {
    match (&params.mode, &keys.witness) {
        (IbbsMode::Paper, IbbsWitness::Paper(_)) | (IbbsMode::Otter, IbbsWitness::Otter(_)) => {
            Ok(())
        }
        (IbbsMode::Paper, IbbsWitness::Otter(_)) => Err(Error::ModeMismatch {
            expected: "paper",
            got: "otter",
        }),
        (IbbsMode::Otter, IbbsWitness::Paper(_)) => Err(Error::ModeMismatch {
            expected: "otter",
            got: "paper",
        }),
    }
}

/// Default session retry budget: one attempt suffices in otter mode, paper
/// mode succeeds with probability about 2^-n per attempt.
pub fn default_retry_limit(mode: IbbsMode, n: usize) -> u32 {
    match mode {
        IbbsMode::Otter => 1,
        IbbsMode::Paper => 4u32.saturating_mul(1u32.checked_shl(n as u32).unwrap_or(u32::MAX)),
    }
}

/// Run fresh S1 -> U1 -> S2 -> U2 sessions until a signature appears or the
/// limit is exhausted; returns the attempt count alongside the signature.
pub fn ibbs_sign_with_retry(
    backend: &Backend,
    params: &IbbsParams,
    keys: &IbbsUserKeys,
    id: &[u8],
    message: &[u8],
    rng: &mut impl RngCore,
    limit: u32,
) -> Result<(BlindSignature, u32)> {
    for attempt in 1..=limit {
        let (commit, signer) = ibbs_s1(backend, params, keys, rng)?;
        let (c_star, user) = ibbs_u1(backend, params, &commit, message, rng)?;
        let resp = ibbs_s2(backend, params, signer, keys, &c_star)?;
        match ibbs_u2(backend, params, &keys.pk, id, user, &resp)? {
            U2Outcome::Signature { sig, .. } => return Ok((sig, attempt)),
            U2Outcome::Rejected { .. } => {}
        }
    }
    Err(Error::RetryLimitExceeded { attempts: limit })
}

/// Invert the blinding of a verifying signature: v_b = c~_b (.) c*_b and
/// w_b = r~_b - r*_b (.) v_b, plus the Z_b the state implies. Paper-mode
/// zero entries leave v information-theoretically undetermined and error
/// out.
pub fn reconstruct_blinding(
    backend: &Backend,
    commit: &IbbsCommit,
    resp: &IbbsResponse,
    sig: &BlindSignature,
) -> Result<ReconstructedState> {
    let n = backend.n();
    let nmod = backend.modulus();
    let mut v = [SignVec::new(Vec::new())?, SignVec::new(Vec::new())?];
    let mut w = [ExponentVec::zero(0), ExponentVec::zero(0)];
    let mut z = [Vec::new(), Vec::new()];
    for b in 0..2 {
        let mut vb = Vec::with_capacity(n);
        for i in 0..n {
            let cs = resp.c_star[b].entries()[i];
            let ct = sig.c_tilde[b].entries()[i];
            if cs == 0 {
                return Err(Error::ZeroChallengeEntry { index: i });
            }
            if ct == 0 {
                return Err(Error::Malformed(alloc::string::String::from(
                    "c~ entry zero where c* is not",
                )));
            }
            vb.push(ct * cs);
        }
        v[b] = SignVec::new(vb)?;
        w[b] = sig.r_tilde[b].sub(&resp.r_star[b].mul_signs(&v[b], nmod)?, nmod)?;
        z[b] = commit.y[b]
            .iter()
            .zip(w[b].entries().iter().zip(v[b].entries()))
            .map(|(&yc, (&wi, &vi))| backend.act(wi, backend.curve_power(yc, vi)?))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(ReconstructedState { v, w, z })
}
