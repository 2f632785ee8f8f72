//! Identity-based identification: KGC setup, per-identity key extraction and
//! the three-move protocol.
//!
//! Two modes are provided. `Paper` draws challenges from {-1,0,1}^n exactly
//! as the scheme equations state them; under twist semantics the v = -1
//! branch recomputes against the twisted master base and an honest session
//! then only accepts when v contains no -1 entry, so acceptance runs at
//! (2/3)^n. `Binary` restricts challenges to {0,1}^n, which is perfectly
//! complete and still two-special-sound per index. Binary is the default in
//! the CLI; paper mode exists so the failure rate itself can be measured.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::action::{Backend, Curve};
use crate::error::{Error, Result};
use crate::exceptional::{gen_exceptional_set, ExceptionalSet};
use crate::hashes::hash_pm1;
use crate::modn;
use crate::vectors::{ExponentVec, SignVec, TernaryVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IbidMode {
    Paper,
    Binary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbidParams {
    pub mode: IbidMode,
    pub set: ExceptionalSet,
    /// E_i = [g^{s * c_i}] * E0.
    pub master_curves: Vec<Curve>,
}

#[derive(Clone, Debug)]
pub struct IbidUserKey {
    pub u: SignVec,
    pub x: ExponentVec,
    /// Published commitment; equals the extractor's R by construction.
    pub x_curves: Vec<Curve>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbidCommit {
    pub x_curves: Vec<Curve>,
    pub k_curves: Vec<Curve>,
}

/// One-shot prover state; responding consumes it.
#[derive(Debug)]
pub struct IbidProverState {
    k: ExponentVec,
}

pub fn ibid_setup(
    backend: &Backend,
    mode: IbidMode,
    rng: &mut impl RngCore,
) -> Result<(IbidParams, u64)> {
    let set = gen_exceptional_set(backend.n(), backend.modulus(), true, rng)?;
    let s = loop {
        let s = backend.sample_exponent(rng);
        if s != 0 {
            break s;
        }
    };
    let params = ibid_setup_from_secret(backend, mode, set, s, false)?;
    Ok((params, s))
}

/// Setup from an explicit master secret. s = 0 collapses every master curve
/// to the base curve; it stays well defined but is rejected unless
/// explicitly allowed.
pub fn ibid_setup_from_secret(
    backend: &Backend,
    mode: IbidMode,
    set: ExceptionalSet,
    s: u64,
    allow_zero_master: bool,
) -> Result<IbidParams> {
    if s % backend.modulus() == 0 && !allow_zero_master {
        return Err(Error::ZeroMasterSecret);
    }
    if set.len() != backend.n() {
        return Err(Error::LengthMismatch {
            expected: backend.n(),
            got: set.len(),
        });
    }
    let nmod = backend.modulus();
    let master_curves = set
        .values()
        .iter()
        .map(|&c| backend.act(modn::mul(nmod, s % nmod, c % nmod), Curve::BASE))
        .collect::<Result<Vec<_>>>()?;
    Ok(IbidParams {
        mode,
        set,
        master_curves,
    })
}

/// x = r - s * c (.) u mod N, entrywise.
pub(crate) fn extract_witness(
    nmod: u64,
    r: &ExponentVec,
    s: u64,
    set: &[u64],
    u: &SignVec,
) -> ExponentVec {
    let entries: Vec<u64> = r
        .entries()
        .iter()
        .zip(set.iter().zip(u.entries()))
        .map(|(&ri, (&ci, &ui))| {
            let term = modn::mul_sign(nmod, modn::mul(nmod, s % nmod, ci % nmod), ui);
            modn::sub(nmod, ri, term)
        })
        .collect();
    ExponentVec::new(entries, nmod).expect("reduced by construction")
}

pub fn ibid_extract(
    backend: &Backend,
    params: &IbidParams,
    s: u64,
    id: &[u8],
    rng: &mut impl RngCore,
) -> Result<IbidUserKey> {
    let r = backend.sample_exponent_vec(rng, backend.n());
    ibid_extract_derand(backend, params, s, id, r)
}

pub fn ibid_extract_derand(
    backend: &Backend,
    params: &IbidParams,
    s: u64,
    id: &[u8],
    r: ExponentVec,
) -> Result<IbidUserKey> {
    let r_curves = backend.act_vec_base(&r)?;
    let mut data = Vec::from(id);
    data.extend_from_slice(&backend.curves_to_bytes(&r_curves));
    let u = hash_pm1(&data, backend.n());
    let x = extract_witness(backend.modulus(), &r, s, params.set.values(), &u);
    Ok(IbidUserKey {
        u,
        x,
        x_curves: r_curves,
    })
}

pub fn ibid_prove_commit(
    backend: &Backend,
    params: &IbidParams,
    usk: &IbidUserKey,
    rng: &mut impl RngCore,
) -> Result<(IbidCommit, IbidProverState)> {
    let k = backend.sample_exponent_vec(rng, backend.n());
    ibid_prove_commit_derand(backend, params, usk, k)
}

pub fn ibid_prove_commit_derand(
    backend: &Backend,
    params: &IbidParams,
    usk: &IbidUserKey,
    k: ExponentVec,
) -> Result<(IbidCommit, IbidProverState)> {
    let k_curves = params
        .master_curves
        .iter()
        .zip(k.entries().iter().zip(usk.u.entries()))
        .map(|(&e, (&ki, &ui))| backend.act(ki, backend.curve_power(e, ui)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        IbidCommit {
            x_curves: usk.x_curves.clone(),
            k_curves,
        },
        IbidProverState { k },
    ))
}

/// Verifier challenge over the mode's alphabet.
pub fn ibid_challenge(mode: IbidMode, n: usize, rng: &mut impl RngCore) -> TernaryVec {
    match mode {
        IbidMode::Paper => TernaryVec::sample(rng, n),
        IbidMode::Binary => TernaryVec::sample_binary(rng, n),
    }
}

/// z = k - v (.) x mod N.
pub fn ibid_respond(
    backend: &Backend,
    state: IbidProverState,
    usk: &IbidUserKey,
    v: &TernaryVec,
) -> Result<ExponentVec> {
    let nmod = backend.modulus();
    state.k.sub(&usk.x.mul_ternary(v, nmod)?, nmod)
}

pub fn ibid_verify(
    backend: &Backend,
    params: &IbidParams,
    id: &[u8],
    commit: &IbidCommit,
    v: &TernaryVec,
    z: &ExponentVec,
) -> Result<bool> {
    let n = backend.n();
    if commit.x_curves.len() != n
        || commit.k_curves.len() != n
        || v.len() != n
        || z.len() != n
        || params.master_curves.len() != n
    {
        return Err(Error::LengthMismatch {
            expected: n,
            got: commit.x_curves.len(),
        });
    }
    let mut data = Vec::from(id);
    data.extend_from_slice(&backend.curves_to_bytes(&commit.x_curves));
    let u = hash_pm1(&data, n);
    for i in 0..n {
        let vi = v.entries()[i];
        let base = if vi == 0 {
            backend.curve_power(params.master_curves[i], u.entries()[i])?
        } else {
            backend.curve_power(commit.x_curves[i], vi)?
        };
        if backend.act(z.entries()[i], base)? != commit.k_curves[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exceptional::check_exceptional_set;
    use rand_core::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha12Rng {
        rand_chacha::ChaCha12Rng::seed_from_u64(seed)
    }

    fn set_from(values: &[u64]) -> ExceptionalSet {
        // the canonical set for prime N = 101 is exactly 1..=n
        let mut r = rng(0);
        let set = gen_exceptional_set(values.len(), 101, true, &mut r).unwrap();
        assert_eq!(set.values(), values);
        set
    }

    #[test]
    fn setup_hand_values() {
        let backend = Backend::toy(3, 101).unwrap();
        let params =
            ibid_setup_from_secret(&backend, IbidMode::Paper, set_from(&[1, 2, 3]), 5, false)
                .unwrap();
        assert_eq!(
            params.master_curves,
            alloc::vec![Curve(5), Curve(10), Curve(15)]
        );
        assert!(check_exceptional_set(params.set.values(), 101, true));
    }

    #[test]
    fn zero_master_secret_is_configurable() {
        let backend = Backend::toy(2, 101).unwrap();
        let mut r = rng(1);
        let set = gen_exceptional_set(2, 101, true, &mut r).unwrap();
        assert_eq!(
            ibid_setup_from_secret(&backend, IbidMode::Binary, set.clone(), 0, false),
            Err(Error::ZeroMasterSecret)
        );
        let params = ibid_setup_from_secret(&backend, IbidMode::Binary, set, 0, true).unwrap();
        assert_eq!(params.master_curves, alloc::vec![Curve::BASE; 2]);
    }

    #[test]
    fn extract_witness_formula() {
        let u = SignVec::new(alloc::vec![1, -1]).unwrap();
        let r = ExponentVec::new(alloc::vec![10, 20], 101).unwrap();
        let x = extract_witness(101, &r, 5, &[1, 2], &u);
        assert_eq!(x.entries(), &[5, 30]); // 10 - 5, 20 + 10
    }

    #[test]
    fn extract_publishes_its_commitment() {
        // X_i = [g^{x_i}] * (E_i)^{u_i} equals the extract-time R
        let backend = Backend::toy(4, 101).unwrap();
        let mut r = rng(2);
        let (params, s) = ibid_setup(&backend, IbidMode::Binary, &mut r).unwrap();
        let usk = ibid_extract(&backend, &params, s, b"alice@example.com", &mut r).unwrap();
        for i in 0..4 {
            let base = backend
                .curve_power(params.master_curves[i], usk.u.entries()[i])
                .unwrap();
            let xi = backend.act(usk.x.entries()[i], base).unwrap();
            assert_eq!(xi, usk.x_curves[i]);
        }
    }

    #[test]
    fn fresh_randomness_per_extract() {
        let backend = Backend::toy(4, 101).unwrap();
        let mut r = rng(3);
        let (params, s) = ibid_setup(&backend, IbidMode::Binary, &mut r).unwrap();
        let k1 = ibid_extract(&backend, &params, s, b"same-id", &mut r).unwrap();
        let k2 = ibid_extract(&backend, &params, s, b"same-id", &mut r).unwrap();
        assert_ne!(k1.x_curves, k2.x_curves);
    }

    #[test]
    fn commit_hand_values() {
        let backend = Backend::toy(1, 101).unwrap();
        let params = IbidParams {
            mode: IbidMode::Paper,
            set: set_from(&[1]),
            master_curves: alloc::vec![Curve(5)],
        };
        let mk_usk = |u: i8| IbidUserKey {
            u: SignVec::new(alloc::vec![u]).unwrap(),
            x: ExponentVec::new(alloc::vec![0], 101).unwrap(),
            x_curves: alloc::vec![Curve::BASE],
        };
        let k = ExponentVec::new(alloc::vec![7], 101).unwrap();
        let (commit, _) =
            ibid_prove_commit_derand(&backend, &params, &mk_usk(1), k.clone()).unwrap();
        assert_eq!(commit.k_curves, alloc::vec![Curve(12)]);
        let (commit, _) = ibid_prove_commit_derand(&backend, &params, &mk_usk(-1), k).unwrap();
        assert_eq!(commit.k_curves, alloc::vec![Curve(2)]); // 7 - 5
    }

    #[test]
    fn respond_hand_values() {
        let backend = Backend::toy(2, 101).unwrap();
        let usk = IbidUserKey {
            u: SignVec::new(alloc::vec![1, 1]).unwrap(),
            x: ExponentVec::new(alloc::vec![5, 30], 101).unwrap(),
            x_curves: alloc::vec![Curve::BASE; 2],
        };
        let state = IbidProverState {
            k: ExponentVec::new(alloc::vec![7, 8], 101).unwrap(),
        };
        let v = TernaryVec::new(alloc::vec![1, -1]).unwrap();
        let z = ibid_respond(&backend, state, &usk, &v).unwrap();
        assert_eq!(z.entries(), &[2, 38]);

        // v = 0 leaves k; wraparound case k=1, v=1, x=5
        let state = IbidProverState {
            k: ExponentVec::new(alloc::vec![1, 9], 101).unwrap(),
        };
        let usk2 = IbidUserKey {
            u: usk.u.clone(),
            x: ExponentVec::new(alloc::vec![5, 77], 101).unwrap(),
            x_curves: usk.x_curves.clone(),
        };
        let v = TernaryVec::new(alloc::vec![1, 0]).unwrap();
        let z = ibid_respond(&backend, state, &usk2, &v).unwrap();
        assert_eq!(z.entries(), &[97, 9]);
    }

    #[test]
    fn challenge_alphabets_and_determinism() {
        let v = ibid_challenge(IbidMode::Paper, 64, &mut rng(4));
        assert!(v.entries().iter().all(|&e| (-1..=1).contains(&e)));
        let b = ibid_challenge(IbidMode::Binary, 64, &mut rng(4));
        assert!(b.entries().iter().all(|&e| e == 0 || e == 1));
        assert_eq!(v, ibid_challenge(IbidMode::Paper, 64, &mut rng(4)));
    }

    #[test]
    fn binary_mode_complete_exhaustively() {
        let backend = Backend::toy(2, 101).unwrap();
        let mut r = rng(5);
        let (params, s) = ibid_setup(&backend, IbidMode::Binary, &mut r).unwrap();
        let usk = ibid_extract(&backend, &params, s, b"bob", &mut r).unwrap();
        for bits in 0..4u8 {
            let v =
                TernaryVec::new(alloc::vec![(bits & 1) as i8, ((bits >> 1) & 1) as i8]).unwrap();
            let (commit, state) = ibid_prove_commit(&backend, &params, &usk, &mut r).unwrap();
            let z = ibid_respond(&backend, state, &usk, &v).unwrap();
            assert!(ibid_verify(&backend, &params, b"bob", &commit, &v, &z).unwrap());
        }
    }

    #[test]
    fn paper_mode_minus_one_branch_rejects_honest_runs() {
        let backend = Backend::toy(2, 101).unwrap();
        let mut r = rng(6);
        let (params, s) = ibid_setup(&backend, IbidMode::Paper, &mut r).unwrap();
        let usk = ibid_extract(&backend, &params, s, b"carol", &mut r).unwrap();
        let v = TernaryVec::new(alloc::vec![-1, 0]).unwrap();
        let (commit, state) = ibid_prove_commit(&backend, &params, &usk, &mut r).unwrap();
        let z = ibid_respond(&backend, state, &usk, &v).unwrap();
        assert!(!ibid_verify(&backend, &params, b"carol", &commit, &v, &z).unwrap());
    }

    #[test]
    fn verify_hand_value_positive_branch() {
        let backend = Backend::toy(1, 101).unwrap();
        // z = 2, X = 10, v = 1: K' = [g^2] * X = 12
        assert_eq!(backend.act(2, Curve(10)).unwrap(), Curve(12));
    }

    #[test]
    fn binary_extraction_analogue() {
        // two accepting binary transcripts with v_i != v'_i recover x_i
        let backend = Backend::toy(3, 101).unwrap();
        let mut r = rng(7);
        let (params, s) = ibid_setup(&backend, IbidMode::Binary, &mut r).unwrap();
        let usk = ibid_extract(&backend, &params, s, b"dave", &mut r).unwrap();
        let k = backend.sample_exponent_vec(&mut r, 3);
        let (commit, st1) = ibid_prove_commit_derand(&backend, &params, &usk, k.clone()).unwrap();
        let (_, st2) = ibid_prove_commit_derand(&backend, &params, &usk, k).unwrap();
        let v1 = TernaryVec::new(alloc::vec![0, 1, 0]).unwrap();
        let v2 = TernaryVec::new(alloc::vec![1, 1, 0]).unwrap();
        let z1 = ibid_respond(&backend, st1, &usk, &v1).unwrap();
        let z2 = ibid_respond(&backend, st2, &usk, &v2).unwrap();
        assert!(ibid_verify(&backend, &params, b"dave", &commit, &v1, &z1).unwrap());
        assert!(ibid_verify(&backend, &params, b"dave", &commit, &v2, &z2).unwrap());
        // index 0 differs: x_0 = (z'_0 - z_0) / (v_0 - v'_0) = z_0 - z'_0
        let nmod = backend.modulus();
        let x0 = modn::sub(nmod, z1.entries()[0], z2.entries()[0]);
        assert_eq!(x0, usk.x.entries()[0]);
        let base = backend
            .curve_power(params.master_curves[0], usk.u.entries()[0])
            .unwrap();
        assert_eq!(backend.act(x0, base).unwrap(), usk.x_curves[0]);
    }
}
