//! Typed payload codecs for the session messages. Curves and exponents are
//! fixed-width big-endian, challenge vectors are 2-bit packed ternary; the
//! widths come from the backend so the encodings match the hash inputs
//! bit for bit.

use csi_ibbs_core::codec::{pack_ternary, read_be, unpack_ternary, write_be};
use csi_ibbs_core::ibbs::{IbbsCommit, IbbsResponse};
use csi_ibbs_core::ibid::IbidCommit;
use csi_ibbs_core::{Backend, Curve, ExponentVec, TernaryVec};

use crate::error::{Result, WireError};

/// Error-frame payload: one code byte plus a UTF-8 note.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ErrorCode {
    Other = 0x00,
    /// The user rejected the attempt and wants a fresh commitment.
    Retry = 0x01,
    Protocol = 0x02,
    Decode = 0x03,
}

impl ErrorCode {
    pub fn from_byte(b: u8) -> ErrorCode {
        match b {
            0x01 => ErrorCode::Retry,
            0x02 => ErrorCode::Protocol,
            0x03 => ErrorCode::Decode,
            _ => ErrorCode::Other,
        }
    }
}

pub fn encode_error(code: ErrorCode, note: &str) -> Vec<u8> {
    let mut out = vec![code as u8];
    out.extend_from_slice(note.as_bytes());
    out
}

pub fn decode_error(payload: &[u8]) -> (ErrorCode, String) {
    if payload.is_empty() {
        return (ErrorCode::Other, String::new());
    }
    (
        ErrorCode::from_byte(payload[0]),
        String::from_utf8_lossy(&payload[1..]).into_owned(),
    )
}

fn decode_curves(backend: &Backend, bytes: &[u8], count: usize) -> Result<(Vec<Curve>, usize)> {
    let w = backend.curve_width();
    let need = w * count;
    if bytes.len() < need {
        return Err(WireError::Truncated);
    }
    let curves = backend.curves_from_bytes(&bytes[..need], count)?;
    Ok((curves, need))
}

fn encode_exponents(backend: &Backend, out: &mut Vec<u8>, exps: &ExponentVec) {
    let w = backend.exponent_width();
    for &e in exps.entries() {
        write_be(out, e, w);
    }
}

fn decode_exponents(backend: &Backend, bytes: &[u8], count: usize) -> Result<(ExponentVec, usize)> {
    let w = backend.exponent_width();
    let need = w * count;
    if bytes.len() < need {
        return Err(WireError::Truncated);
    }
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        entries.push(read_be(&bytes[i * w..], w)?);
    }
    let v = ExponentVec::new(entries, backend.modulus())?;
    Ok((v, need))
}

fn ternary_width(n: usize) -> usize {
    n.div_ceil(4)
}

pub fn encode_rho_s1(backend: &Backend, commit: &IbbsCommit) -> Vec<u8> {
    let mut out = backend.curves_to_bytes(&commit.y[0]);
    out.extend_from_slice(&backend.curves_to_bytes(&commit.y[1]));
    out
}

pub fn decode_rho_s1(backend: &Backend, payload: &[u8]) -> Result<IbbsCommit> {
    let n = backend.n();
    let (y0, used) = decode_curves(backend, payload, n)?;
    let (y1, used1) = decode_curves(backend, &payload[used..], n)?;
    expect_consumed(payload.len(), used + used1)?;
    Ok(IbbsCommit { y: [y0, y1] })
}

pub fn encode_rho_u(c_star: &TernaryVec) -> Vec<u8> {
    pack_ternary(c_star.entries())
}

pub fn decode_rho_u(backend: &Backend, payload: &[u8]) -> Result<TernaryVec> {
    let n = backend.n();
    expect_consumed(payload.len(), ternary_width(n))?;
    Ok(unpack_ternary(payload, n)?)
}

pub fn encode_rho_s2(backend: &Backend, resp: &IbbsResponse) -> Vec<u8> {
    let mut out = pack_ternary(resp.c_star[0].entries());
    out.extend_from_slice(&pack_ternary(resp.c_star[1].entries()));
    encode_exponents(backend, &mut out, &resp.r_star[0]);
    encode_exponents(backend, &mut out, &resp.r_star[1]);
    out
}

pub fn decode_rho_s2(backend: &Backend, payload: &[u8]) -> Result<IbbsResponse> {
    let n = backend.n();
    let tw = ternary_width(n);
    if payload.len() < 2 * tw {
        return Err(WireError::Truncated);
    }
    let c0 = unpack_ternary(&payload[..tw], n)?;
    let c1 = unpack_ternary(&payload[tw..2 * tw], n)?;
    let (r0, used0) = decode_exponents(backend, &payload[2 * tw..], n)?;
    let (r1, used1) = decode_exponents(backend, &payload[2 * tw + used0..], n)?;
    expect_consumed(payload.len(), 2 * tw + used0 + used1)?;
    Ok(IbbsResponse {
        c_star: [c0, c1],
        r_star: [r0, r1],
    })
}

pub fn encode_id_commit(backend: &Backend, commit: &IbidCommit) -> Vec<u8> {
    let mut out = backend.curves_to_bytes(&commit.x_curves);
    out.extend_from_slice(&backend.curves_to_bytes(&commit.k_curves));
    out
}

pub fn decode_id_commit(backend: &Backend, payload: &[u8]) -> Result<IbidCommit> {
    let n = backend.n();
    let (x, used) = decode_curves(backend, payload, n)?;
    let (k, used1) = decode_curves(backend, &payload[used..], n)?;
    expect_consumed(payload.len(), used + used1)?;
    Ok(IbidCommit {
        x_curves: x,
        k_curves: k,
    })
}

pub fn encode_id_challenge(v: &TernaryVec) -> Vec<u8> {
    pack_ternary(v.entries())
}

pub fn decode_id_challenge(backend: &Backend, payload: &[u8]) -> Result<TernaryVec> {
    let n = backend.n();
    expect_consumed(payload.len(), ternary_width(n))?;
    Ok(unpack_ternary(payload, n)?)
}

pub fn encode_id_response(backend: &Backend, z: &ExponentVec) -> Vec<u8> {
    let mut out = Vec::new();
    encode_exponents(backend, &mut out, z);
    out
}

pub fn decode_id_response(backend: &Backend, payload: &[u8]) -> Result<ExponentVec> {
    let n = backend.n();
    let (z, used) = decode_exponents(backend, payload, n)?;
    expect_consumed(payload.len(), used)?;
    Ok(z)
}

pub fn encode_upk(backend: &Backend, pk: &csi_ibbs_core::ibbs::IbbsPublicKey) -> Vec<u8> {
    let mut out = backend.curves_to_bytes(&pk.x[0]);
    out.extend_from_slice(&backend.curves_to_bytes(&pk.x[1]));
    out
}

pub fn decode_upk(backend: &Backend, payload: &[u8]) -> Result<csi_ibbs_core::ibbs::IbbsPublicKey> {
    let n = backend.n();
    let (x0, used) = decode_curves(backend, payload, n)?;
    let (x1, used1) = decode_curves(backend, &payload[used..], n)?;
    expect_consumed(payload.len(), used + used1)?;
    Ok(csi_ibbs_core::ibbs::IbbsPublicKey { x: [x0, x1] })
}

fn expect_consumed(got: usize, want: usize) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(WireError::Format {
            what: "payload",
            detail: format!("expected {want} bytes, found {got}"),
        })
    }
}
