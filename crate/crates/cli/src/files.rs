//! Flat-file formats: parameter and public-key files wear the frame
//! envelope, secret keys are plain TOML that never crosses the wire, and
//! signatures use their own fixed binary layout.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use csi_ibbs_core::codec::{read_be, write_be};
use csi_ibbs_core::ibbs::{
    BlindSignature, IbbsMasterSecret, IbbsMode, IbbsParams, IbbsPublicKey, IbbsUserKeys,
    IbbsWitness,
};
use csi_ibbs_core::{Backend, BackendKind, Curve, ExponentVec, SignVec};

use crate::error::{Result, WireError};
use crate::frame::{Frame, MsgType};
use crate::payload;

pub const SIG_MAGIC: [u8; 4] = *b"IBBS";
pub const SIG_VERSION: u8 = 0x01;
pub const SIG_HEADER_LEN: usize = 8;

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ParamsFile {
    pub action: ActionSection,
    pub ibbs: IbbsSection,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ActionSection {
    pub backend: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ells: Option<Vec<u64>>,
    pub generator: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IbbsSection {
    pub mode: String,
    pub set: Vec<u64>,
    pub set_valid: bool,
    pub retry_limit: u32,
    pub master_curves_0: Vec<u64>,
    pub master_curves_1: Vec<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MskFile {
    pub s0: u64,
    pub s1: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct UskFile {
    pub id: String,
    pub mode: String,
    pub delta: u8,
    /// x_delta in paper mode, r_delta in otter mode.
    pub witness: Vec<u64>,
    pub u0: Vec<i8>,
    pub u1: Vec<i8>,
    pub pk_x0: Vec<u64>,
    pub pk_x1: Vec<u64>,
}

pub fn mode_from_str(s: &str) -> Result<IbbsMode> {
    match s {
        "paper" => Ok(IbbsMode::Paper),
        "otter" => Ok(IbbsMode::Otter),
        other => Err(WireError::Format {
            what: "mode",
            detail: format!("unknown mode {other:?}"),
        }),
    }
}

pub fn params_to_file(backend: &Backend, params: &IbbsParams) -> ParamsFile {
    let ap = backend.params();
    ParamsFile {
        action: ActionSection {
            backend: match ap.kind {
                BackendKind::Toy => "toy".into(),
                BackendKind::Csidh => "csidh".into(),
            },
            n: ap.n,
            modulus: match ap.kind {
                BackendKind::Toy => Some(ap.class_number),
                BackendKind::Csidh => None,
            },
            p: ap.p,
            ells: if ap.ells.is_empty() {
                None
            } else {
                Some(ap.ells.clone())
            },
            generator: ap.generator.clone(),
        },
        ibbs: IbbsSection {
            mode: params.mode.as_str().into(),
            set: params.set.clone(),
            set_valid: params.set_valid,
            retry_limit: params.retry_limit,
            master_curves_0: params.master_curves[0].iter().map(|c| c.0).collect(),
            master_curves_1: params.master_curves[1].iter().map(|c| c.0).collect(),
        },
    }
}

/// Rebuild the backend and protocol parameters, re-validating curve
/// membership and the recorded set flag.
pub fn params_from_file(file: &ParamsFile) -> Result<(Backend, IbbsParams)> {
    let backend = match file.action.backend.as_str() {
        "toy" => Backend::toy(
            file.action.n,
            file.action.modulus.ok_or(WireError::Format {
                what: "params",
                detail: "toy backend needs a modulus".into(),
            })?,
        )?,
        "csidh" => {
            let p = file.action.p.ok_or(WireError::Format {
                what: "params",
                detail: "csidh backend needs a prime".into(),
            })?;
            let ells = file.action.ells.clone().unwrap_or_default();
            Backend::csidh_with(file.action.n, p, &ells, 4096)?
        }
        other => {
            return Err(WireError::Format {
                what: "params",
                detail: format!("unknown backend {other:?}"),
            })
        }
    };
    let mode = mode_from_str(&file.ibbs.mode)?;
    let n = backend.n();
    if file.ibbs.master_curves_0.len() != n
        || file.ibbs.master_curves_1.len() != n
        || file.ibbs.set.len() != n
    {
        return Err(WireError::Format {
            what: "params",
            detail: "vector lengths disagree with n".into(),
        });
    }
    let mut master_curves = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for (b, src) in [&file.ibbs.master_curves_0, &file.ibbs.master_curves_1]
        .into_iter()
        .enumerate()
    {
        for &v in src {
            let curve = Curve(v);
            backend.gaip_bruteforce(curve)?; // membership check
            master_curves[b].push(curve);
        }
    }
    let set_valid = csi_ibbs_core::check_exceptional_set(&file.ibbs.set, backend.modulus(), true);
    if set_valid != file.ibbs.set_valid {
        return Err(WireError::Format {
            what: "params",
            detail: "set_valid flag disagrees with validation".into(),
        });
    }
    let params = IbbsParams {
        mode,
        set: file.ibbs.set.clone(),
        set_valid,
        master_curves,
        retry_limit: file.ibbs.retry_limit,
    };
    Ok((backend, params))
}

pub fn save_params(path: &Path, backend: &Backend, params: &IbbsParams) -> Result<()> {
    let toml_text = toml::to_string_pretty(&params_to_file(backend, params)).map_err(|e| {
        WireError::Format {
            what: "params",
            detail: e.to_string(),
        }
    })?;
    let frame = Frame::new(MsgType::Params, toml_text.into_bytes());
    fs::write(path, frame.encode())?;
    Ok(())
}

pub fn load_params(path: &Path) -> Result<(Backend, IbbsParams)> {
    let bytes = fs::read(path)?;
    let (frame, _) = Frame::decode(&bytes)?;
    if frame.msg_type != MsgType::Params {
        return Err(WireError::Protocol {
            expected: "PARAMS",
            got: frame.msg_type.name(),
        });
    }
    let text = String::from_utf8(frame.payload).map_err(|e| WireError::Format {
        what: "params",
        detail: e.to_string(),
    })?;
    let file: ParamsFile = toml::from_str(&text).map_err(|e| WireError::Format {
        what: "params",
        detail: e.to_string(),
    })?;
    params_from_file(&file)
}

pub fn save_msk(path: &Path, msk: &IbbsMasterSecret) -> Result<()> {
    let text = toml::to_string_pretty(&MskFile {
        s0: msk.s[0],
        s1: msk.s[1],
    })
    .expect("msk serialises");
    fs::write(path, text)?;
    Ok(())
}

pub fn load_msk(path: &Path) -> Result<IbbsMasterSecret> {
    let file: MskFile =
        toml::from_str(&fs::read_to_string(path)?).map_err(|e| WireError::Format {
            what: "msk",
            detail: e.to_string(),
        })?;
    Ok(IbbsMasterSecret {
        s: [file.s0, file.s1],
    })
}

pub fn save_usk(path: &Path, id: &str, mode: IbbsMode, keys: &IbbsUserKeys) -> Result<()> {
    let witness = match &keys.witness {
        IbbsWitness::Paper(x) => x.entries().to_vec(),
        IbbsWitness::Otter(r) => r.entries().to_vec(),
    };
    let file = UskFile {
        id: id.into(),
        mode: mode.as_str().into(),
        delta: keys.delta,
        witness,
        u0: keys.u[0].entries().to_vec(),
        u1: keys.u[1].entries().to_vec(),
        pk_x0: keys.pk.x[0].iter().map(|c| c.0).collect(),
        pk_x1: keys.pk.x[1].iter().map(|c| c.0).collect(),
    };
    let text = toml::to_string_pretty(&file).map_err(|e| WireError::Format {
        what: "usk",
        detail: e.to_string(),
    })?;
    fs::write(path, text)?;
    Ok(())
}

pub fn load_usk(path: &Path, backend: &Backend) -> Result<(String, IbbsUserKeys)> {
    let file: UskFile =
        toml::from_str(&fs::read_to_string(path)?).map_err(|e| WireError::Format {
            what: "usk",
            detail: e.to_string(),
        })?;
    let nmod = backend.modulus();
    let witness_vec = ExponentVec::new(file.witness, nmod)?;
    let mode = mode_from_str(&file.mode)?;
    let witness = match mode {
        IbbsMode::Paper => IbbsWitness::Paper(witness_vec),
        IbbsMode::Otter => IbbsWitness::Otter(witness_vec),
    };
    let mut pk = [Vec::new(), Vec::new()];
    for (b, src) in [&file.pk_x0, &file.pk_x1].into_iter().enumerate() {
        for &v in src {
            let curve = Curve(v);
            backend.gaip_bruteforce(curve)?;
            pk[b].push(curve);
        }
    }
    let keys = IbbsUserKeys {
        delta: file.delta & 1,
        witness,
        u: [SignVec::new(file.u0)?, SignVec::new(file.u1)?],
        pk: IbbsPublicKey { x: pk },
    };
    Ok((file.id, keys))
}

pub fn save_upk(path: &Path, backend: &Backend, pk: &IbbsPublicKey) -> Result<()> {
    let frame = Frame::new(MsgType::Upk, payload::encode_upk(backend, pk));
    fs::write(path, frame.encode())?;
    Ok(())
}

pub fn load_upk(path: &Path, backend: &Backend) -> Result<IbbsPublicKey> {
    let bytes = fs::read(path)?;
    let (frame, _) = Frame::decode(&bytes)?;
    if frame.msg_type != MsgType::Upk {
        return Err(WireError::Protocol {
            expected: "UPK",
            got: frame.msg_type.name(),
        });
    }
    payload::decode_upk(backend, &frame.payload)
}

/// Signature layout: magic "IBBS", version, mode byte, n as u16 BE, then
/// c~_0 and c~_1 packed ternary and r~_0, r~_1 fixed-width big-endian.
pub fn encode_signature(backend: &Backend, mode: IbbsMode, sig: &BlindSignature) -> Vec<u8> {
    let n = backend.n();
    let mut out = Vec::new();
    out.extend_from_slice(&SIG_MAGIC);
    out.push(SIG_VERSION);
    out.push(match mode {
        IbbsMode::Paper => 0x00,
        IbbsMode::Otter => 0x01,
    });
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.extend_from_slice(&csi_ibbs_core::codec::pack_ternary(
        sig.c_tilde[0].entries(),
    ));
    out.extend_from_slice(&csi_ibbs_core::codec::pack_ternary(
        sig.c_tilde[1].entries(),
    ));
    let w = backend.exponent_width();
    for b in 0..2 {
        for &e in sig.r_tilde[b].entries() {
            write_be(&mut out, e, w);
        }
    }
    out
}

pub fn decode_signature(backend: &Backend, bytes: &[u8]) -> Result<(IbbsMode, BlindSignature)> {
    if bytes.len() < SIG_HEADER_LEN {
        return Err(WireError::Truncated);
    }
    if bytes[..4] != SIG_MAGIC {
        return Err(WireError::BadMagic);
    }
    if bytes[4] != SIG_VERSION {
        return Err(WireError::UnsupportedVersion(bytes[4]));
    }
    let mode = match bytes[5] {
        0x00 => IbbsMode::Paper,
        0x01 => IbbsMode::Otter,
        other => {
            return Err(WireError::Format {
                what: "signature",
                detail: format!("unknown mode byte 0x{other:02x}"),
            })
        }
    };
    let n = u16::from_be_bytes([bytes[6], bytes[7]]) as usize;
    if n != backend.n() {
        return Err(WireError::Format {
            what: "signature",
            detail: format!("signature n = {n}, parameters n = {}", backend.n()),
        });
    }
    let tw = n.div_ceil(4);
    let w = backend.exponent_width();
    let need = SIG_HEADER_LEN + 2 * tw + 2 * n * w;
    if bytes.len() != need {
        return Err(WireError::Format {
            what: "signature",
            detail: format!("expected {need} bytes, found {}", bytes.len()),
        });
    }
    let body = &bytes[SIG_HEADER_LEN..];
    let c0 = csi_ibbs_core::codec::unpack_ternary(&body[..tw], n)?;
    let c1 = csi_ibbs_core::codec::unpack_ternary(&body[tw..2 * tw], n)?;
    let mut r = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut off = 2 * tw;
    for side in &mut r {
        for _ in 0..n {
            side.push(read_be(&body[off..], w)?);
            off += w;
        }
    }
    let nmod = backend.modulus();
    Ok((
        mode,
        BlindSignature {
            c_tilde: [c0, c1],
            r_tilde: [
                ExponentVec::new(r[0].clone(), nmod)?,
                ExponentVec::new(r[1].clone(), nmod)?,
            ],
        },
    ))
}

pub fn save_signature(
    path: &Path,
    backend: &Backend,
    mode: IbbsMode,
    sig: &BlindSignature,
) -> Result<()> {
    fs::write(path, encode_signature(backend, mode, sig))?;
    Ok(())
}

pub fn load_signature(path: &Path, backend: &Backend) -> Result<(IbbsMode, BlindSignature)> {
    decode_signature(backend, &fs::read(path)?)
}
