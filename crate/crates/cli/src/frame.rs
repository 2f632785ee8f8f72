//! Length-prefixed binary frames shared by the wire protocol and the file
//! formats.
//!
//! Layout: magic "CIBS" (4 bytes), version (1), msg_type (1), payload length
//! as big-endian u32 (4), payload.

use std::io::{Read, Write};

use crate::error::WireError;

pub const MAGIC: [u8; 4] = *b"CIBS";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 10;

/// Frames larger than this are treated as malformed rather than allocated.
pub const MAX_PAYLOAD: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum MsgType {
    Params = 0x01,
    Upk = 0x02,
    RhoS1 = 0x10,
    RhoU = 0x11,
    RhoS2 = 0x12,
    Sig = 0x13,
    IdCommit = 0x20,
    IdChallenge = 0x21,
    IdResponse = 0x22,
    Error = 0xFF,
}

impl MsgType {
    pub fn from_byte(b: u8) -> Result<MsgType, WireError> {
        Ok(match b {
            0x01 => MsgType::Params,
            0x02 => MsgType::Upk,
            0x10 => MsgType::RhoS1,
            0x11 => MsgType::RhoU,
            0x12 => MsgType::RhoS2,
            0x13 => MsgType::Sig,
            0x20 => MsgType::IdCommit,
            0x21 => MsgType::IdChallenge,
            0x22 => MsgType::IdResponse,
            0xFF => MsgType::Error,
            other => return Err(WireError::UnknownMsgType(other)),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            MsgType::Params => "PARAMS",
            MsgType::Upk => "UPK",
            MsgType::RhoS1 => "RHO_S1",
            MsgType::RhoU => "RHO_U",
            MsgType::RhoS2 => "RHO_S2",
            MsgType::Sig => "SIG",
            MsgType::IdCommit => "ID_COMMIT",
            MsgType::IdChallenge => "ID_CHALLENGE",
            MsgType::IdResponse => "ID_RESPONSE",
            MsgType::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub msg_type: MsgType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(msg_type: MsgType, payload: Vec<u8>) -> Frame {
        Frame { msg_type, payload }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.msg_type as u8);
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Decode one frame from the front of `bytes`; returns the frame and the
    /// number of bytes consumed.
    pub fn decode(bytes: &[u8]) -> Result<(Frame, usize), WireError> {
        if bytes.len() < HEADER_LEN {
            return Err(WireError::Truncated);
        }
        if bytes[..4] != MAGIC {
            return Err(WireError::BadMagic);
        }
        if bytes[4] != VERSION {
            return Err(WireError::UnsupportedVersion(bytes[4]));
        }
        let msg_type = MsgType::from_byte(bytes[5])?;
        let len = u32::from_be_bytes([bytes[6], bytes[7], bytes[8], bytes[9]]) as usize;
        if len > MAX_PAYLOAD {
            return Err(WireError::Oversized(len));
        }
        if bytes.len() < HEADER_LEN + len {
            return Err(WireError::Truncated);
        }
        Ok((
            Frame {
                msg_type,
                payload: bytes[HEADER_LEN..HEADER_LEN + len].to_vec(),
            },
            HEADER_LEN + len,
        ))
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<(), WireError> {
        w.write_all(&self.encode())?;
        w.flush()?;
        Ok(())
    }

    /// Blocking read of exactly one frame. EOF before the first header byte
    /// reports [`WireError::PeerClosed`]; EOF mid-frame is a truncation.
    pub fn read_from(r: &mut impl Read) -> Result<Frame, WireError> {
        let mut header = [0u8; HEADER_LEN];
        let mut got = 0;
        while got < HEADER_LEN {
            let k = r.read(&mut header[got..])?;
            if k == 0 {
                return if got == 0 {
                    Err(WireError::PeerClosed)
                } else {
                    Err(WireError::Truncated)
                };
            }
            got += k;
        }
        if header[..4] != MAGIC {
            return Err(WireError::BadMagic);
        }
        if header[4] != VERSION {
            return Err(WireError::UnsupportedVersion(header[4]));
        }
        let msg_type = MsgType::from_byte(header[5])?;
        let len = u32::from_be_bytes([header[6], header[7], header[8], header[9]]) as usize;
        if len > MAX_PAYLOAD {
            return Err(WireError::Oversized(len));
        }
        let mut payload = vec![0u8; len];
        let mut got = 0;
        while got < len {
            let k = r.read(&mut payload[got..])?;
            if k == 0 {
                return Err(WireError::Truncated);
            }
            got += k;
        }
        Ok(Frame { msg_type, payload })
    }
}
