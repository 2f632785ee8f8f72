use thiserror::Error;

/// Process exit codes, one per error class.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const FORMAT: i32 = 4;
    pub const VERIFY_FAILED: i32 = 5;
    pub const PROTOCOL: i32 = 6;
    pub const RETRY_LIMIT: i32 = 7;
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error("bad frame magic")]
    BadMagic,
    #[error("unsupported frame version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown message type 0x{0:02x}")]
    UnknownMsgType(u8),
    #[error("frame truncated")]
    Truncated,
    #[error("frame payload of {0} bytes exceeds the limit")]
    Oversized(usize),
    #[error("peer closed the connection")]
    PeerClosed,
    #[error("protocol violation: expected {expected}, got {got}")]
    Protocol {
        expected: &'static str,
        got: &'static str,
    },
    #[error("no signature after {attempts} attempts")]
    RetryLimitExceeded { attempts: u32 },
    #[error("session rejected after {attempts} attempts; {} mismatched indices in the last attempt", mismatches.len())]
    SessionRejected {
        attempts: u32,
        /// (side, index) pairs where the last recomputation disagreed.
        mismatches: Vec<(u8, usize)>,
    },
    #[error("signature did not verify")]
    VerificationFailed,
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
    #[error(transparent)]
    Core(#[from] csi_ibbs_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl WireError {
    pub fn exit_code(&self) -> i32 {
        match self {
            WireError::Io(_) => exit_code::IO,
            WireError::VerificationFailed => exit_code::VERIFY_FAILED,
            WireError::Protocol { .. } | WireError::PeerClosed => exit_code::PROTOCOL,
            WireError::RetryLimitExceeded { .. } | WireError::SessionRejected { .. } => {
                exit_code::RETRY_LIMIT
            }
            WireError::Core(csi_ibbs_core::Error::RetryLimitExceeded { .. }) => {
                exit_code::RETRY_LIMIT
            }
            _ => exit_code::FORMAT,
        }
    }
}

pub type Result<T> = std::result::Result<T, WireError>;
