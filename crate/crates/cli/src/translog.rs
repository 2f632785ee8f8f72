//! Append-only transcript logging: one JSON object per frame event with a
//! payload digest; full payloads only on request. Key material never crosses
//! the wire, so it can never appear here.

use std::io::Write;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::frame::Frame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Send,
    Recv,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogEntry {
    /// Milliseconds since the Unix epoch.
    pub ts_ms: u128,
    pub dir: Direction,
    pub msg_type: &'static str,
    pub len: usize,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

pub struct TranscriptLog {
    entries: Mutex<Vec<LogEntry>>,
    include_payloads: bool,
}

impl TranscriptLog {
    pub fn new(include_payloads: bool) -> Self {
        TranscriptLog {
            entries: Mutex::new(Vec::new()),
            include_payloads,
        }
    }

    pub fn record(&self, dir: Direction, frame: &Frame) {
        let digest = hex::encode(Sha256::digest(&frame.payload));
        let entry = LogEntry {
            ts_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            dir,
            msg_type: frame.msg_type.name(),
            len: frame.payload.len(),
            digest: format!("sha256:{digest}"),
            payload: self.include_payloads.then(|| hex::encode(&frame.payload)),
        };
        self.entries.lock().expect("log lock").push(entry);
    }

    pub fn entries(&self) -> Vec<LogEntry> {
        self.entries.lock().expect("log lock").clone()
    }

    /// Line-delimited JSON dump in arrival order.
    pub fn write_jsonl(&self, out: &mut impl Write) -> std::io::Result<()> {
        for entry in self.entries.lock().expect("log lock").iter() {
            serde_json::to_writer(&mut *out, entry)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}
