//! Wire codecs, session runners, file formats and the `ibbs` command-line
//! tool for the csi-ibbs stack.

pub mod cli;
pub mod error;
pub mod files;
pub mod frame;
pub mod payload;
pub mod session;
pub mod translog;
pub mod transport;

pub use error::{exit_code, Result, WireError};
pub use frame::{Frame, MsgType};
