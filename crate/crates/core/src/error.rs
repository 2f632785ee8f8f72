use alloc::string::String;
use core::fmt;

/// Errors surfaced by the protocol stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A modulus that must be odd was even.
    EvenModulus(u64),
    /// Field prime failed the primality or shape check.
    BadFieldPrime { p: u64, reason: &'static str },
    /// Requested isogeny degree is not one of the configured primes.
    UnsupportedEll(u64),
    /// No point of the required order was found within the retry budget.
    PointSearchExhausted { ell: u64 },
    /// Orbit walk did not close within the configured bound.
    OrbitBoundExceeded { bound: usize },
    /// Orbit length disagrees with the quadratic-form class number.
    ClassNumberMismatch { orbit: u64, bqf: u64 },
    /// The curve is not an element of the enumerated orbit.
    CurveNotInOrbit(u64),
    /// Operation is only defined on the csidh backend.
    CsidhOnly(&'static str),
    /// Sign argument outside {-1, 1}.
    InvalidSign(i8),
    /// Vector lengths disagree.
    LengthMismatch { expected: usize, got: usize },
    /// Discriminant not negative or not 0/1 mod 4.
    InvalidDiscriminant(i64),
    /// No (super-)exceptional set of the requested size exists or was found.
    SetUnsatisfiable { n: usize, modulus: u64 },
    /// Exceptional set failed validation against the parameter modulus.
    SetInvalid,
    /// Extractor needs transcripts with different challenges.
    IdenticalChallenges,
    /// Extractor needs transcripts over the same commitment.
    CommitmentMismatch,
    /// Master secret sampled or supplied as zero where forbidden.
    ZeroMasterSecret,
    /// Signing did not produce a signature within the attempt limit.
    RetryLimitExceeded { attempts: u32 },
    /// Blinding reconstruction hit a zero challenge entry; that index's
    /// blinding sign is not determined by the signature.
    ZeroChallengeEntry { index: usize },
    /// A 2-bit ternary code was 11 or padding bits were set.
    InvalidTernaryCode,
    /// Byte input shorter than the fixed-width layout requires.
    TruncatedInput,
    /// Element does not reduce into the expected range.
    OutOfRange { value: u64, modulus: u64 },
    /// Keys or parameters built for one mode used with another.
    ModeMismatch {
        expected: &'static str,
        got: &'static str,
    },
    /// Unknown security level requested from the size calculator.
    UnknownLevel(u32),
    /// Catch-all for malformed protocol inputs.
    Malformed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EvenModulus(n) => write!(f, "modulus {n} must be odd"),
            Error::BadFieldPrime { p, reason } => write!(f, "bad field prime {p}: {reason}"),
            Error::UnsupportedEll(l) => write!(f, "unsupported isogeny degree {l}"),
            Error::PointSearchExhausted { ell } => {
                write!(f, "no point of order {ell} found within the retry budget")
            }
            Error::OrbitBoundExceeded { bound } => {
                write!(
                    f,
                    "orbit did not close within {bound} steps (generator convention?)"
                )
            }
            Error::ClassNumberMismatch { orbit, bqf } => {
                write!(f, "orbit length {orbit} != class number {bqf}")
            }
            Error::CurveNotInOrbit(a) => write!(f, "curve {a} is not in the orbit"),
            Error::CsidhOnly(op) => write!(f, "{op} is only defined on the csidh backend"),
            Error::InvalidSign(s) => write!(f, "invalid sign {s}, expected -1 or 1"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::InvalidDiscriminant(d) => write!(f, "invalid discriminant {d}"),
            Error::SetUnsatisfiable { n, modulus } => {
                write!(f, "no exceptional set of size {n} modulo {modulus}")
            }
            Error::SetInvalid => write!(f, "exceptional set failed validation"),
            Error::IdenticalChallenges => write!(f, "transcripts carry identical challenges"),
            Error::CommitmentMismatch => write!(f, "transcripts carry different commitments"),
            Error::ZeroMasterSecret => write!(f, "master secret must be nonzero"),
            Error::RetryLimitExceeded { attempts } => {
                write!(f, "no signature after {attempts} attempts")
            }
            Error::ZeroChallengeEntry { index } => {
                write!(
                    f,
                    "challenge entry {index} is zero; blinding sign undetermined"
                )
            }
            Error::InvalidTernaryCode => write!(f, "invalid packed ternary code"),
            Error::TruncatedInput => write!(f, "input truncated"),
            Error::OutOfRange { value, modulus } => {
                write!(f, "value {value} out of range for modulus {modulus}")
            }
            Error::ModeMismatch { expected, got } => {
                write!(f, "mode mismatch: expected {expected}, got {got}")
            }
            Error::UnknownLevel(l) => write!(f, "unknown security level {l}"),
            Error::Malformed(m) => write!(f, "malformed input: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
