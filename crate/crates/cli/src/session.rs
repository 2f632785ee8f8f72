//! Session runners driving the protocol state machines over a transport.
//!
//! Blind-signing wire flow per attempt: RHO_S1 from the signer, RHO_U from
//! the user, RHO_S2 from the signer. On rejection the user asks for another
//! attempt with an ERROR frame carrying the retry code; on success it simply
//! closes. The message m never leaves the user process: the only thing the
//! signer receives that depends on it is the blinded challenge c*.

use rand::RngCore;

use csi_ibbs_core::ibbs::{
    ibbs_s1, ibbs_s2, ibbs_u1, ibbs_u2, BlindSignature, IbbsParams, IbbsPublicKey, IbbsUserKeys,
    U2Outcome,
};
use csi_ibbs_core::ibid::{
    ibid_challenge, ibid_prove_commit, ibid_respond, ibid_verify, IbidParams, IbidUserKey,
};
use csi_ibbs_core::Backend;

use crate::error::{Result, WireError};
use crate::frame::{Frame, MsgType};
use crate::payload::{self, ErrorCode};
use crate::translog::{Direction, TranscriptLog};
use crate::transport::Transport;

/// Transport wrapper that mirrors traffic into an optional transcript log.
pub struct SessionIo<'a> {
    transport: &'a mut dyn Transport,
    log: Option<&'a TranscriptLog>,
}

impl<'a> SessionIo<'a> {
    pub fn new(transport: &'a mut dyn Transport, log: Option<&'a TranscriptLog>) -> Self {
        SessionIo { transport, log }
    }

    fn send(&mut self, frame: &Frame) -> Result<()> {
        if let Some(log) = self.log {
            log.record(Direction::Send, frame);
        }
        self.transport.send(frame)
    }

    fn recv(&mut self) -> Result<Frame> {
        let frame = self.transport.recv()?;
        if let Some(log) = self.log {
            log.record(Direction::Recv, &frame);
        }
        Ok(frame)
    }

    fn expect(&mut self, expected: MsgType) -> Result<Frame> {
        let frame = self.recv()?;
        if frame.msg_type == expected {
            return Ok(frame);
        }
        if frame.msg_type == MsgType::Error {
            let (code, note) = payload::decode_error(&frame.payload);
            return Err(WireError::Format {
                what: "peer error",
                detail: format!("{code:?}: {note}"),
            });
        }
        let _ = self.send(&Frame::new(
            MsgType::Error,
            payload::encode_error(ErrorCode::Protocol, "unexpected message"),
        ));
        Err(WireError::Protocol {
            expected: expected.name(),
            got: frame.msg_type.name(),
        })
    }
}

/// Signer endpoint: serves blinded-signing attempts until the user closes.
/// Returns the number of attempts served.
pub fn run_blind_signer(
    io: &mut SessionIo,
    backend: &Backend,
    params: &IbbsParams,
    keys: &IbbsUserKeys,
    max_attempts: u32,
    rng: &mut impl RngCore,
) -> Result<u32> {
    for attempt in 1..=max_attempts {
        let (commit, session) = ibbs_s1(backend, params, keys, rng)?;
        io.send(&Frame::new(
            MsgType::RhoS1,
            payload::encode_rho_s1(backend, &commit),
        ))?;
        let frame = io.expect(MsgType::RhoU)?;
        let c_star = payload::decode_rho_u(backend, &frame.payload)?;
        let resp = ibbs_s2(backend, params, session, keys, &c_star)?;
        io.send(&Frame::new(
            MsgType::RhoS2,
            payload::encode_rho_s2(backend, &resp),
        ))?;
        match io.recv() {
            Err(WireError::PeerClosed) => return Ok(attempt),
            Ok(frame) if frame.msg_type == MsgType::Error => {
                let (code, _) = payload::decode_error(&frame.payload);
                match code {
                    ErrorCode::Retry => continue,
                    _ => {
                        return Err(WireError::Protocol {
                            expected: "ERROR(retry) or close",
                            got: "ERROR(other)",
                        })
                    }
                }
            }
            Ok(frame) => {
                return Err(WireError::Protocol {
                    expected: "ERROR(retry) or close",
                    got: frame.msg_type.name(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Err(WireError::RetryLimitExceeded {
        attempts: max_attempts,
    })
}

/// User endpoint: obtains a signature or exhausts the retry budget.
pub fn run_blind_user(
    io: &mut SessionIo,
    backend: &Backend,
    params: &IbbsParams,
    pk: &IbbsPublicKey,
    id: &[u8],
    message: &[u8],
    retry_limit: u32,
    rng: &mut impl RngCore,
) -> Result<(BlindSignature, u32)> {
    let mut last_mismatches = Vec::new();
    for attempt in 1..=retry_limit {
        let frame = io.expect(MsgType::RhoS1)?;
        let commit = payload::decode_rho_s1(backend, &frame.payload)?;
        let (c_star, session) = ibbs_u1(backend, params, &commit, message, rng)?;
        io.send(&Frame::new(MsgType::RhoU, payload::encode_rho_u(&c_star)))?;
        let frame = io.expect(MsgType::RhoS2)?;
        let resp = payload::decode_rho_s2(backend, &frame.payload)?;
        match ibbs_u2(backend, params, pk, id, session, &resp)? {
            U2Outcome::Signature { sig, .. } => return Ok((sig, attempt)),
            U2Outcome::Rejected { mismatches, .. } => {
                last_mismatches = mismatches;
                if attempt < retry_limit {
                    io.send(&Frame::new(
                        MsgType::Error,
                        payload::encode_error(ErrorCode::Retry, "attempt rejected"),
                    ))?;
                }
            }
        }
    }
    Err(WireError::SessionRejected {
        attempts: retry_limit,
        mismatches: last_mismatches,
    })
}

pub fn run_ibid_prover(
    io: &mut SessionIo,
    backend: &Backend,
    params: &IbidParams,
    usk: &IbidUserKey,
    rng: &mut impl RngCore,
) -> Result<()> {
    let (commit, state) = ibid_prove_commit(backend, params, usk, rng)?;
    io.send(&Frame::new(
        MsgType::IdCommit,
        payload::encode_id_commit(backend, &commit),
    ))?;
    let frame = io.expect(MsgType::IdChallenge)?;
    let v = payload::decode_id_challenge(backend, &frame.payload)?;
    let z = ibid_respond(backend, state, usk, &v)?;
    io.send(&Frame::new(
        MsgType::IdResponse,
        payload::encode_id_response(backend, &z),
    ))?;
    Ok(())
}

pub fn run_ibid_verifier(
    io: &mut SessionIo,
    backend: &Backend,
    params: &IbidParams,
    id: &[u8],
    rng: &mut impl RngCore,
) -> Result<bool> {
    let frame = io.expect(MsgType::IdCommit)?;
    let commit = payload::decode_id_commit(backend, &frame.payload)?;
    let v = ibid_challenge(params.mode, backend.n(), rng);
    io.send(&Frame::new(
        MsgType::IdChallenge,
        payload::encode_id_challenge(&v),
    ))?;
    let frame = io.expect(MsgType::IdResponse)?;
    let z = payload::decode_id_response(backend, &frame.payload)?;
    Ok(ibid_verify(backend, params, id, &commit, &v, &z)?)
}

/// Full blind-signing interaction over an in-process pipe pair, signer on a
/// scoped thread. Returns the signature and the user-side attempt count.
#[allow(clippy::too_many_arguments)]
pub fn run_blind_session_in_process(
    backend: &Backend,
    params: &IbbsParams,
    keys: &IbbsUserKeys,
    id: &[u8],
    message: &[u8],
    retry_limit: u32,
    seed: u64,
    signer_log: Option<&TranscriptLog>,
    user_log: Option<&TranscriptLog>,
) -> Result<(BlindSignature, u32)> {
    use rand::SeedableRng;
    let (signer_end, user_end) = crate::transport::pipe_pair();
    std::thread::scope(|scope| {
        let signer = scope.spawn(move || {
            let mut transport = crate::transport::StreamTransport::new(signer_end);
            let mut io = SessionIo::new(&mut transport, signer_log);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            run_blind_signer(&mut io, backend, params, keys, retry_limit, &mut rng)
        });
        let mut transport = crate::transport::StreamTransport::new(user_end);
        let mut io = SessionIo::new(&mut transport, user_log);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
        let user_result = run_blind_user(
            &mut io,
            backend,
            params,
            &keys.pk,
            id,
            message,
            retry_limit,
            &mut rng,
        );
        drop(io);
        drop(transport); // EOF tells the signer the session is over
        let signer_result = signer.join().expect("signer thread");
        let (sig, attempts) = user_result?;
        signer_result?;
        Ok((sig, attempts))
    })
}

/// One identification round over an in-process pipe pair.
pub fn run_ibid_session_in_process(
    backend: &Backend,
    params: &IbidParams,
    usk: &IbidUserKey,
    id: &[u8],
    seed: u64,
    log: Option<&TranscriptLog>,
) -> Result<bool> {
    use rand::SeedableRng;
    let (prover_end, verifier_end) = crate::transport::pipe_pair();
    std::thread::scope(|scope| {
        let prover = scope.spawn(move || {
            let mut transport = crate::transport::StreamTransport::new(prover_end);
            let mut io = SessionIo::new(&mut transport, None);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            run_ibid_prover(&mut io, backend, params, usk, &mut rng)
        });
        let mut transport = crate::transport::StreamTransport::new(verifier_end);
        let mut io = SessionIo::new(&mut transport, log);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
        let verdict = run_ibid_verifier(&mut io, backend, params, id, &mut rng);
        let prover_result = prover.join().expect("prover thread");
        prover_result?;
        verdict
    })
}
