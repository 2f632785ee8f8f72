//! Command-line interface: setup, extract, sign, verify, bench, demo and
//! id-demo subcommands with one exit code per error class.

use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};

use csi_ibbs_core::ibbs::{ibbs_extract, ibbs_setup_with_policy, ibbs_verify, IbbsMode, SetPolicy};
use csi_ibbs_core::ibid::{ibid_extract, ibid_setup, IbidMode};
use csi_ibbs_core::report::{known_levels, op_count_report, size_report_level};
use csi_ibbs_core::Backend;

use crate::error::{exit_code, Result, WireError};
use crate::files;
use crate::session::{
    run_blind_session_in_process, run_blind_signer, run_blind_user, run_ibid_session_in_process,
    SessionIo,
};
use crate::translog::TranscriptLog;
use crate::transport::tcp_transport;

/// Default TCP endpoint; overridable through this environment variable only.
pub const ADDR_ENV: &str = "IBBS_ADDR";
const DEFAULT_ADDR: &str = "127.0.0.1:4419";

#[derive(Parser, Debug)]
#[command(
    name = "ibbs",
    version,
    about = "identity-based blind signatures over a commutative group action"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Toy,
    Csidh,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Otter,
    Paper,
}

impl From<ModeArg> for IbbsMode {
    fn from(m: ModeArg) -> IbbsMode {
        match m {
            ModeArg::Otter => IbbsMode::Otter,
            ModeArg::Paper => IbbsMode::Paper,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetPolicyArg {
    Validated,
    Structural,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdModeArg {
    Binary,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RoleArg {
    Signer,
    User,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransportArg {
    Pipe,
    Tcp,
}

#[derive(Args, Debug)]
struct BackendOpts {
    /// Group-action backend.
    #[arg(long, value_enum, default_value = "toy")]
    backend: BackendArg,
    /// Vector length / security parameter.
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Toy-backend modulus (odd).
    #[arg(long, default_value_t = 101)]
    modulus: u64,
}

impl BackendOpts {
    fn build(&self) -> Result<Backend> {
        Ok(match self.backend {
            BackendArg::Toy => Backend::toy(self.n, self.modulus)?,
            BackendArg::Csidh => Backend::csidh(self.n)?,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate parameters and the master secret key.
    Setup {
        #[command(flatten)]
        backend: BackendOpts,
        #[arg(long, value_enum, default_value = "otter")]
        mode: ModeArg,
        /// Fall back to an unvalidated structural set when no
        /// super-exceptional set exists for the class number.
        #[arg(long, value_enum, default_value = "validated")]
        set_policy: SetPolicyArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for params.cibs and msk.toml.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Derive a user key pair from an identity.
    Extract {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        msk: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_usk: PathBuf,
        #[arg(long)]
        out_upk: PathBuf,
    },
    /// Run the four-message blind-signing interaction.
    Sign {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum, default_value = "pipe")]
        transport: TransportArg,
        /// Endpoint role for the tcp transport; the pipe transport runs both.
        #[arg(long, value_enum)]
        role: Option<RoleArg>,
        #[arg(long)]
        usk: Option<PathBuf>,
        #[arg(long)]
        upk: Option<PathBuf>,
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        message_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        retry_limit: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Listen address (signer role).
        #[arg(long)]
        listen: Option<String>,
        /// Connect address (user role).
        #[arg(long)]
        connect: Option<String>,
        /// Write a transcript log (JSON lines) to this path.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Include full payload hex in the transcript log.
        #[arg(long)]
        log_payloads: bool,
    },
    /// Verify a signature file.
    Verify {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        upk: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        message_file: PathBuf,
    },
    /// Print the component-size table and measured action counts.
    Bench {
        /// Comma-separated security levels.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<u32>>,
        /// Vector lengths for the measured operation counts.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 16])]
        n: Vec<usize>,
    },
    /// Full in-process signing flow with a transcript dump.
    Demo {
        #[command(flatten)]
        backend: BackendOpts,
        #[arg(long, value_enum, default_value = "otter")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "validated")]
        set_policy: SetPolicyArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        log_payloads: bool,
    },
    /// In-process identification sessions.
    IdDemo {
        #[command(flatten)]
        backend: BackendOpts,
        #[arg(long, value_enum, default_value = "binary")]
        mode: IdModeArg,
        #[arg(long, default_value_t = 20)]
        rounds: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| rand::rngs::OsRng.next_u64())
}

fn rng_from(seed: u64) -> rand_chacha::ChaCha12Rng {
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Setup {
            backend,
            mode,
            set_policy,
            seed,
            out_dir,
        } => {
            let backend = backend.build()?;
            let seed = seed_or_entropy(seed);
            let mut rng = rng_from(seed);
            let policy = match set_policy {
                SetPolicyArg::Validated => SetPolicy::Validated,
                SetPolicyArg::Structural => SetPolicy::Structural,
            };
            let (params, msk) = ibbs_setup_with_policy(&backend, mode.into(), policy, &mut rng)?;
            std::fs::create_dir_all(&out_dir)?;
            let params_path = out_dir.join("params.cibs");
            let msk_path = out_dir.join("msk.toml");
            files::save_params(&params_path, &backend, &params)?;
            files::save_msk(&msk_path, &msk)?;
            println!(
                "setup: backend={} n={} N={} mode={} set_valid={} seed={}",
                match backend.kind() {
                    csi_ibbs_core::BackendKind::Toy => "toy",
                    csi_ibbs_core::BackendKind::Csidh => "csidh",
                },
                backend.n(),
                backend.modulus(),
                params.mode.as_str(),
                params.set_valid,
                seed,
            );
            println!("wrote {} and {}", params_path.display(), msk_path.display());
            Ok(exit_code::OK)
        }
        Command::Extract {
            params,
            msk,
            id,
            seed,
            out_usk,
            out_upk,
        } => {
            let (backend, params) = files::load_params(&params)?;
            let msk = files::load_msk(&msk)?;
            let seed = seed_or_entropy(seed);
            let mut rng = rng_from(seed);
            let keys = ibbs_extract(&backend, &params, &msk, id.as_bytes(), &mut rng)?;
            files::save_usk(&out_usk, &id, params.mode, &keys)?;
            files::save_upk(&out_upk, &backend, &keys.pk)?;
            println!(
                "extract: id={id:?} delta-hidden pk-curves={} seed={seed}",
                2 * backend.n()
            );
            println!("wrote {} and {}", out_usk.display(), out_upk.display());
            Ok(exit_code::OK)
        }
        Command::Sign {
            params,
            transport,
            role,
            usk,
            upk,
            id,
            message_file,
            out,
            retry_limit,
            seed,
            listen,
            connect,
            log,
            log_payloads,
        } => {
            let (backend, params) = files::load_params(&params)?;
            let seed = seed_or_entropy(seed);
            let limit = retry_limit.unwrap_or(params.retry_limit);
            let translog = TranscriptLog::new(log_payloads);
            let outcome = match transport {
                TransportArg::Pipe => {
                    let usk = usk.ok_or(usage("--usk is required for the pipe transport"))?;
                    let (id, keys) = files::load_usk(&usk, &backend)?;
                    let message = std::fs::read(message_file.ok_or(usage("--message-file"))?)?;
                    let (sig, attempts) = run_blind_session_in_process(
                        &backend,
                        &params,
                        &keys,
                        id.as_bytes(),
                        &message,
                        limit,
                        seed,
                        None,
                        Some(&translog),
                    )?;
                    if !ibbs_verify(&backend, &params, &keys.pk, id.as_bytes(), &sig, &message)? {
                        return Err(WireError::VerificationFailed);
                    }
                    let out = out.ok_or(usage("--out"))?;
                    files::save_signature(&out, &backend, params.mode, &sig)?;
                    println!("sign: attempts={attempts} wrote {}", out.display());
                    Ok(exit_code::OK)
                }
                TransportArg::Tcp => match role.ok_or(usage("--role for tcp"))? {
                    RoleArg::Signer => {
                        let usk = usk.ok_or(usage("--usk"))?;
                        let (_, keys) = files::load_usk(&usk, &backend)?;
                        let addr = listen.unwrap_or_else(default_addr);
                        let listener = TcpListener::bind(&addr)?;
                        println!("listening on {}", listener.local_addr()?);
                        let (stream, peer) = listener.accept()?;
                        println!("serving {peer}");
                        let mut transport = tcp_transport(stream);
                        let mut io = SessionIo::new(&mut transport, Some(&translog));
                        let mut rng = rng_from(seed);
                        let attempts =
                            run_blind_signer(&mut io, &backend, &params, &keys, limit, &mut rng)?;
                        println!("sign: served {attempts} attempt(s)");
                        Ok(exit_code::OK)
                    }
                    RoleArg::User => {
                        let upk = upk.ok_or(usage("--upk"))?;
                        let pk = files::load_upk(&upk, &backend)?;
                        let id = id.ok_or(usage("--id"))?;
                        let message = std::fs::read(message_file.ok_or(usage("--message-file"))?)?;
                        let addr = connect.unwrap_or_else(default_addr);
                        let stream = TcpStream::connect(&addr)?;
                        let mut transport = tcp_transport(stream);
                        let mut io = SessionIo::new(&mut transport, Some(&translog));
                        let mut rng = rng_from(seed);
                        let (sig, attempts) = run_blind_user(
                            &mut io,
                            &backend,
                            &params,
                            &pk,
                            id.as_bytes(),
                            &message,
                            limit,
                            &mut rng,
                        )?;
                        drop(io);
                        drop(transport);
                        if !ibbs_verify(&backend, &params, &pk, id.as_bytes(), &sig, &message)? {
                            return Err(WireError::VerificationFailed);
                        }
                        let out = out.ok_or(usage("--out"))?;
                        files::save_signature(&out, &backend, params.mode, &sig)?;
                        println!("sign: attempts={attempts} wrote {}", out.display());
                        Ok(exit_code::OK)
                    }
                },
            };
            if let Some(path) = log {
                let mut f = std::fs::File::create(path)?;
                translog.write_jsonl(&mut f)?;
            }
            outcome
        }
        Command::Verify {
            params,
            upk,
            id,
            sig,
            message_file,
        } => {
            let (backend, params) = files::load_params(&params)?;
            let pk = files::load_upk(&upk, &backend)?;
            let (mode, sig) = files::load_signature(&sig, &backend)?;
            if mode != params.mode {
                return Err(WireError::Format {
                    what: "signature",
                    detail: format!(
                        "signature mode {} does not match parameter mode {}",
                        mode.as_str(),
                        params.mode.as_str()
                    ),
                });
            }
            let message = std::fs::read(&message_file)?;
            if ibbs_verify(&backend, &params, &pk, id.as_bytes(), &sig, &message)? {
                println!("verification: OK");
                Ok(exit_code::OK)
            } else {
                println!("verification: FAILED");
                Ok(exit_code::VERIFY_FAILED)
            }
        }
        Command::Bench { levels, n } => {
            let levels = levels.unwrap_or_else(known_levels);
            for level in levels {
                let row = size_report_level(level)?;
                println!(
                    "level={} p_bits={} n={} MPK={} MSK={} USK={} UPK={} SIG={} ID={}",
                    level,
                    row.p_bits,
                    row.n,
                    row.mpk_bits,
                    row.msk_bits,
                    row.usk_bits,
                    row.upk_bits,
                    row.sig_bits,
                    row.id_bits
                );
            }
            println!("note: exponent sizes follow the ceil(log2 p) table convention (class numbers near sqrt(p) would halve them)");
            for n in n {
                for (name, backend) in [
                    ("toy", Backend::toy(n, 101)?),
                    ("csidh", Backend::csidh(n)?),
                ] {
                    let mut rng = rng_from(0xbe7c);
                    let start = Instant::now();
                    let report = op_count_report(&backend, IbbsMode::Otter, &mut rng)?;
                    let elapsed = start.elapsed();
                    println!(
                        "op-counts backend={name} n={n}: setup={} extract={} s1={} u1={} s2={} u2={} verify={} profile_2n={} elapsed_us={}",
                        report.setup,
                        report.extract,
                        report.s1,
                        report.u1,
                        report.s2,
                        report.u2,
                        report.verify,
                        report.matches_2n_profile(),
                        elapsed.as_micros(),
                    );
                }
            }
            Ok(exit_code::OK)
        }
        Command::Demo {
            backend,
            mode,
            set_policy,
            seed,
            log_payloads,
        } => {
            let backend = backend.build()?;
            let seed = seed_or_entropy(seed);
            let mut rng = rng_from(seed);
            let policy = match set_policy {
                SetPolicyArg::Validated => SetPolicy::Validated,
                SetPolicyArg::Structural => SetPolicy::Structural,
            };
            let mode: IbbsMode = mode.into();
            println!(
                "demo: backend={} n={} mode={} seed={seed}",
                match backend.kind() {
                    csi_ibbs_core::BackendKind::Toy => "toy",
                    csi_ibbs_core::BackendKind::Csidh => "csidh",
                },
                backend.n(),
                mode.as_str(),
            );
            let (params, msk) = ibbs_setup_with_policy(&backend, mode, policy, &mut rng)?;
            if !params.set_valid {
                println!("note: structural set in use; it does not validate as super-exceptional");
            }
            let id = "demo@example.org";
            let keys = ibbs_extract(&backend, &params, &msk, id.as_bytes(), &mut rng)?;
            let message = b"demo message";
            let limit = params.retry_limit;
            let log = TranscriptLog::new(log_payloads);
            let (sig, attempts) = run_blind_session_in_process(
                &backend,
                &params,
                &keys,
                id.as_bytes(),
                message,
                limit,
                seed,
                None,
                Some(&log),
            )?;
            println!("session: attempts={attempts}");
            let ok = ibbs_verify(&backend, &params, &keys.pk, id.as_bytes(), &sig, message)?;
            println!("verify: {}", if ok { "OK" } else { "FAILED" });
            println!("transcript:");
            let mut stdout = std::io::stdout();
            log.write_jsonl(&mut stdout)?;
            Ok(if ok {
                exit_code::OK
            } else {
                exit_code::VERIFY_FAILED
            })
        }
        Command::IdDemo {
            backend,
            mode,
            rounds,
            seed,
        } => {
            let backend = backend.build()?;
            let seed = seed_or_entropy(seed);
            let mut rng = rng_from(seed);
            let mode = match mode {
                IdModeArg::Binary => IbidMode::Binary,
                IdModeArg::Paper => IbidMode::Paper,
            };
            let (params, s) = ibid_setup(&backend, mode, &mut rng)?;
            let id = "prover@example.org";
            let usk = ibid_extract(&backend, &params, s, id.as_bytes(), &mut rng)?;
            let mut accepted = 0u32;
            for round in 0..rounds {
                let ok = run_ibid_session_in_process(
                    &backend,
                    &params,
                    &usk,
                    id.as_bytes(),
                    seed.wrapping_add(round as u64 * 2),
                    None,
                )?;
                if ok {
                    accepted += 1;
                }
            }
            println!(
                "id-demo: mode={} n={} rounds={rounds} accepted={accepted}",
                match mode {
                    IbidMode::Binary => "binary",
                    IbidMode::Paper => "paper",
                },
                backend.n(),
            );
            if mode == IbidMode::Binary && accepted != rounds {
                return Err(WireError::VerificationFailed);
            }
            if mode == IbidMode::Paper {
                println!(
                    "note: ternary challenges reject honest runs whenever v contains -1; expected rate (2/3)^n = {:.4}",
                    (2f64 / 3f64).powi(backend.n() as i32)
                );
            }
            Ok(exit_code::OK)
        }
    }
}

fn default_addr() -> String {
    std::env::var(ADDR_ENV).unwrap_or_else(|_| DEFAULT_ADDR.to_string())
}

fn usage(what: &'static str) -> WireError {
    WireError::Format {
        what: "usage",
        detail: what.to_string(),
    }
}
