use std::fs;
use std::io::{self, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qcoin_core::coinflip::crs::generate_crs;
use qcoin_core::coinflip::strategy::TapeBob;
use qcoin_core::coinflip::{run_honest, Outcome, Role, SessionState};
use qcoin_core::commitment::{ChaChaPrg, CommitParams, NaorScheme};
use qcoin_core::dualmode::{LweError, LweParams, RegevKey};
use qcoin_core::qrewind::sweep::{self, AdversaryFamily, SweepConfig};
use qcoin_core::zk::iqzk::IqzkMessage;
use qcoin_core::zk::{iqzk_run, iqzk_simulate, nizk_verify, GiInstance, NizkProof, OracleTable, PerSession, Prover, Verdict};
use qcoin_core::BitString;
use qcoin_shell::experiments::sweep_trial_passes;
use qcoin_shell::{exit, net, run_experiment, run_in_process, Experiment, ExperimentSpec, SessionReport};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Salt shared by every process that proves or verifies.
const ORACLE_SALT: &[u8] = b"qcoin";

/// Simulator rewinds allowed per coin flip.
const MAX_ATTEMPTS: usize = 1 << 12;

#[derive(Parser)]
#[command(name = "qcoin", version, about = "Coin flipping, rewinding and zero-knowledge experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run coin-flip sessions in process or across two processes.
    Coinflip(CoinflipArgs),
    /// Graph-isomorphism instances and proofs.
    #[command(subcommand)]
    Iqzk(IqzkCommand),
    /// Rewinding simulator sweeps.
    #[command(subcommand)]
    Qrewind(QrewindCommand),
    /// Dual-mode key generation.
    #[command(subcommand)]
    Dualmode(DualmodeCommand),
    /// Run a named experiment suite and write its CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Alice,
    Bob,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Alice => Role::Alice,
            RoleArg::Bob => Role::Bob,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Balanced,
    Perturbed,
}

impl From<FamilyArg> for AdversaryFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Balanced => AdversaryFamily::Balanced,
            FamilyArg::Perturbed => AdversaryFamily::Perturbed,
        }
    }
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("endpoint").required(true).args(["listen", "connect", "local"])))]
struct CoinflipArgs {
    #[arg(long, value_enum, required_unless_present = "local")]
    role: Option<RoleArg>,
    /// Accept one connection per session on this address.
    #[arg(long)]
    listen: Option<String>,
    /// Connect to a listening peer.
    #[arg(long)]
    connect: Option<String>,
    /// Run both parties in this process.
    #[arg(long)]
    local: bool,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    sessions: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum IqzkCommand {
    /// Write a random instance; isomorphic with its witness unless --no-witness.
    Instance {
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 8)]
        edges: usize,
        #[arg(long)]
        no_witness: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the protocol with real coin flips against an honest verifier and
    /// write the coins and proof.
    Prove {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a proof file; exits 0 on accept and 1 on reject.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Produce a transcript without the witness.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QrewindCommand {
    Sweep {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        qubits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FamilyArg::Perturbed)]
        family: FamilyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KeyModeArg {
    Binding,
    Hiding,
    /// A key read off coin-flip outputs.
    Coins,
}

#[derive(Subcommand)]
enum DualmodeCommand {
    Keygen {
        #[arg(long, value_enum)]
        mode: KeyModeArg,
        /// k,m,p,beta
        #[arg(long, default_value = "4,64,257,1")]
        params: String,
        /// Commitment security parameter for coin mode.
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// fairness, rewind-sweep, soundness, extraction or equivocation
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: exit::USAGE, message: message.to_string() }
}

type CmdResult = Result<i32, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coinflip(args) => coinflip(args),
        Command::Iqzk(cmd) => iqzk(cmd),
        Command::Qrewind(cmd) => qrewind(cmd),
        Command::Dualmode(cmd) => dualmode(cmd),
        Command::Experiment(args) => experiment(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("qcoin: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}

fn scheme(n: usize) -> Result<NaorScheme, Failure> {
    Ok(NaorScheme::new(CommitParams::new(n).map_err(usage)?, ChaChaPrg))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(bytes).map_err(usage),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn coinflip(args: CoinflipArgs) -> CmdResult {
    let scheme = scheme(args.n)?;
    let reports: Vec<SessionReport> = if args.local {
        (0..args.sessions).map(|i| run_in_process(&scheme, args.seed, i).0).collect()
    } else {
        let role = Role::from(args.role.expect("clap requires a role for network sessions"));
        if let Some(addr) = &args.listen {
            let listener = TcpListener::bind(addr).map_err(|e| Failure { code: exit::TRANSPORT, message: format!("{addr}: {e}") })?;
            let local = listener.local_addr().map_err(usage)?;
            println!("listening on {local}");
            io::stdout().flush().map_err(usage)?;
            net::serve(&listener, role, &scheme, args.seed, args.sessions)
        } else {
            let addr = args.connect.as_deref().expect("clap requires an endpoint");
            net::connect_all(addr, role, &scheme, args.seed, args.sessions)
        }
    };
    let mut out = io::stdout().lock();
    for (i, r) in reports.iter().enumerate() {
        writeln!(out, "session {i} {}", r.outcome).map_err(usage)?;
        if let Some(why) = &r.diagnostic {
            eprintln!("session {i}: {why}");
        }
    }
    Ok(if net::any_transport_failure(&reports) {
        exit::TRANSPORT
    } else if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        exit::ASSERTION
    } else {
        exit::PASS
    })
}

fn load_instance(path: &Path) -> Result<(GiInstance, Option<qcoin_core::zk::GiWitness>), Failure> {
    let text = String::from_utf8(read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    GiInstance::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn honest_verifier(scheme: &NaorScheme, k: usize, rng: &mut ChaCha20Rng) -> PerSession<TapeBob> {
    let len = scheme.params().expanded_len() + 1;
    PerSession((0..k).map(|_| TapeBob { tape: BitString::random(len, rng) }).collect())
}

fn iqzk(cmd: IqzkCommand) -> CmdResult {
    match cmd {
        IqzkCommand::Instance { vertices, edges, no_witness, seed, out } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let text = if no_witness {
                GiInstance::random_non_isomorphic(vertices, edges, &mut rng).map_err(usage)?.to_text(None)
            } else {
                let (x, w) = GiInstance::random_isomorphic(vertices, edges, &mut rng).map_err(usage)?;
                x.to_text(Some(&w))
            };
            write_output(Some(&out), text.as_bytes())?;
            Ok(exit::PASS)
        }
        IqzkCommand::Prove { instance, k, n, seed, out } => {
            let (x, w) = load_instance(&instance)?;
            let w = w.ok_or_else(|| usage("instance file has no witness"))?;
            let scheme = scheme(n)?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let verifier = honest_verifier(&scheme, k, &mut rng);
            let oracle = OracleTable::new(ORACLE_SALT);
            let run = iqzk_run(&scheme, &x, k, &Prover::Honest(w), &verifier, &oracle, &mut rng).map_err(usage)?;
            let Some(IqzkMessage::Proof(proof)) = run.transcript.last() else {
                return Err(Failure { code: exit::ASSERTION, message: format!("no proof: {:?}", run.verdict) });
            };
            let mut bytes = run.omega.encode();
            bytes.extend(proof.encode());
            write_output(Some(&out), &bytes)?;
            println!("omega {}", run.omega);
            Ok(if run.verdict == Verdict::Accept { exit::PASS } else { exit::ASSERTION })
        }
        IqzkCommand::Verify { instance, proof } => {
            let (x, _) = load_instance(&instance)?;
            let bytes = read_file(&proof)?;
            let decoded = BitString::decode(&bytes).ok().and_then(|(omega, used)| match NizkProof::decode(&bytes[used..]) {
                Ok((p, rest)) if used + rest == bytes.len() => Some((omega, p)),
                _ => None,
            });
            let accept = decoded.is_some_and(|(omega, p)| nizk_verify(&omega, &x, &p, &OracleTable::new(ORACLE_SALT)));
            println!("{}", if accept { "accept" } else { "reject" });
            Ok(if accept { exit::PASS } else { exit::ASSERTION })
        }
        IqzkCommand::Simulate { instance, k, n, seed, out } => {
            let (x, _) = load_instance(&instance)?;
            let scheme = scheme(n)?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let verifier = honest_verifier(&scheme, k, &mut rng);
            let oracle = OracleTable::new(ORACLE_SALT);
            let transcript = iqzk_simulate(&scheme, &x, k, &verifier, &oracle, &mut rng, MAX_ATTEMPTS)
                .map_err(|e| Failure { code: exit::ASSERTION, message: e.to_string() })?;
            let mut text = String::new();
            for m in &transcript {
                match m {
                    IqzkMessage::Coin(msg) => text.push_str(&format!("coin {msg:?}\n")),
                    IqzkMessage::Proof(p) => text.push_str(&format!("proof {} rounds\n", p.rounds())),
                }
            }
            write_output(out.as_deref(), text.as_bytes())?;
            Ok(exit::PASS)
        }
    }
}

fn qrewind(cmd: QrewindCommand) -> CmdResult {
    let QrewindCommand::Sweep { trials, qubits, seed, family, out } = cmd;
    let family = AdversaryFamily::from(family);
    let rows = sweep::sweep(&SweepConfig::new(trials, qubits, seed, family)).map_err(usage)?;
    let mut csv = Vec::new();
    sweep::write_csv(&rows, &mut csv).map_err(usage)?;
    write_output(out.as_deref(), &csv)?;
    Ok(if rows.iter().all(|r| sweep_trial_passes(family, r)) { exit::PASS } else { exit::ASSERTION })
}

fn parse_lwe(s: &str) -> Result<LweParams, Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--params {s}: {e}")))?;
    let [k, m, p, beta] = parts[..] else {
        return Err(usage(format!("--params {s}: expected k,m,p,beta")));
    };
    let narrow = |v: u64| u32::try_from(v).map_err(|e| usage(format!("--params {s}: {e}")));
    LweParams::new(k as usize, m as usize, narrow(p)?, narrow(beta)?).map_err(usage)
}

/// Flips coins until they are enough for a key, extending the string as needed.
fn key_from_flips(params: LweParams, n: usize, seed: u64) -> Result<(RegevKey, usize), Failure> {
    let scheme = scheme(n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut flip = |count: usize| {
        generate_crs(count, |_| {
            let mut alice = SessionState::alice(*scheme.params());
            let mut bob = SessionState::bob(*scheme.params());
            run_honest(&scheme, &mut alice, &mut bob, &mut rng);
            bob.outcome().unwrap_or(Outcome::Fail)
        })
        .map_err(|e| Failure { code: exit::ASSERTION, message: e.to_string() })
    };
    let mut coins = flip(params.key_bits())?;
    loop {
        match RegevKey::key_from_coins(params, &coins) {
            Ok(key) => return Ok((key, coins.len())),
            Err(LweError::InsufficientCoins { elements, needed, .. }) => {
                let more = flip(2 * (needed - elements) * params.element_bits())?;
                coins = coins.concat(&more);
            }
            Err(e) => return Err(usage(e)),
        }
    }
}

fn dualmode(cmd: DualmodeCommand) -> CmdResult {
    let DualmodeCommand::Keygen { mode, params, n, seed, out } = cmd;
    let params = parse_lwe(&params)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let key = match mode {
        KeyModeArg::Binding => RegevKey::keygen_binding(params, &mut rng),
        KeyModeArg::Hiding => RegevKey::keygen_hiding(params, &mut rng),
        KeyModeArg::Coins => {
            let (key, used) = key_from_flips(params, n, seed)?;
            println!("coins {used}");
            key
        }
    };
    let bytes = key.to_bytes();
    write_output(Some(&out), &bytes)?;
    println!("key {:?} {} rows {} bytes", key.mode(), key.rows().len(), bytes.len());
    Ok(exit::PASS)
}

fn experiment(args: ExperimentArgs) -> CmdResult {
    let name: Experiment = args.name.parse().map_err(usage)?;
    let mut spec = ExperimentSpec::new(name, args.seed);
    if let Some(r) = args.reps {
        spec.reps = r;
    }
    if let Some(n) = args.n {
        spec.n = n;
    }
    if let Some(k) = args.k {
        spec.k = k;
    }
    if let Some(q) = args.qubits {
        spec.qubits = q;
    }
    if let Some(f) = args.family {
        spec.family = f.into();
    }
    let report = run_experiment(&spec).map_err(usage)?;
    write_output(args.out.as_deref(), &report.csv)?;
    Ok(if report.passed { exit::PASS } else { exit::ASSERTION })
}
