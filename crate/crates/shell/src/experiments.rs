//! Seeded experiment suites that write one CSV each.

use std::fmt;
use std::str::FromStr;

use qcoin_core::coinflip::strategy::{FixedBitBob, TapeBob};
use qcoin_core::coinflip::{run_bob_strategy, run_honest, Outcome, SessionState};
use qcoin_core::commitment::{ChaChaPrg, CommitParams, NaorScheme};
use qcoin_core::dualmode::{ext_commit, ext_equivocate, ext_extract, ext_verify, ExtCrs, ExtError, LweParams, RegevKey};
use qcoin_core::qrewind::sweep::{self, AdversaryFamily, SweepConfig, SweepError};
use qcoin_core::zk::iqzk::{iqzk_fcoin_run, iqzk_run, PerSession, Prover, Verdict};
use qcoin_core::zk::{GiInstance, OracleTable};
use qcoin_core::BitString;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

/// Fairness window on the frequency of coin 1.
pub const FAIRNESS_WINDOW: (f64, f64) = (0.48, 0.52);

/// Fidelity floor for adversaries whose success probability is exactly 1/2.
pub const BALANCED_FIDELITY_LOSS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fairness,
    RewindSweep,
    Soundness,
    Extraction,
    Equivocation,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Fairness, Experiment::RewindSweep, Experiment::Soundness, Experiment::Extraction, Experiment::Equivocation];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fairness => "fairness",
            Experiment::RewindSweep => "rewind-sweep",
            Experiment::Soundness => "soundness",
            Experiment::Extraction => "extraction",
            Experiment::Equivocation => "equivocation",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown experiment {0:?}")]
pub struct UnknownExperiment(pub String);

impl FromStr for Experiment {
    type Err = UnknownExperiment;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub seed: u64,
    pub reps: usize,
    /// Commitment security parameter for coin flips.
    pub n: usize,
    /// Proof rounds, and coin flips per proof.
    pub k: usize,
    pub qubits: usize,
    pub family: AdversaryFamily,
    pub lwe: LweParams,
}

impl ExperimentSpec {
    /// The acceptance-scale parameters for `experiment`.
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        let reps = match experiment {
            Experiment::Fairness | Experiment::Soundness => 10_000,
            Experiment::RewindSweep => 100,
            Experiment::Extraction | Experiment::Equivocation => 1_000,
        };
        Self {
            experiment,
            seed,
            reps,
            n: 16,
            k: 8,
            qubits: 10,
            family: AdversaryFamily::Perturbed,
            lwe: LweParams::new(4, 64, 257, 1).expect("fixed parameters are valid"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Unknown(#[from] UnknownExperiment),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub csv: Vec<u8>,
    /// Whether every asserted bound held.
    pub passed: bool,
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| ExperimentError::Csv(csv::Error::from(e.into_error())))
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, ExperimentError> {
    if spec.reps == 0 {
        return Err(ExperimentError::Params("reps must be positive".into()));
    }
    let (csv, passed) = match spec.experiment {
        Experiment::Fairness => fairness(spec)?,
        Experiment::RewindSweep => rewind_sweep(spec)?,
        Experiment::Soundness => soundness(spec)?,
        Experiment::Extraction => extraction(spec)?,
        Experiment::Equivocation => equivocation(spec)?,
    };
    Ok(ExperimentReport { experiment: spec.experiment, csv, passed })
}

fn scheme(n: usize) -> Result<NaorScheme, ExperimentError> {
    let params = CommitParams::new(n).map_err(|e| ExperimentError::Params(e.to_string()))?;
    Ok(NaorScheme::new(params, ChaChaPrg))
}

#[derive(Serialize)]
struct FairnessRow {
    bob: &'static str,
    n: usize,
    runs: usize,
    ones: usize,
    fails: usize,
    rate: f64,
    low: f64,
    high: f64,
    pass: bool,
}

fn fairness(spec: &ExperimentSpec) -> Result<(Vec<u8>, bool), ExperimentError> {
    let scheme = scheme(spec.n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let tape_len = scheme.params().expanded_len() + 1;
    let mut rows = Vec::new();
    for bob in ["honest", "fixed-0", "fixed-1"] {
        let (mut ones, mut fails) = (0, 0);
        for _ in 0..spec.reps {
            let outcome = match bob {
                "honest" => {
                    let mut alice = SessionState::alice(*scheme.params());
                    let mut b = SessionState::bob(*scheme.params());
                    run_honest(&scheme, &mut alice, &mut b, &mut rng);
                    b.outcome().unwrap_or(Outcome::Fail)
                }
                _ => {
                    let strategy = FixedBitBob { tape: BitString::random(tape_len, &mut rng), b: bob == "fixed-1" };
                    run_bob_strategy(&scheme, SessionState::alice(*scheme.params()), &strategy, &mut rng).1
                }
            };
            match outcome {
                Outcome::Coin(c) => ones += c as usize,
                Outcome::Fail => fails += 1,
            }
        }
        let rate = ones as f64 / spec.reps as f64;
        let (low, high) = FAIRNESS_WINDOW;
        let pass = fails == 0 && (low..=high).contains(&rate);
        rows.push(FairnessRow { bob, n: spec.n, runs: spec.reps, ones, fails, rate, low, high, pass });
    }
    let passed = rows.iter().all(|r| r.pass);
    Ok((to_csv(&rows)?, passed))
}

/// Whether a sweep trial meets the bound for its adversary family.
pub fn sweep_trial_passes(family: AdversaryFamily, row: &sweep::SweepRow) -> bool {
    match family {
        AdversaryFamily::Balanced => {
            row.report.success && row.iterations <= 2 && row.fidelity >= 1.0 - BALANCED_FIDELITY_LOSS
        }
        AdversaryFamily::Perturbed => {
            let floor = 1.0 - row.epsilon_prime;
            row.report.success && row.fidelity >= floor && row.report.expected_fidelity >= floor
        }
    }
}

fn rewind_sweep(spec: &ExperimentSpec) -> Result<(Vec<u8>, bool), ExperimentError> {
    let config = SweepConfig::new(spec.reps, spec.qubits, spec.seed, spec.family);
    let rows = sweep::sweep(&config)?;
    let mut csv = Vec::new();
    sweep::write_csv(&rows, &mut csv)?;
    Ok((csv, rows.iter().all(|r| sweep_trial_passes(spec.family, r))))
}

/// Acceptance frequency allowed for `trials` runs against `k` challenge bits.
pub fn soundness_bound(k: usize, trials: usize) -> f64 {
    let p = 2f64.powi(-(k as i32));
    p + 3.0 * (p / trials as f64).sqrt()
}

#[derive(Serialize)]
struct SoundnessRow {
    coins: &'static str,
    k: usize,
    trials: usize,
    accepted: usize,
    rate: f64,
    bound: f64,
    pass: bool,
}

fn soundness(spec: &ExperimentSpec) -> Result<(Vec<u8>, bool), ExperimentError> {
    let scheme = scheme(spec.n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let x = GiInstance::random_non_isomorphic(6, 7, &mut rng).map_err(|e| ExperimentError::Params(e.to_string()))?;
    let oracle = OracleTable::new(b"soundness");
    let tape_len = scheme.params().expanded_len() + 1;
    let nizk = |e| ExperimentError::Params(format!("proof failed: {e}"));
    let mut rows = Vec::new();
    for coins in ["ideal", "real"] {
        let mut accepted = 0;
        for _ in 0..spec.reps {
            let run = if coins == "ideal" {
                iqzk_fcoin_run(&x, spec.k, &Prover::Cheating, &oracle, &mut rng).map_err(nizk)?
            } else {
                let verifier = PerSession((0..spec.k).map(|_| TapeBob { tape: BitString::random(tape_len, &mut rng) }).collect());
                iqzk_run(&scheme, &x, spec.k, &Prover::Cheating, &verifier, &oracle, &mut rng).map_err(nizk)?
            };
            accepted += (run.verdict == Verdict::Accept) as usize;
        }
        let rate = accepted as f64 / spec.reps as f64;
        let bound = soundness_bound(spec.k, spec.reps);
        rows.push(SoundnessRow { coins, k: spec.k, trials: spec.reps, accepted, rate, bound, pass: rate <= bound });
    }
    let passed = rows.iter().all(|r| r.pass);
    Ok((to_csv(&rows)?, passed))
}

#[derive(Serialize)]
struct ExtractionRow {
    k: usize,
    m: usize,
    p: u32,
    beta: u32,
    trials: usize,
    correct: usize,
    junk: usize,
    relation_break: usize,
    pass: bool,
}

fn extraction(spec: &ExperimentSpec) -> Result<(Vec<u8>, bool), ExperimentError> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let x = GiInstance::random_non_isomorphic(6, 7, &mut rng).map_err(|e| ExperimentError::Params(e.to_string()))?;
    let crs = ExtCrs { key: RegevKey::keygen_binding(spec.lwe, &mut rng), instance: x };
    let (mut correct, mut junk, mut relation_break) = (0, 0, 0);
    for i in 0..spec.reps {
        let a = i % 2 == 1;
        let (com, _) = ext_commit(&crs, a, &mut rng);
        match ext_extract(&crs, &com) {
            Ok(got) => correct += (got == a) as usize,
            Err(ExtError::Junk) => junk += 1,
            Err(ExtError::RelationBreak) => relation_break += 1,
            Err(e) => return Err(ExperimentError::Params(e.to_string())),
        }
    }
    let row = ExtractionRow {
        k: spec.lwe.k(),
        m: spec.lwe.m(),
        p: spec.lwe.p(),
        beta: spec.lwe.beta(),
        trials: spec.reps,
        correct,
        junk,
        relation_break,
        pass: correct == spec.reps,
    };
    let passed = row.pass;
    Ok((to_csv(&[row])?, passed))
}

#[derive(Serialize)]
struct EquivocationRow {
    k: usize,
    m: usize,
    p: u32,
    beta: u32,
    trials: usize,
    opens_to_zero: usize,
    opens_to_one: usize,
    pass: bool,
}

fn equivocation(spec: &ExperimentSpec) -> Result<(Vec<u8>, bool), ExperimentError> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let (x, w) = GiInstance::random_isomorphic(6, 8, &mut rng).map_err(|e| ExperimentError::Params(e.to_string()))?;
    let crs = ExtCrs { key: RegevKey::keygen_hiding(spec.lwe, &mut rng), instance: x };
    let (mut zero, mut one) = (0, 0);
    for _ in 0..spec.reps {
        let (com, open0, open1) = ext_equivocate(&crs, &w, &mut rng).map_err(|e| ExperimentError::Params(e.to_string()))?;
        zero += (!open0.bit && ext_verify(&crs, &com, &open0)) as usize;
        one += (open1.bit && ext_verify(&crs, &com, &open1)) as usize;
    }
    let row = EquivocationRow {
        k: spec.lwe.k(),
        m: spec.lwe.m(),
        p: spec.lwe.p(),
        beta: spec.lwe.beta(),
        trials: spec.reps,
        opens_to_zero: zero,
        opens_to_one: one,
        pass: zero == spec.reps && one == spec.reps,
    };
    let passed = row.pass;
    Ok((to_csv(&[row])?, passed))
}
