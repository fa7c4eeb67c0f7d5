//! Seeded adversary sweeps with CSV output.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use super::adversary::AdversaryCircuit;
use super::circuit::{CircuitQ, ToyCommit};
use super::layout::{LayoutError, RegisterLayout};
use super::rcoin::{run_rcoin, RcoinConfig, RcoinError, RewindReport};
use super::unitary::haar_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryFamily {
    /// The same unitary for every commitment value, so `p = 1/2` for every `psi`.
    Balanced,
    /// Balanced adversaries with commitment-dependent rotations of random size.
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub trials: usize,
    pub qubits: usize,
    pub seed: u64,
    pub family: AdversaryFamily,
    /// Perturbed adversaries are redrawn until `|p - 1/2| <= window`.
    pub window: f64,
    pub rcoin: RcoinConfig,
}

impl SweepConfig {
    pub fn new(trials: usize, qubits: usize, seed: u64, family: AdversaryFamily) -> Self {
        Self { trials, qubits, seed, family, window: 0.05, rcoin: RcoinConfig::default() }
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Rcoin(#[from] RcoinError),
    #[error("no adversary within the p window after {0} draws")]
    NoAdversary(usize),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub seed: u64,
    pub qubits: usize,
    pub coin: u8,
    pub p: f64,
    pub epsilon: f64,
    pub p0: f64,
    pub epsilon_prime: f64,
    pub iterations: usize,
    pub fidelity: f64,
    #[serde(skip)]
    pub report: RewindReport,
}

const MAX_DRAWS: usize = 1000;

/// One trial, fully determined by its seed.
pub fn run_trial(config: &SweepConfig, trial_seed: u64) -> Result<SweepRow, SweepError> {
    let layout = RegisterLayout::with_total(config.qubits)?;
    let mut rng = ChaCha20Rng::seed_from_u64(trial_seed);
    let coin: bool = rng.gen();
    let toy = ToyCommit::keyed(layout.commit_width(), rng.gen());
    let psi = haar_state(1 << layout.w_len(), &mut rng);
    let adv = match config.family {
        AdversaryFamily::Balanced => AdversaryCircuit::uniform_independent(&layout, &mut rng),
        AdversaryFamily::Perturbed => {
            let mut draws = 0;
            loop {
                if draws == MAX_DRAWS {
                    return Err(SweepError::NoAdversary(draws));
                }
                draws += 1;
                let delta = 10f64.powf(rng.gen_range(-7.0..0.2));
                let adv = AdversaryCircuit::perturbed(&layout, delta, &mut rng);
                let q = CircuitQ::new(layout, toy.clone(), adv, coin).expect("widths match");
                let p = q.run(&psi).map_err(RcoinError::from)?.prob_g_zero();
                if (p - 0.5).abs() <= config.window {
                    break q.adv;
                }
            }
        }
    };
    let q = CircuitQ::new(layout, toy, adv, coin).expect("widths match");
    let (report, _) = run_rcoin(&q, &psi, &mut rng, config.rcoin)?;
    Ok(SweepRow {
        seed: trial_seed,
        qubits: layout.qubits(),
        coin: coin as u8,
        p: report.p_true,
        epsilon: report.epsilon,
        p0: report.p0,
        epsilon_prime: report.epsilon_prime,
        iterations: report.measurements,
        fidelity: report.fidelity,
        report,
    })
}

/// Trial `i` uses seed `config.seed + i`.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    (0..config.trials as u64).map(|i| run_trial(config, config.seed.wrapping_add(i))).collect()
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
