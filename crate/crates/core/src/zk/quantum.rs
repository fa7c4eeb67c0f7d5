//! The coin-flip part of the zero-knowledge simulator against a quantum
//! verifier, run on the statevector model for a handful of coins.

use rand::Rng;
use thiserror::Error;

use crate::bits::BitString;
use crate::qrewind::layout::LayoutError;
use crate::qrewind::rcoin::{Conversation, RcoinError};
use crate::qrewind::unitary::haar_state;
use crate::qrewind::{measure_conversation, run_rcoin, AdversaryCircuit, CircuitQ, RcoinConfig, RegisterLayout, RewindReport, ToyCommit};

/// Statevector cost doubles per qubit and the simulation repeats per coin.
pub const MAX_QUANTUM_COINS: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumSimError {
    #[error("at most {MAX_QUANTUM_COINS} coins, got {0}")]
    TooManyCoins(usize),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Rcoin(#[from] RcoinError),
}

/// For each bit of `omega`, rewinds a random balanced verifier into the
/// branch where the coin equals that bit, then reads the conversation off.
pub fn simulate_quantum_coins<R: Rng + ?Sized>(
    omega: &BitString,
    qubits: usize,
    rng: &mut R,
) -> Result<Vec<(RewindReport, Conversation)>, QuantumSimError> {
    if omega.len() > MAX_QUANTUM_COINS {
        return Err(QuantumSimError::TooManyCoins(omega.len()));
    }
    let layout = RegisterLayout::with_total(qubits)?;
    omega
        .bits()
        .iter()
        .map(|&coin| {
            let toy = ToyCommit::keyed(layout.commit_width(), rng.gen());
            let adv = AdversaryCircuit::uniform_independent(&layout, rng);
            let q = CircuitQ::new(layout, toy, adv, coin).expect("toy width matches the layout");
            let psi = haar_state(1 << layout.w_len(), rng);
            let (report, out) = run_rcoin(&q, &psi, rng, RcoinConfig::default())?;
            Ok((report, measure_conversation(&out, rng)))
        })
        .collect()
}
