//! Statevector model of the quantum rewinding simulator for a dishonest Bob.

pub mod adversary;
pub mod circuit;
pub mod layout;
pub mod rcoin;
pub mod state;
pub mod sweep;
pub mod unitary;

pub use adversary::{AdversaryCircuit, AdversaryError};
pub use circuit::{
    apply_adversary, apply_cnot_check, build_superposition, decompose_good_bad, CircuitQ, Decomposition,
    ToyCommit,
};
pub use layout::{RegisterLayout, MAX_QUBITS};
pub use rcoin::{lemma_bound, lemma_bound_with_base, measure_conversation, run_rcoin, RcoinConfig, RewindReport};
pub use state::StateVector;
