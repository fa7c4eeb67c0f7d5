//! Coin flipping secure against quantum adversaries, and the pieces built on it.
//!
//! * [`commitment`] and [`coinflip`]: Naor commitments, the coin-flip protocol,
//!   the ideal coin functionality and its simulators.
//! * [`qrewind`]: a statevector model of the quantum rewinding argument.
//! * [`zk`]: graph-isomorphism proofs, a programmable random oracle, and
//!   zero-knowledge proofs that draw their randomness from coin flips.
//! * [`dualmode`]: LWE commitments whose keys switch between binding and hiding.

pub mod bits;
pub mod coinflip;
pub mod commitment;
pub mod dualmode;
pub mod qrewind;
pub mod zk;
pub mod stats;

pub use bits::BitString;
pub use coinflip::Outcome;
