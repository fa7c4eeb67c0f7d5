//! Coin flipping from Naor commitments.

pub mod crs;
pub mod ideal;
pub mod message;
pub mod session;
pub mod simulator;
pub mod strategy;

use rand::Rng;

pub use message::{FrameError, ProtocolMessage};
pub use session::{Phase, Role, SessionState};

use crate::commitment::NaorScheme;
use strategy::{AliceStrategy, BobStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Coin(bool),
    Fail,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Coin(c) => write!(f, "{}", *c as u8),
            Outcome::Fail => f.write_str("FAIL"),
        }
    }
}

/// Runs two honest sessions against each other until both stop talking.
pub fn run_honest<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    alice: &mut SessionState,
    bob: &mut SessionState,
    rng: &mut R,
) -> Vec<ProtocolMessage> {
    let mut log = Vec::new();
    let mut pending = bob.step(scheme, None, rng);
    let mut to_alice = true;
    while let Some(msg) = pending.take() {
        log.push(msg.clone());
        let receiver = if to_alice { &mut *alice } else { &mut *bob };
        pending = receiver.step(scheme, Some(&msg), rng);
        to_alice = !to_alice;
    }
    log
}

/// An honest Bob against an arbitrary Alice strategy.
/// Returns Bob's transcript and output.
pub fn run_alice_strategy<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    strategy: &dyn AliceStrategy,
    mut bob: SessionState,
    rng: &mut R,
) -> (Vec<ProtocolMessage>, Outcome) {
    let mut pending = bob.step(scheme, None, rng);
    while pending.is_some() && !bob.is_finished() {
        let reply = strategy.respond(scheme, bob.transcript());
        pending = bob.step(scheme, Some(&reply), rng);
    }
    (bob.transcript().to_vec(), bob.outcome().unwrap_or(Outcome::Fail))
}

/// An honest Alice against an arbitrary Bob strategy.
/// Returns Alice's transcript and output.
pub fn run_bob_strategy<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    mut alice: SessionState,
    strategy: &dyn BobStrategy,
    rng: &mut R,
) -> (Vec<ProtocolMessage>, Outcome) {
    let mut msg = strategy.respond(scheme, &[]);
    while let Some(_reply) = alice.step(scheme, Some(&msg), rng) {
        if alice.is_finished() {
            break;
        }
        msg = strategy.respond(scheme, alice.transcript());
    }
    (alice.transcript().to_vec(), alice.outcome().unwrap_or(Outcome::Fail))
}

/// The coin a complete, valid transcript determines.
pub fn coin_of_transcript(scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> Option<bool> {
    match transcript {
        [ProtocolMessage::Nonce(nonce), ProtocolMessage::Commit(c), ProtocolMessage::Challenge(b), ProtocolMessage::Open(o)] => {
            scheme.verify_open(nonce, c, o).then_some(o.bit ^ b)
        }
        _ => None,
    }
}
