//! Classical adversary strategies.
//!
//! A strategy maps the transcript seen so far to its next message. Strategies
//! are deterministic functions of their own configuration (which may embed a
//! random tape), so a simulator can rewind one simply by calling it again on
//! an earlier transcript prefix.

use super::ProtocolMessage;
use crate::bits::BitString;
use crate::commitment::{Commitment, NaorScheme, Opening, ReceiverNonce};

pub trait AliceStrategy: Send + Sync {
    /// Alice's next message; the last transcript entry is Bob's latest message.
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage;
}

pub trait BobStrategy: Send + Sync {
    /// Bob's next message; an empty transcript asks for the opening nonce.
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage;
}

fn nonce_of(transcript: &[ProtocolMessage]) -> Option<&ReceiverNonce> {
    transcript.iter().find_map(|m| match m {
        ProtocolMessage::Nonce(n) => Some(n),
        _ => None,
    })
}

fn challenge_of(transcript: &[ProtocolMessage]) -> Option<bool> {
    transcript.iter().find_map(|m| match m {
        ProtocolMessage::Challenge(b) => Some(*b),
        _ => None,
    })
}

/// How a scripted Alice chooses her committed bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitRule {
    Const(bool),
    /// Copy bit `i` of the nonce.
    NonceBit(usize),
    NonceParity,
}

/// How a scripted Alice chooses her commitment randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedRule {
    Const(u64),
    /// `n` nonce bits starting at the given offset (wrapping).
    FromNonce(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommitRule {
    Honest(BitRule, SeedRule),
    /// A string derived from the nonce that is usually outside the commit image.
    Garbage,
    Abort,
    /// Sends a challenge message where a commitment is due.
    OutOfPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenRule {
    Honest,
    Refuse,
    /// Refuse when Bob's challenge equals the given bit.
    RefuseOn(bool),
    /// Claim the other bit with the same randomness.
    FlipBit,
    /// Open with the randomness complemented in its first position.
    WrongRandomness,
    /// Claim the bit that makes the coin equal to the given target.
    Steer(bool),
}

/// A deterministic Alice built from a commit rule and an open rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScriptedAlice {
    pub commit: CommitRule,
    pub open: OpenRule,
}

impl ScriptedAlice {
    pub fn honest_like(a: bool, seed: u64) -> Self {
        Self { commit: CommitRule::Honest(BitRule::Const(a), SeedRule::Const(seed)), open: OpenRule::Honest }
    }

    fn choices(&self, scheme: &NaorScheme, nonce: &ReceiverNonce) -> Option<(bool, BitString)> {
        let CommitRule::Honest(bit_rule, seed_rule) = self.commit else { return None };
        let sigma = nonce.sigma();
        let a = match bit_rule {
            BitRule::Const(b) => b,
            BitRule::NonceBit(i) => sigma.get(i % sigma.len()),
            BitRule::NonceParity => sigma.count_ones() % 2 == 1,
        };
        let n = scheme.params().randomness_len();
        let r = match seed_rule {
            SeedRule::Const(v) => BitString::from_u64(v & ((1u64 << n.min(63)) - 1), n),
            SeedRule::FromNonce(off) => (0..n).map(|i| sigma.get((off + i) % sigma.len())).collect(),
        };
        Some((a, r))
    }
}

impl AliceStrategy for ScriptedAlice {
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage {
        let Some(nonce) = nonce_of(transcript) else { return ProtocolMessage::Abort };
        if nonce.sigma().len() != scheme.params().expanded_len() {
            return ProtocolMessage::Abort;
        }
        let Some(b) = challenge_of(transcript) else {
            return match self.commit {
                CommitRule::Honest(..) => {
                    let (a, r) = self.choices(scheme, nonce).expect("honest rule");
                    ProtocolMessage::Commit(scheme.commit(nonce, a, &r).expect("lengths match"))
                }
                CommitRule::Garbage => {
                    let mut g = nonce.sigma().clone();
                    g.flip(0);
                    ProtocolMessage::Commit(Commitment(g))
                }
                CommitRule::Abort => ProtocolMessage::Abort,
                CommitRule::OutOfPhase => ProtocolMessage::Challenge(false),
            };
        };
        let (a, r) = self
            .choices(scheme, nonce)
            .unwrap_or_else(|| (false, BitString::zeros(scheme.params().randomness_len())));
        match self.open {
            OpenRule::Honest => ProtocolMessage::Open(Opening { bit: a, randomness: r }),
            OpenRule::Refuse => ProtocolMessage::Abort,
            OpenRule::RefuseOn(x) if b == x => ProtocolMessage::Abort,
            OpenRule::RefuseOn(_) => ProtocolMessage::Open(Opening { bit: a, randomness: r }),
            OpenRule::FlipBit => ProtocolMessage::Open(Opening { bit: !a, randomness: r }),
            OpenRule::WrongRandomness => {
                let mut r = r;
                r.flip(0);
                ProtocolMessage::Open(Opening { bit: a, randomness: r })
            }
            OpenRule::Steer(target) => ProtocolMessage::Open(Opening { bit: target ^ b, randomness: r }),
        }
    }
}

/// A generated family of deterministic Alice strategies (more than fifty).
pub fn alice_strategy_suite() -> Vec<ScriptedAlice> {
    let commits = [
        CommitRule::Honest(BitRule::Const(false), SeedRule::Const(0)),
        CommitRule::Honest(BitRule::Const(true), SeedRule::Const(5)),
        CommitRule::Honest(BitRule::Const(true), SeedRule::FromNonce(0)),
        CommitRule::Honest(BitRule::NonceBit(0), SeedRule::Const(3)),
        CommitRule::Honest(BitRule::NonceBit(7), SeedRule::FromNonce(2)),
        CommitRule::Honest(BitRule::NonceParity, SeedRule::FromNonce(5)),
        CommitRule::Honest(BitRule::NonceParity, SeedRule::Const(9)),
        CommitRule::Garbage,
    ];
    let opens = [
        OpenRule::Honest,
        OpenRule::Refuse,
        OpenRule::RefuseOn(false),
        OpenRule::RefuseOn(true),
        OpenRule::FlipBit,
        OpenRule::WrongRandomness,
        OpenRule::Steer(true),
    ];
    let mut suite: Vec<ScriptedAlice> = commits
        .iter()
        .flat_map(|&commit| opens.iter().map(move |&open| ScriptedAlice { commit, open }))
        .collect();
    suite.push(ScriptedAlice { commit: CommitRule::Abort, open: OpenRule::Honest });
    suite.push(ScriptedAlice { commit: CommitRule::OutOfPhase, open: OpenRule::Honest });
    suite
}

/// Honest verifier behaviour with an explicit tape: the first `3n` bits are the
/// nonce and the next bit is the challenge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapeBob {
    pub tape: BitString,
}

impl BobStrategy for TapeBob {
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage {
        let len = scheme.params().expanded_len();
        if transcript.is_empty() {
            return ProtocolMessage::Nonce(ReceiverNonce::from_wire(self.tape.slice(0, len)));
        }
        ProtocolMessage::Challenge(self.tape.get(len))
    }
}

/// Sends a tape-derived nonce and then always the same challenge bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedBitBob {
    pub tape: BitString,
    pub b: bool,
}

impl BobStrategy for FixedBitBob {
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage {
        let len = scheme.params().expanded_len();
        if transcript.is_empty() {
            return ProtocolMessage::Nonce(ReceiverNonce::from_wire(self.tape.slice(0, len)));
        }
        ProtocolMessage::Challenge(self.b)
    }
}

/// Challenges with the parity of the received commitment string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityBob {
    pub tape: BitString,
}

impl BobStrategy for ParityBob {
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage {
        let len = scheme.params().expanded_len();
        if transcript.is_empty() {
            return ProtocolMessage::Nonce(ReceiverNonce::from_wire(self.tape.slice(0, len)));
        }
        let parity = transcript.iter().find_map(|m| match m {
            ProtocolMessage::Commit(c) => Some(c.value().count_ones() % 2 == 1),
            _ => None,
        });
        ProtocolMessage::Challenge(parity.unwrap_or(false))
    }
}
