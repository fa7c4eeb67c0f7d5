//! Honest Alice and Bob as explicit state machines.
//!
//! Message order: Bob sends the commitment nonce, Alice commits to `a`, Bob
//! sends his challenge bit `b`, Alice opens, and both output `a ^ b`. Any
//! out-of-phase message aborts the session with [`Outcome::Fail`].

use rand::Rng;

use super::{Outcome, ProtocolMessage};
use crate::bits::BitString;
use crate::commitment::{CommitParams, Commitment, NaorScheme, Opening, ReceiverNonce};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Alice,
    Bob,
}

/// The next message expected in the conversation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Nonce,
    Commit,
    Challenge,
    Open,
    Done,
    Aborted,
}

#[derive(Debug, Clone)]
pub struct SessionState {
    role: Role,
    params: CommitParams,
    phase: Phase,
    a: Option<bool>,
    b: Option<bool>,
    randomness: Option<BitString>,
    nonce: Option<ReceiverNonce>,
    commitment: Option<Commitment>,
    transcript: Vec<ProtocolMessage>,
    outcome: Option<Outcome>,
}

impl SessionState {
    fn new(role: Role, params: CommitParams) -> Self {
        Self {
            role,
            params,
            phase: Phase::Nonce,
            a: None,
            b: None,
            randomness: None,
            nonce: None,
            commitment: None,
            transcript: Vec::new(),
            outcome: None,
        }
    }

    /// Honest Alice; `a` and `r` are drawn when she commits.
    pub fn alice(params: CommitParams) -> Self {
        Self::new(Role::Alice, params)
    }

    /// Honest Alice with her random choices fixed in advance.
    pub fn alice_with_choices(params: CommitParams, a: bool, randomness: BitString) -> Self {
        assert_eq!(randomness.len(), params.randomness_len());
        let mut s = Self::new(Role::Alice, params);
        s.a = Some(a);
        s.randomness = Some(randomness);
        s
    }

    /// Honest Bob; the nonce and `b` are drawn when they are sent.
    pub fn bob(params: CommitParams) -> Self {
        Self::new(Role::Bob, params)
    }

    /// Honest Bob with his nonce and challenge fixed in advance.
    pub fn bob_with_choices(params: CommitParams, nonce: ReceiverNonce, b: bool) -> Self {
        assert_eq!(nonce.sigma().len(), params.expanded_len());
        let mut s = Self::new(Role::Bob, params);
        s.nonce = Some(nonce);
        s.b = Some(b);
        s
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn a(&self) -> Option<bool> {
        self.a
    }

    pub fn b(&self) -> Option<bool> {
        self.b
    }

    pub fn transcript(&self) -> &[ProtocolMessage] {
        &self.transcript
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    /// The coin, defined only once the session is done.
    pub fn coin(&self) -> Option<bool> {
        match self.outcome {
            Some(Outcome::Coin(c)) => Some(c),
            _ => None,
        }
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.phase, Phase::Done | Phase::Aborted)
    }

    fn abort(&mut self, notify: bool) -> Option<ProtocolMessage> {
        self.phase = Phase::Aborted;
        self.outcome = Some(Outcome::Fail);
        if notify {
            self.transcript.push(ProtocolMessage::Abort);
            Some(ProtocolMessage::Abort)
        } else {
            None
        }
    }

    fn emit(&mut self, msg: ProtocolMessage) -> Option<ProtocolMessage> {
        self.transcript.push(msg.clone());
        Some(msg)
    }

    /// Advances the session by one protocol move.
    ///
    /// `incoming` is the peer's latest message, or `None` when this party
    /// speaks first. Returns the message to send, if any. A session that is
    /// waiting for a message and receives `None` stays where it is.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        scheme: &NaorScheme,
        incoming: Option<&ProtocolMessage>,
        rng: &mut R,
    ) -> Option<ProtocolMessage> {
        if self.is_finished() {
            return None;
        }
        if let Some(msg) = incoming {
            self.transcript.push(msg.clone());
            if *msg == ProtocolMessage::Abort {
                return self.abort(false);
            }
        }
        match self.role {
            Role::Alice => self.alice_step(scheme, incoming, rng),
            Role::Bob => self.bob_step(scheme, incoming, rng),
        }
    }

    fn alice_step<R: Rng + ?Sized>(
        &mut self,
        scheme: &NaorScheme,
        incoming: Option<&ProtocolMessage>,
        rng: &mut R,
    ) -> Option<ProtocolMessage> {
        match (self.phase, incoming) {
            (_, None) => None,
            (Phase::Nonce, Some(ProtocolMessage::Nonce(nonce))) => {
                if nonce.sigma().len() != self.params.expanded_len() {
                    return self.abort(true);
                }
                let a = *self.a.get_or_insert_with(|| rng.gen());
                let l = self.params.randomness_len();
                let r = self.randomness.get_or_insert_with(|| BitString::random(l, rng)).clone();
                let c = scheme.commit(nonce, a, &r).expect("session parameters match the scheme");
                self.nonce = Some(nonce.clone());
                self.commitment = Some(c.clone());
                self.phase = Phase::Challenge;
                self.emit(ProtocolMessage::Commit(c))
            }
            (Phase::Challenge, Some(ProtocolMessage::Challenge(b))) => {
                let a = self.a.expect("a is set before committing");
                self.b = Some(*b);
                let opening = Opening {
                    bit: a,
                    randomness: self.randomness.clone().expect("randomness is set before committing"),
                };
                self.phase = Phase::Done;
                self.outcome = Some(Outcome::Coin(a ^ b));
                self.emit(ProtocolMessage::Open(opening))
            }
            _ => self.abort(true),
        }
    }

    fn bob_step<R: Rng + ?Sized>(
        &mut self,
        scheme: &NaorScheme,
        incoming: Option<&ProtocolMessage>,
        rng: &mut R,
    ) -> Option<ProtocolMessage> {
        match (self.phase, incoming) {
            (Phase::Nonce, None) => {
                let params = self.params;
                let nonce = self.nonce.get_or_insert_with(|| ReceiverNonce::random(&params, rng)).clone();
                self.phase = Phase::Commit;
                self.emit(ProtocolMessage::Nonce(nonce))
            }
            (_, None) => None,
            (Phase::Commit, Some(ProtocolMessage::Commit(c))) => {
                if c.value().len() != self.params.expanded_len() {
                    return self.abort(true);
                }
                self.commitment = Some(c.clone());
                let b = *self.b.get_or_insert_with(|| rng.gen());
                self.phase = Phase::Open;
                self.emit(ProtocolMessage::Challenge(b))
            }
            (Phase::Open, Some(ProtocolMessage::Open(opening))) => {
                let nonce = self.nonce.as_ref().expect("nonce sent");
                let c = self.commitment.as_ref().expect("commitment received");
                if !scheme.verify_open(nonce, c, opening) {
                    return self.abort(false);
                }
                self.a = Some(opening.bit);
                self.phase = Phase::Done;
                self.outcome = Some(Outcome::Coin(opening.bit ^ self.b.expect("b sent")));
                None
            }
            _ => self.abort(true),
        }
    }
}
