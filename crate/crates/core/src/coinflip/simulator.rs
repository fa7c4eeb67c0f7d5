//! Ideal-world simulators for the coin-flip protocol.
//!
//! Against a dishonest Alice the simulator extracts her bit from the
//! commitment by exhaustive search and answers with `b = coin ^ a`, so the
//! honest Bob's coin is whatever the ideal functionality chose. When the
//! commitment has preimages under both bits it rewinds Alice to see which
//! bit she actually opens. Against a
//! classical dishonest Bob it guesses `b' = coin ^ a`, commits, and rewinds
//! Bob until his challenge matches the guess.

use rand::Rng;
use thiserror::Error;

use super::ideal::{PendingCoin, SecondInput};
use super::session::SessionState;
use super::strategy::{AliceStrategy, BobStrategy};
use super::{Outcome, ProtocolMessage};
use crate::bits::BitString;
use crate::commitment::{CommitError, Commitment, ImageTable, NaorScheme, Opening, ReceiverNonce};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("commitment opens to both bits: {zero:?} and {one:?}")]
    BindingViolation { zero: Opening, one: Opening },
    #[error(transparent)]
    Commit(#[from] CommitError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimulationError {
    #[error("rewinding budget of {0} attempts exhausted")]
    RewindBudgetExhausted(usize),
}

/// Exhaustive extractor; builds the generator's image table once.
#[derive(Debug, Clone)]
pub struct Extractor {
    scheme: NaorScheme,
    table: ImageTable,
}

impl Extractor {
    pub fn new(scheme: &NaorScheme) -> Result<Self, CommitError> {
        Ok(Self { scheme: scheme.clone(), table: scheme.image_table()? })
    }

    pub fn scheme(&self) -> &NaorScheme {
        &self.scheme
    }

    /// The unique `(a, r)` behind `c`, `None` if `c` has no preimage.
    pub fn extract(&self, nonce: &ReceiverNonce, c: &Commitment) -> Result<Option<Opening>, ExtractError> {
        let pre = self.table.preimages(nonce, c);
        let zero = pre.iter().find(|o| !o.bit);
        let one = pre.iter().find(|o| o.bit);
        match (zero, one) {
            (Some(z), Some(o)) => Err(ExtractError::BindingViolation { zero: z.clone(), one: o.clone() }),
            (Some(o), None) | (None, Some(o)) => Ok(Some(o.clone())),
            (None, None) => Ok(None),
        }
    }
}

/// One-shot extraction; exponential in `n`.
pub fn extract_commitment(
    scheme: &NaorScheme,
    nonce: &ReceiverNonce,
    c: &Commitment,
) -> Result<Option<Opening>, ExtractError> {
    Extractor::new(scheme)?.extract(nonce, c)
}

/// Simulated run against `strategy` with the simulator's nonce and the
/// functionality's coin supplied explicitly.
pub fn simulate_dishonest_alice_with(
    extractor: &Extractor,
    strategy: &dyn AliceStrategy,
    nonce: ReceiverNonce,
    coin: bool,
) -> Result<(Vec<ProtocolMessage>, Outcome), ExtractError> {
    let scheme = extractor.scheme();
    let pending = PendingCoin::with_coin(coin);
    let first = ProtocolMessage::Nonce(nonce.clone());
    let reply = strategy.respond(scheme, std::slice::from_ref(&first));
    // Bob's challenge depends on the extracted bit; other values of `b` are never sent.
    let b = match &reply {
        ProtocolMessage::Commit(c) => match extractor.extract(&nonce, c) {
            Ok(opening) => pending.alice_output() ^ opening.is_some_and(|o| o.bit),
            Err(ExtractError::BindingViolation { .. }) => {
                match [false, true].map(|b| opened_bit(scheme, strategy, &nonce, b)) {
                    // She opens to `b ^ s` and the coin is `s` whatever we send.
                    [Some(a0), Some(a1)] if a0 != a1 => false,
                    [Some(a), _] | [_, Some(a)] => pending.alice_output() ^ a,
                    [None, None] => pending.alice_output(),
                }
            }
            Err(e) => return Err(e),
        },
        _ => false,
    };
    let mut bob = SessionState::bob_with_choices(*scheme.params(), nonce, b);
    // Only the honest Bob's deterministic reactions are replayed; no randomness is drawn.
    let mut no_rng = rand::rngs::mock::StepRng::new(0, 0);
    bob.step(scheme, None, &mut no_rng);
    let mut incoming = Some(reply);
    while let Some(msg) = incoming.take() {
        if bob.step(scheme, Some(&msg), &mut no_rng).is_some() && !bob.is_finished() {
            incoming = Some(strategy.respond(scheme, bob.transcript()));
        }
    }
    let second = match bob.outcome() {
        // A mismatch is only possible for an Alice who can open both ways.
        Some(Outcome::Coin(c)) if c == coin => SecondInput::Ok,
        _ => SecondInput::Refuse,
    };
    Ok((bob.transcript().to_vec(), pending.finish(second)))
}

/// The bit Alice validly opens to when challenged with `b`, found by running
/// her again from the start of the session.
fn opened_bit(scheme: &NaorScheme, strategy: &dyn AliceStrategy, nonce: &ReceiverNonce, b: bool) -> Option<bool> {
    let bob = SessionState::bob_with_choices(*scheme.params(), nonce.clone(), b);
    let mut no_rng = rand::rngs::mock::StepRng::new(0, 0);
    match super::run_alice_strategy(scheme, strategy, bob, &mut no_rng).1 {
        Outcome::Coin(c) => Some(c ^ b),
        Outcome::Fail => None,
    }
}

pub fn simulate_dishonest_alice<R: Rng + ?Sized>(
    extractor: &Extractor,
    strategy: &dyn AliceStrategy,
    rng: &mut R,
) -> Result<(Vec<ProtocolMessage>, Outcome), ExtractError> {
    let nonce = ReceiverNonce::random(extractor.scheme().params(), rng);
    let pending = PendingCoin::start(rng);
    simulate_dishonest_alice_with(extractor, strategy, nonce, pending.alice_output())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attempt {
    Accepted(Vec<ProtocolMessage>),
    Rewind,
}

/// A single guess-and-check attempt with Alice's choices `(a, r)` fixed.
pub fn bob_sim_attempt(
    scheme: &NaorScheme,
    strategy: &dyn BobStrategy,
    coin: bool,
    a: bool,
    r: BitString,
) -> Attempt {
    let mut alice = SessionState::alice_with_choices(*scheme.params(), a, r);
    let mut no_rng = rand::rngs::mock::StepRng::new(0, 0);
    let first = strategy.respond(scheme, &[]);
    if alice.step(scheme, Some(&first), &mut no_rng).is_none() || alice.is_finished() {
        return Attempt::Accepted(alice.transcript().to_vec());
    }
    let second = strategy.respond(scheme, alice.transcript());
    if let ProtocolMessage::Challenge(b) = second {
        if b != coin ^ a {
            return Attempt::Rewind;
        }
    }
    alice.step(scheme, Some(&second), &mut no_rng);
    Attempt::Accepted(alice.transcript().to_vec())
}

/// Forces the conversation to end in `coin` by rewinding a classical Bob.
pub fn simulate_dishonest_bob<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    strategy: &dyn BobStrategy,
    coin: bool,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Vec<ProtocolMessage>, SimulationError> {
    for _ in 0..max_attempts {
        let a: bool = rng.gen();
        let r = BitString::random(scheme.params().randomness_len(), rng);
        if let Attempt::Accepted(t) = bob_sim_attempt(scheme, strategy, coin, a, r) {
            return Ok(t);
        }
    }
    Err(SimulationError::RewindBudgetExhausted(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coinflip::strategy::{alice_strategy_suite, FixedBitBob, ScriptedAlice, TapeBob};
    use crate::coinflip::{coin_of_transcript, run_alice_strategy};
    use crate::commitment::{ChaChaPrg, CommitParams, RepeatPrg};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn scheme(n: usize) -> NaorScheme {
        NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg)
    }

    #[test]
    fn extracts_committed_bit_and_seed() {
        let s = scheme(4);
        let ex = Extractor::new(&s).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let mut found = 0;
        for _ in 0..200 {
            let nonce = ReceiverNonce::random(s.params(), &mut rng);
            let r0 = BitString::random(4, &mut rng);
            let c = s.commit(&nonce, true, &r0).unwrap();
            match ex.extract(&nonce, &c) {
                Ok(Some(o)) => {
                    assert!(o.bit);
                    assert!(s.verify_open(&nonce, &c, &o));
                    found += 1;
                }
                Err(ExtractError::BindingViolation { .. }) => {}
                Ok(None) => panic!("commitment in the image must have a preimage"),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(found > 150);
    }

    #[test]
    fn matches_brute_force_preimage_search() {
        let s = scheme(4);
        let ex = Extractor::new(&s).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..20 {
            let nonce = ReceiverNonce::random(s.params(), &mut rng);
            let c = Commitment(BitString::random(12, &mut rng));
            let mut brute = Vec::new();
            for bit in [false, true] {
                for r in 0..16u64 {
                    let r = BitString::from_u64(r, 4);
                    if s.commit(&nonce, bit, &r).unwrap() == c {
                        brute.push(bit);
                    }
                }
            }
            match ex.extract(&nonce, &c) {
                Ok(None) => assert!(brute.is_empty()),
                Ok(Some(o)) => assert!(brute.iter().all(|&b| b == o.bit) && !brute.is_empty()),
                Err(ExtractError::BindingViolation { .. }) => assert!(brute.contains(&true) && brute.contains(&false)),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn string_outside_image_has_no_preimage() {
        let s = NaorScheme::new(CommitParams::new(3).unwrap(), RepeatPrg);
        let nonce = ReceiverNonce::new(s.params(), BitString::parse("111111111").unwrap()).unwrap();
        // r||r||r and its complement never look like 100000000.
        let c = Commitment(BitString::parse("100000000").unwrap());
        assert_eq!(extract_commitment(&s, &nonce, &c), Ok(None));
    }

    #[test]
    fn zero_nonce_is_a_binding_violation() {
        let s = NaorScheme::new(CommitParams::new(3).unwrap(), RepeatPrg);
        let nonce = ReceiverNonce::new(s.params(), BitString::zeros(9)).unwrap();
        let c = s.commit(&nonce, false, &BitString::parse("101").unwrap()).unwrap();
        assert!(matches!(extract_commitment(&s, &nonce, &c), Err(ExtractError::BindingViolation { .. })));
    }

    #[test]
    fn zero_nonce_rewinds_to_the_opened_bit() {
        let s = scheme(3);
        let ex = Extractor::new(&s).unwrap();
        let zero = ReceiverNonce::new(s.params(), BitString::zeros(9)).unwrap();
        // Opens to the committed bit whatever the challenge: exact.
        let alice = ScriptedAlice::honest_like(true, 2);
        for coin in [false, true] {
            let (t, out) = simulate_dishonest_alice_with(&ex, &alice, zero.clone(), coin).unwrap();
            assert_eq!(out, Outcome::Coin(coin));
            assert_eq!(t[2], ProtocolMessage::Challenge(coin ^ true));
        }
        // Opens to `b ^ 1`, so the coin is always 1; the simulator can only refuse coin 0.
        let steer = ScriptedAlice { open: crate::coinflip::strategy::OpenRule::Steer(true), ..alice };
        assert_eq!(simulate_dishonest_alice_with(&ex, &steer, zero.clone(), true).unwrap().1, Outcome::Coin(true));
        assert_eq!(simulate_dishonest_alice_with(&ex, &steer, zero, false).unwrap().1, Outcome::Fail);
    }

    #[test]
    fn refusing_alice_fails_in_both_worlds() {
        let s = scheme(4);
        let ex = Extractor::new(&s).unwrap();
        let refuse = ScriptedAlice { open: crate::coinflip::strategy::OpenRule::Refuse, ..ScriptedAlice::honest_like(true, 3) };
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..50 {
            let (_, ideal) = simulate_dishonest_alice(&ex, &refuse, &mut rng).unwrap();
            assert_eq!(ideal, Outcome::Fail);
            let bob = SessionState::bob(*s.params());
            let (_, real) = run_alice_strategy(&s, &refuse, bob, &mut rng);
            assert_eq!(real, Outcome::Fail);
        }
    }

    #[test]
    fn fixed_bit_alice_still_gets_uniform_coin() {
        let s = scheme(4);
        let ex = Extractor::new(&s).unwrap();
        let alice = ScriptedAlice::honest_like(true, 6);
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let (mut ones, mut total) = (0, 0);
        for _ in 0..4000 {
            match simulate_dishonest_alice(&ex, &alice, &mut rng) {
                Ok((_, Outcome::Coin(c))) => {
                    ones += c as usize;
                    total += 1;
                }
                Ok((_, Outcome::Fail)) => panic!("honest opening refused"),
                Err(e) => panic!("{e}"),
            }
        }
        let f = ones as f64 / total as f64;
        assert!((f - 0.5).abs() < 0.03, "{f}");
    }

    #[test]
    fn suite_is_large_enough() {
        assert!(alice_strategy_suite().len() >= 50);
    }

    #[test]
    fn bob_simulator_forces_the_coin() {
        let s = scheme(6);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for i in 0..40u64 {
            let coin = i % 3 == 0;
            let tape = BitString::random(19, &mut rng);
            let honest = TapeBob { tape: tape.clone() };
            let t = simulate_dishonest_bob(&s, &honest, coin, &mut rng, 64).unwrap();
            assert_eq!(coin_of_transcript(&s, &t), Some(coin));
            let fixed = FixedBitBob { tape, b: false };
            let t = simulate_dishonest_bob(&s, &fixed, coin, &mut rng, 64).unwrap();
            assert_eq!(coin_of_transcript(&s, &t), Some(coin));
        }
    }

    #[test]
    fn rewinding_budget_is_reported() {
        let s = scheme(4);
        let bob = FixedBitBob { tape: BitString::zeros(13), b: true };
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        // With a = 0 and coin = 0 the guess b' = 0 never matches b = 1; a = 1 works.
        let attempt = bob_sim_attempt(&s, &bob, false, false, BitString::zeros(4));
        assert_eq!(attempt, Attempt::Rewind);
        assert!(matches!(
            simulate_dishonest_bob(&s, &bob, false, &mut rng, 0),
            Err(SimulationError::RewindBudgetExhausted(0))
        ));
    }
}
