//! Zero-knowledge proofs whose CRS comes from `k` coin flips.
//!
//! The prover plays Alice in every coin flip and the verifier plays Bob. The
//! coins form `omega`, and the prover finishes with a NIZK proof under `omega`.

use rand::Rng;
use thiserror::Error;

use super::graph::{GiInstance, GiWitness};
use super::nizk::{nizk_cheat, nizk_prove, nizk_simulate, nizk_verify, NizkError, NizkProof};
use super::oracle::OracleTable;
use crate::bits::BitString;
use crate::coinflip::ideal::{PendingCoin, SecondInput};
use crate::coinflip::simulator::{simulate_dishonest_bob, SimulationError};
use crate::coinflip::strategy::BobStrategy;
use crate::coinflip::{coin_of_transcript, run_bob_strategy, Outcome, ProtocolMessage, SessionState};
use crate::commitment::NaorScheme;

/// Messages per coin-flip session: nonce, commit, challenge, open.
pub const SESSION_MESSAGES: usize = 4;

/// A classical verifier across all coin sessions. Session `history.len()` is
/// in progress; earlier sessions are complete.
pub trait Verifier: Send + Sync {
    fn respond(&self, scheme: &NaorScheme, history: &[Vec<ProtocolMessage>], current: &[ProtocolMessage]) -> ProtocolMessage;
}

/// Runs an independent Bob strategy in each session.
#[derive(Debug, Clone)]
pub struct PerSession<B>(pub Vec<B>);

impl<B: BobStrategy> Verifier for PerSession<B> {
    fn respond(&self, scheme: &NaorScheme, history: &[Vec<ProtocolMessage>], current: &[ProtocolMessage]) -> ProtocolMessage {
        self.0[history.len()].respond(scheme, current)
    }
}

/// A verifier seen as a single-session Bob, with the earlier sessions fixed.
pub struct SessionView<'a> {
    pub verifier: &'a dyn Verifier,
    pub history: &'a [Vec<ProtocolMessage>],
}

impl BobStrategy for SessionView<'_> {
    fn respond(&self, scheme: &NaorScheme, transcript: &[ProtocolMessage]) -> ProtocolMessage {
        self.verifier.respond(scheme, self.history, transcript)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prover {
    Honest(GiWitness),
    /// No witness: guesses the challenges and hopes the oracle agrees.
    Cheating,
    /// Honest, except that it refuses to let coin `index` through.
    BlockCoin { index: usize, witness: GiWitness },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    CoinFailed(usize),
    BadProof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IqzkMessage {
    Coin(ProtocolMessage),
    Proof(NizkProof),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IqzkRun {
    pub verdict: Verdict,
    /// The coins obtained before the run ended.
    pub omega: BitString,
    pub transcript: Vec<IqzkMessage>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IqzkError {
    #[error(transparent)]
    Nizk(#[from] NizkError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

fn make_proof<R: Rng + ?Sized>(
    prover: &Prover,
    omega: &BitString,
    x: &GiInstance,
    oracle: &OracleTable,
    rng: &mut R,
) -> Result<NizkProof, NizkError> {
    match prover {
        Prover::Honest(w) | Prover::BlockCoin { witness: w, .. } => nizk_prove(omega, x, w, oracle, rng),
        Prover::Cheating => Ok(nizk_cheat(omega, x, rng)),
    }
}

fn blocks(prover: &Prover, index: usize) -> bool {
    matches!(prover, Prover::BlockCoin { index: i, .. } if *i == index)
}

fn finish(omega: BitString, mut transcript: Vec<IqzkMessage>, x: &GiInstance, proof: NizkProof, oracle: &OracleTable) -> IqzkRun {
    let verdict = if nizk_verify(&omega, x, &proof, oracle) { Verdict::Accept } else { Verdict::Reject(RejectReason::BadProof) };
    transcript.push(IqzkMessage::Proof(proof));
    IqzkRun { verdict, omega, transcript }
}

/// The protocol with ideal coins and an honest verifier.
pub fn iqzk_fcoin_run<R: Rng + ?Sized>(
    x: &GiInstance,
    k: usize,
    prover: &Prover,
    oracle: &OracleTable,
    rng: &mut R,
) -> Result<IqzkRun, NizkError> {
    let mut omega = BitString::default();
    for i in 0..k {
        let pending = PendingCoin::start(rng);
        let second = if blocks(prover, i) { SecondInput::Refuse } else { SecondInput::Ok };
        match pending.finish(second) {
            Outcome::Coin(c) => omega.push(c),
            Outcome::Fail => {
                return Ok(IqzkRun { verdict: Verdict::Reject(RejectReason::CoinFailed(i)), omega, transcript: Vec::new() })
            }
        }
    }
    let proof = make_proof(prover, &omega, x, oracle, rng)?;
    Ok(finish(omega, Vec::new(), x, proof, oracle))
}

/// One real coin flip from the prover's side, with its bit and seed fixed.
/// Returns the transcript and the coin both sides agree on, if any.
pub fn prover_session(
    scheme: &NaorScheme,
    view: &SessionView<'_>,
    a: bool,
    randomness: BitString,
    block: bool,
) -> (Vec<ProtocolMessage>, Option<bool>) {
    let alice = SessionState::alice_with_choices(*scheme.params(), a, randomness);
    let mut unused = rand::rngs::mock::StepRng::new(0, 0);
    let (mut t, outcome) = run_bob_strategy(scheme, alice, view, &mut unused);
    if block && matches!(t.last(), Some(ProtocolMessage::Open(_))) {
        *t.last_mut().expect("non-empty") = ProtocolMessage::Abort;
        return (t, None);
    }
    let coin = match outcome {
        Outcome::Coin(_) => coin_of_transcript(scheme, &t),
        Outcome::Fail => None,
    };
    (t, coin)
}

/// The full protocol with real coin flips; the prover's per-session
/// `(a, r)` choices are given, and `prove` produces the proof for `omega`.
pub fn iqzk_run_with<F>(
    scheme: &NaorScheme,
    x: &GiInstance,
    prover: &Prover,
    verifier: &dyn Verifier,
    choices: Vec<(bool, BitString)>,
    oracle: &OracleTable,
    prove: F,
) -> Result<IqzkRun, NizkError>
where
    F: FnOnce(&BitString) -> Result<NizkProof, NizkError>,
{
    let mut history: Vec<Vec<ProtocolMessage>> = Vec::new();
    let mut omega = BitString::default();
    for (i, (a, r)) in choices.into_iter().enumerate() {
        let view = SessionView { verifier, history: &history };
        let (t, coin) = prover_session(scheme, &view, a, r, blocks(prover, i));
        history.push(t);
        match coin {
            Some(c) => omega.push(c),
            None => {
                let transcript = history.into_iter().flatten().map(IqzkMessage::Coin).collect();
                return Ok(IqzkRun { verdict: Verdict::Reject(RejectReason::CoinFailed(i)), omega, transcript });
            }
        }
    }
    let proof = prove(&omega)?;
    let transcript = history.into_iter().flatten().map(IqzkMessage::Coin).collect();
    Ok(finish(omega, transcript, x, proof, oracle))
}

pub fn iqzk_run<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    x: &GiInstance,
    k: usize,
    prover: &Prover,
    verifier: &dyn Verifier,
    oracle: &OracleTable,
    rng: &mut R,
) -> Result<IqzkRun, NizkError> {
    let l = scheme.params().randomness_len();
    let choices = (0..k).map(|_| (rng.gen(), BitString::random(l, rng))).collect();
    iqzk_run_with(scheme, x, prover, verifier, choices, oracle, |omega| make_proof(prover, omega, x, oracle, rng))
}

/// Simulated transcript against `verifier` without a witness: simulate the
/// NIZK first, then force every coin flip to the matching bit of `omega` by
/// rewinding the verifier.
pub fn iqzk_simulate<R: Rng + ?Sized>(
    scheme: &NaorScheme,
    x: &GiInstance,
    k: usize,
    verifier: &dyn Verifier,
    oracle: &OracleTable,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Vec<IqzkMessage>, IqzkError> {
    let (omega, proof) = nizk_simulate(x, k, oracle, rng)?;
    let mut history: Vec<Vec<ProtocolMessage>> = Vec::new();
    for i in 0..k {
        let view = SessionView { verifier, history: &history };
        let t = simulate_dishonest_bob(scheme, &view, omega.get(i), rng, max_attempts)?;
        let done = coin_of_transcript(scheme, &t).is_some();
        history.push(t);
        if !done {
            // The verifier stopped the coin flip; the prover stops too.
            return Ok(history.into_iter().flatten().map(IqzkMessage::Coin).collect());
        }
    }
    let mut transcript: Vec<IqzkMessage> = history.into_iter().flatten().map(IqzkMessage::Coin).collect();
    transcript.push(IqzkMessage::Proof(proof));
    Ok(transcript)
}

/// The coins fixed by a transcript's complete coin-flip sessions.
pub fn omega_of_transcript(scheme: &NaorScheme, transcript: &[IqzkMessage]) -> Option<BitString> {
    let coins: Vec<ProtocolMessage> = transcript
        .iter()
        .filter_map(|m| match m {
            IqzkMessage::Coin(c) => Some(c.clone()),
            IqzkMessage::Proof(_) => None,
        })
        .collect();
    if !coins.len().is_multiple_of(SESSION_MESSAGES) {
        return None;
    }
    coins.chunks(SESSION_MESSAGES).map(|s| coin_of_transcript(scheme, s)).collect::<Option<Vec<_>>>().map(BitString::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coinflip::strategy::{FixedBitBob, TapeBob};
    use crate::commitment::{ChaChaPrg, CommitParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn scheme() -> NaorScheme {
        NaorScheme::new(CommitParams::new(8).unwrap(), ChaChaPrg)
    }

    fn honest_verifier<R: Rng>(k: usize, rng: &mut R) -> PerSession<TapeBob> {
        PerSession((0..k).map(|_| TapeBob { tape: BitString::random(25, rng) }).collect())
    }

    #[test]
    fn honest_run_accepts() {
        let s = scheme();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let oracle = OracleTable::new(b"t");
        let (x, w) = GiInstance::random_isomorphic(6, 8, &mut rng).unwrap();
        let v = honest_verifier(8, &mut rng);
        let run = iqzk_run(&s, &x, 8, &Prover::Honest(w), &v, &oracle, &mut rng).unwrap();
        assert_eq!(run.verdict, Verdict::Accept);
        assert_eq!(run.transcript.len(), 8 * SESSION_MESSAGES + 1);
        assert_eq!(omega_of_transcript(&s, &run.transcript), Some(run.omega.clone()));
        let Some(IqzkMessage::Proof(proof)) = run.transcript.last() else { panic!("proof last") };
        assert!(nizk_verify(&run.omega, &x, proof, &oracle));
    }

    #[test]
    fn blocked_coin_rejects() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let oracle = OracleTable::new(b"t");
        let (x, w) = GiInstance::random_isomorphic(6, 8, &mut rng).unwrap();
        let prover = Prover::BlockCoin { index: 3, witness: w };
        let run = iqzk_fcoin_run(&x, 8, &prover, &oracle, &mut rng).unwrap();
        assert_eq!(run.verdict, Verdict::Reject(RejectReason::CoinFailed(3)));
        assert!(run.transcript.is_empty());
        assert_eq!(run.omega.len(), 3);

        let s = scheme();
        let v = honest_verifier(8, &mut rng);
        let run = iqzk_run(&s, &x, 8, &prover, &v, &oracle, &mut rng).unwrap();
        assert_eq!(run.verdict, Verdict::Reject(RejectReason::CoinFailed(3)));
        assert_eq!(run.transcript.last(), Some(&IqzkMessage::Coin(ProtocolMessage::Abort)));
    }

    #[test]
    fn simulation_forces_omega() {
        let s = scheme();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let oracle = OracleTable::new(b"t");
        let x = GiInstance::random_non_isomorphic(6, 7, &mut rng).unwrap();
        let v = PerSession((0..4).map(|_| FixedBitBob { tape: BitString::random(24, &mut rng), b: false }).collect());
        let t = iqzk_simulate(&s, &x, 4, &v, &oracle, &mut rng, 64).unwrap();
        let omega = omega_of_transcript(&s, &t).unwrap();
        let Some(IqzkMessage::Proof(proof)) = t.last() else { panic!("proof last") };
        assert!(nizk_verify(&omega, &x, proof, &oracle));
    }
}
