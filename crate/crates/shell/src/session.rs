//! Driving one coin-flip session over an endpoint.

use qcoin_core::coinflip::{Outcome, ProtocolMessage, Role, SessionState};
use qcoin_core::commitment::NaorScheme;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::transport::{Endpoint, InProcess};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionReport {
    pub outcome: Outcome,
    /// Every message sent or received, in order.
    pub transcript: Vec<ProtocolMessage>,
    /// Why the session failed on the transport side, if it did.
    pub diagnostic: Option<String>,
}

/// The rng for `role` in session `index`: the seed picks the key and
/// `(index, role)` picks the stream, so each party's draws do not depend on
/// the transport or on other sessions.
pub fn session_rng(seed: u64, role: Role, index: u32) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream((index as u64) << 1 | (role == Role::Bob) as u64);
    rng
}

/// Runs the state machine until it finishes. Transport failures end the
/// session with `Fail` and a diagnostic; nothing is retried.
pub fn run_session<R: Rng + ?Sized>(role: Role, endpoint: &mut dyn Endpoint, scheme: &NaorScheme, rng: &mut R) -> SessionReport {
    let mut state = match role {
        Role::Alice => SessionState::alice(*scheme.params()),
        Role::Bob => SessionState::bob(*scheme.params()),
    };
    let fail = |state: &SessionState, why: String| SessionReport {
        outcome: Outcome::Fail,
        transcript: state.transcript().to_vec(),
        diagnostic: Some(why),
    };
    if role == Role::Bob {
        if let Some(first) = state.step(scheme, None, rng) {
            if let Err(e) = endpoint.send(&first) {
                return fail(&state, e.to_string());
            }
        }
    }
    while !state.is_finished() {
        let msg = match endpoint.recv() {
            Ok(m) => m,
            Err(e) => return fail(&state, e.to_string()),
        };
        if let Some(reply) = state.step(scheme, Some(&msg), rng) {
            if let Err(e) = endpoint.send(&reply) {
                return fail(&state, e.to_string());
            }
        }
    }
    SessionReport {
        outcome: state.outcome().unwrap_or(Outcome::Fail),
        transcript: state.transcript().to_vec(),
        diagnostic: None,
    }
}

/// Both parties of session `index` on threads joined by an in-memory pipe.
pub fn run_in_process(scheme: &NaorScheme, seed: u64, index: u32) -> (SessionReport, SessionReport) {
    let (mut a, mut b) = InProcess::pair();
    std::thread::scope(|s| {
        let bob = s.spawn(move || run_session(Role::Bob, &mut b, scheme, &mut session_rng(seed, Role::Bob, index)));
        let alice = run_session(Role::Alice, &mut a, scheme, &mut session_rng(seed, Role::Alice, index));
        (alice, bob.join().expect("bob thread panicked"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcoin_core::commitment::{ChaChaPrg, CommitParams};

    fn scheme() -> NaorScheme {
        NaorScheme::new(CommitParams::new(16).unwrap(), ChaChaPrg)
    }

    #[test]
    fn loopback_parties_agree() {
        let s = scheme();
        for i in 0..20 {
            let (alice, bob) = run_in_process(&s, 7, i);
            assert!(matches!(alice.outcome, Outcome::Coin(_)));
            assert_eq!(alice.outcome, bob.outcome);
            assert_eq!(alice.transcript, bob.transcript);
            assert_eq!(alice.transcript.len(), 4);
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let s = scheme();
        assert_eq!(run_in_process(&s, 3, 5), run_in_process(&s, 3, 5));
        let coins: Vec<Outcome> = (0..16).map(|i| run_in_process(&s, 3, i).0.outcome).collect();
        assert!(coins.contains(&Outcome::Coin(false)) && coins.contains(&Outcome::Coin(true)));
    }

    #[test]
    fn unknown_tag_fails_the_session() {
        let s = scheme();
        let (mut a, mut b) = InProcess::pair();
        let mut rng = session_rng(1, Role::Alice, 0);
        b.send_raw(vec![7, 0, 0, 0, 0]).unwrap();
        let report = run_session(Role::Alice, &mut a, &s, &mut rng);
        assert_eq!(report.outcome, Outcome::Fail);
        assert!(report.diagnostic.unwrap().contains("tag 7"));
    }

    #[test]
    fn hang_up_fails_the_session() {
        let s = scheme();
        let (mut a, b) = InProcess::pair();
        drop(b);
        let report = run_session(Role::Bob, &mut a, &s, &mut session_rng(1, Role::Bob, 0));
        assert_eq!(report.outcome, Outcome::Fail);
        assert!(report.diagnostic.is_some());
    }
}
