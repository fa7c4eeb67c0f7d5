//! Exact-distribution harnesses shared by the integration and acceptance tests.
//!
//! Every random choice of both worlds is enumerated, and the resulting
//! distributions over transcripts are compared as exact rationals.

#![allow(dead_code)]

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::Ratio;
use qcoin_core::coinflip::simulator::{bob_sim_attempt, simulate_dishonest_alice_with, Attempt, Extractor};
use qcoin_core::coinflip::strategy::{AliceStrategy, BobStrategy, FixedBitBob, TapeBob};
use qcoin_core::coinflip::{coin_of_transcript, run_alice_strategy, Outcome, ProtocolMessage, SessionState};
use qcoin_core::commitment::{ChaChaPrg, CommitParams, NaorScheme, ReceiverNonce};
use qcoin_core::zk::iqzk::{iqzk_run_with, SessionView};
use qcoin_core::zk::nizk::{nizk_prove_with, nizk_simulate_with, oracle_key};
use qcoin_core::zk::{GiInstance, GiWitness, Graph, IqzkMessage, OracleTable, Permutation, Prover, Verifier};
use qcoin_core::BitString;

pub type Dist<K> = HashMap<K, Ratio<u128>>;

fn add<K: Hash + Eq>(d: &mut Dist<K>, k: K, p: Ratio<u128>) {
    *d.entry(k).or_insert_with(|| Ratio::from_integer(0)) += p;
}

pub fn total<K>(d: &Dist<K>) -> Ratio<u128> {
    d.values().fold(Ratio::from_integer(0), |a, b| a + b)
}

fn all_bitstrings(len: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << len).map(move |v| BitString::from_u64(v, len))
}

pub struct AliceReport {
    pub strategies: usize,
    pub tapes: usize,
    /// Nonces on which some commitment string has preimages under both bits.
    pub violating_nonces: usize,
    /// Strategies whose distributions differ on the full tape space.
    pub mismatches: Vec<usize>,
    /// Strategies whose distributions differ once the all-zero nonce is dropped.
    pub mismatches_off_zero: Vec<usize>,
    /// Strategies whose distributions differ on collision-free nonces.
    pub mismatches_clean: Vec<usize>,
}

type Joint = HashMap<(Vec<ProtocolMessage>, Outcome), u64>;

/// Real world: honest Bob with nonce and challenge from his tape. Ideal world:
/// the simulator with the same nonce and an ideal coin. Every tape is
/// enumerated; the comparison is repeated on two subsets of nonces.
pub fn alice_simulator_exactness(n: usize, strategies: &[&dyn AliceStrategy]) -> AliceReport {
    let scheme = NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg);
    let extractor = Extractor::new(&scheme).unwrap();
    let table = scheme.image_table().unwrap();
    let nonces: Vec<ReceiverNonce> = all_bitstrings(3 * n).map(|s| ReceiverNonce::new(scheme.params(), s).unwrap()).collect();
    let clean: Vec<bool> = nonces.iter().map(|nonce| table.cross_bit_collisions(nonce).is_empty()).collect();
    let mut report = AliceReport {
        strategies: strategies.len(),
        tapes: 2 * nonces.len(),
        violating_nonces: clean.iter().filter(|c| !**c).count(),
        mismatches: Vec::new(),
        mismatches_off_zero: Vec::new(),
        mismatches_clean: Vec::new(),
    };
    let mut unused = rand::rngs::mock::StepRng::new(0, 0);
    for (i, strategy) in strategies.iter().enumerate() {
        // Index 0: all nonces; 1: nonzero nonces; 2: collision-free nonces.
        let mut real: [Joint; 3] = Default::default();
        let mut ideal: [Joint; 3] = Default::default();
        for (nonce, &is_clean) in nonces.iter().zip(&clean) {
            let keep = [true, nonce.sigma().count_ones() > 0, is_clean];
            for bit in [false, true] {
                let bob = SessionState::bob_with_choices(*scheme.params(), nonce.clone(), bit);
                let r = run_alice_strategy(&scheme, *strategy, bob, &mut unused);
                let s = simulate_dishonest_alice_with(&extractor, *strategy, nonce.clone(), bit).unwrap();
                for j in (0..3).filter(|&j| keep[j]) {
                    *real[j].entry(r.clone()).or_default() += 1;
                    *ideal[j].entry(s.clone()).or_default() += 1;
                }
            }
        }
        for (j, list) in [&mut report.mismatches, &mut report.mismatches_off_zero, &mut report.mismatches_clean].into_iter().enumerate() {
            if real[j] != ideal[j] {
                list.push(i);
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifierKind {
    Honest,
    FixedBit(bool),
}

fn verifiers(scheme: &NaorScheme, kind: VerifierKind) -> Vec<Box<dyn BobStrategy>> {
    let len = scheme.params().expanded_len();
    match kind {
        VerifierKind::Honest => all_bitstrings(len + 1).map(|tape| Box::new(TapeBob { tape }) as Box<dyn BobStrategy>).collect(),
        VerifierKind::FixedBit(b) => {
            all_bitstrings(len).map(|tape| Box::new(FixedBitBob { tape, b }) as Box<dyn BobStrategy>).collect()
        }
    }
}

struct One<'a>(&'a dyn BobStrategy);

impl Verifier for One<'_> {
    fn respond(&self, scheme: &NaorScheme, _history: &[Vec<ProtocolMessage>], current: &[ProtocolMessage]) -> ProtocolMessage {
        self.0.respond(scheme, current)
    }
}

/// A view: the transcript together with the oracle's answer on the proof's query.
pub type View = (Vec<IqzkMessage>, Option<BitString>);

pub fn toy_instance() -> (GiInstance, GiWitness) {
    let g0 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let w = Permutation::from_images(vec![2, 0, 1]).unwrap();
    let g1 = g0.permute(&w);
    (GiInstance::new(g0, g1).unwrap(), GiWitness(w))
}

/// One coin, so `omega` is a single bit; every verifier tape, every prover
/// choice `(a, r, rho)` and the oracle's answer are enumerated.
pub fn iqzk_real(n: usize, kind: VerifierKind) -> Dist<View> {
    let scheme = NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg);
    let (x, w) = toy_instance();
    let tapes = verifiers(&scheme, kind);
    let rhos = Permutation::all(3);
    let weight = Ratio::new(1, (tapes.len() * 2 * (1 << n) * rhos.len() * 2) as u128);
    let mut dist = Dist::new();
    for tape in &tapes {
        let verifier = One(tape.as_ref());
        for a in [false, true] {
            for r in all_bitstrings(n) {
                for rho in &rhos {
                    for answer in [false, true] {
                        let oracle = OracleTable::new(b"");
                        let prove = |omega: &BitString| {
                            let h = x.g0.permute(rho);
                            oracle.program(&oracle_key(omega, &x, &[h]), BitString::new(vec![answer])).unwrap();
                            nizk_prove_with(omega, &x, &w, vec![rho.clone()], &oracle)
                        };
                        let run = iqzk_run_with(&scheme, &x, &Prover::Honest(w.clone()), &verifier, vec![(a, r.clone())], &oracle, prove)
                            .unwrap();
                        let proof_answer = run.transcript.iter().any(|m| matches!(m, IqzkMessage::Proof(_))).then(|| BitString::new(vec![answer]));
                        add(&mut dist, (run.transcript, proof_answer), weight);
                    }
                }
            }
        }
    }
    dist
}

/// The simulator's choices `(omega, challenge, rho)` are enumerated; the
/// rewinding loop outputs a uniform accepted attempt, so each attempt in the
/// accepted set gets weight `1 / |accepted|`.
pub fn iqzk_simulated(n: usize, kind: VerifierKind) -> Dist<View> {
    let scheme = NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg);
    let (x, _) = toy_instance();
    let tapes = verifiers(&scheme, kind);
    let rhos = Permutation::all(3);
    let weight = Ratio::new(1, (tapes.len() * 2 * 2 * rhos.len()) as u128);
    let mut dist = Dist::new();
    for tape in &tapes {
        let verifier = One(tape.as_ref());
        let view = SessionView { verifier: &verifier, history: &[] };
        for omega in [false, true] {
            for challenge in [false, true] {
                for rho in &rhos {
                    let oracle = OracleTable::new(b"");
                    let omega_bits = BitString::new(vec![omega]);
                    let c = BitString::new(vec![challenge]);
                    let proof = nizk_simulate_with(&x, &omega_bits, &c, vec![rho.clone()], &oracle).unwrap();
                    let mut accepted = Vec::new();
                    for a in [false, true] {
                        for r in all_bitstrings(n) {
                            if let Attempt::Accepted(t) = bob_sim_attempt(&scheme, &view, omega, a, r) {
                                accepted.push(t);
                            }
                        }
                    }
                    assert!(!accepted.is_empty(), "some guess always matches a classical verifier");
                    let each = weight / Ratio::from_integer(accepted.len() as u128);
                    for t in accepted {
                        let done = coin_of_transcript(&scheme, &t).is_some();
                        let mut msgs: Vec<IqzkMessage> = t.into_iter().map(IqzkMessage::Coin).collect();
                        let answer = done.then(|| {
                            msgs.push(IqzkMessage::Proof(proof.clone()));
                            c.clone()
                        });
                        add(&mut dist, (msgs, answer), each);
                    }
                }
            }
        }
    }
    dist
}
