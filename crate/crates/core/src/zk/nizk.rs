//! Fiat-Shamir over the graph-isomorphism rounds, with challenges drawn from
//! the oracle at `(omega, x, H_1..H_k)`.
//!
//! Binary proof form: a 32-bit big-endian body length, then the body: a
//! 16-bit round count `k`, `k` graphs, `k` permutations. A graph is a vertex
//! byte, a 16-bit edge count and one byte per endpoint; a permutation is a
//! length byte and one byte per image.

use rand::Rng;
use thiserror::Error;

use super::graph::{GiInstance, GiWitness, Graph, GraphError, Permutation};
use super::oracle::{OracleError, OracleTable};
use super::sigma::{gi_prove_round_with, gi_simulate_round_with, gi_verify_round, SigmaConversation};
use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NizkProof {
    pub firsts: Vec<Graph>,
    pub responses: Vec<Permutation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NizkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("simulation failed: {0}")]
    Oracle(#[from] OracleError),
    #[error("expected {expected} rounds, got {actual}")]
    Rounds { expected: usize, actual: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofFormatError {
    #[error("truncated proof encoding")]
    Truncated,
    #[error("{0} trailing bytes after proof")]
    Trailing(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn put_graph(out: &mut Vec<u8>, g: &Graph) {
    out.push(g.vertices() as u8);
    out.extend((g.edges().len() as u16).to_be_bytes());
    for &(i, j) in g.edges() {
        out.extend([i as u8, j as u8]);
    }
}

pub(crate) fn put_permutation(out: &mut Vec<u8>, p: &Permutation) {
    out.push(p.len() as u8);
    out.extend(p.images().iter().map(|&i| i as u8));
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ProofFormatError> {
        if self.0.len() < n {
            return Err(ProofFormatError::Truncated);
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<usize, ProofFormatError> {
        Ok(self.take(1)?[0] as usize)
    }

    fn u16(&mut self) -> Result<usize, ProofFormatError> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]) as usize)
    }

    fn graph(&mut self) -> Result<Graph, ProofFormatError> {
        let v = self.u8()?;
        let m = self.u16()?;
        let raw = self.take(2 * m)?;
        Ok(Graph::new(v, raw.chunks(2).map(|e| (e[0] as usize, e[1] as usize)))?)
    }

    fn permutation(&mut self) -> Result<Permutation, ProofFormatError> {
        let len = self.u8()?;
        let raw = self.take(len)?;
        Ok(Permutation::from_images(raw.iter().map(|&i| i as usize).collect())?)
    }
}

impl NizkProof {
    pub fn rounds(&self) -> usize {
        self.firsts.len()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut body = Vec::new();
        body.extend((self.firsts.len() as u16).to_be_bytes());
        for g in &self.firsts {
            put_graph(&mut body, g);
        }
        for p in &self.responses {
            put_permutation(&mut body, p);
        }
        let mut out = (body.len() as u32).to_be_bytes().to_vec();
        out.extend(body);
        out
    }

    /// Decodes one proof; returns it with the number of bytes consumed.
    pub fn decode(bytes: &[u8]) -> Result<(Self, usize), ProofFormatError> {
        let mut r = Reader(bytes);
        let len = u32::from_be_bytes(r.take(4)?.try_into().expect("four bytes")) as usize;
        let mut body = Reader(r.take(len)?);
        let k = body.u16()?;
        let firsts = (0..k).map(|_| body.graph()).collect::<Result<Vec<_>, _>>()?;
        let responses = (0..k).map(|_| body.permutation()).collect::<Result<Vec<_>, _>>()?;
        if !body.0.is_empty() {
            return Err(ProofFormatError::Trailing(body.0.len()));
        }
        Ok((Self { firsts, responses }, 4 + len))
    }
}

/// The oracle input for a proof under CRS `omega`.
pub fn oracle_key(omega: &BitString, x: &GiInstance, firsts: &[Graph]) -> Vec<u8> {
    let mut key = b"gi-nizk".to_vec();
    key.extend(omega.encode());
    put_graph(&mut key, &x.g0);
    put_graph(&mut key, &x.g1);
    key.extend((firsts.len() as u16).to_be_bytes());
    for h in firsts {
        put_graph(&mut key, h);
    }
    key
}

pub fn nizk_challenges(omega: &BitString, x: &GiInstance, firsts: &[Graph], oracle: &OracleTable) -> BitString {
    oracle.query(&oracle_key(omega, x, firsts), firsts.len())
}

pub fn nizk_prove<R: Rng + ?Sized>(
    omega: &BitString,
    x: &GiInstance,
    w: &GiWitness,
    oracle: &OracleTable,
    rng: &mut R,
) -> Result<NizkProof, NizkError> {
    let rhos = (0..omega.len()).map(|_| Permutation::random(x.vertices(), rng)).collect();
    nizk_prove_with(omega, x, w, rhos, oracle)
}

/// One round per CRS bit, with the round permutations given.
pub fn nizk_prove_with(
    omega: &BitString,
    x: &GiInstance,
    w: &GiWitness,
    rhos: Vec<Permutation>,
    oracle: &OracleTable,
) -> Result<NizkProof, NizkError> {
    if rhos.len() != omega.len() {
        return Err(NizkError::Rounds { expected: omega.len(), actual: rhos.len() });
    }
    let rounds = rhos.into_iter().map(|rho| gi_prove_round_with(x, w, rho)).collect::<Result<Vec<_>, _>>()?;
    let firsts: Vec<Graph> = rounds.iter().map(|r| r.first_message().clone()).collect();
    let challenges = nizk_challenges(omega, x, &firsts, oracle);
    let responses = rounds.iter().enumerate().map(|(i, r)| r.respond(challenges.get(i))).collect();
    Ok(NizkProof { firsts, responses })
}

pub fn nizk_verify(omega: &BitString, x: &GiInstance, proof: &NizkProof, oracle: &OracleTable) -> bool {
    let k = omega.len();
    if proof.firsts.len() != k || proof.responses.len() != k {
        return false;
    }
    let challenges = nizk_challenges(omega, x, &proof.firsts, oracle);
    proof.firsts.iter().zip(&proof.responses).enumerate().all(|(i, (h, z))| {
        gi_verify_round(x, &SigmaConversation { h: h.clone(), challenge: challenges.get(i), z: z.clone() })
    })
}

/// Samples `omega` and the challenges, simulates each round, and programs the
/// oracle so the proof verifies.
pub fn nizk_simulate<R: Rng + ?Sized>(
    x: &GiInstance,
    k: usize,
    oracle: &OracleTable,
    rng: &mut R,
) -> Result<(BitString, NizkProof), NizkError> {
    let omega = BitString::random(k, rng);
    let challenges = BitString::random(k, rng);
    let rhos = (0..k).map(|_| Permutation::random(x.vertices(), rng)).collect();
    let proof = nizk_simulate_with(x, &omega, &challenges, rhos, oracle)?;
    Ok((omega, proof))
}

pub fn nizk_simulate_with(
    x: &GiInstance,
    omega: &BitString,
    challenges: &BitString,
    rhos: Vec<Permutation>,
    oracle: &OracleTable,
) -> Result<NizkProof, NizkError> {
    let k = omega.len();
    if challenges.len() != k || rhos.len() != k {
        return Err(NizkError::Rounds { expected: k, actual: rhos.len().min(challenges.len()) });
    }
    let convs: Vec<SigmaConversation> =
        rhos.into_iter().enumerate().map(|(i, rho)| gi_simulate_round_with(x, challenges.get(i), rho)).collect();
    let firsts: Vec<Graph> = convs.iter().map(|c| c.h.clone()).collect();
    oracle.program(&oracle_key(omega, x, &firsts), challenges.clone())?;
    Ok(NizkProof { firsts, responses: convs.into_iter().map(|c| c.z).collect() })
}

/// A prover without a witness: guesses every challenge, simulates the rounds
/// for the guess, and asks the oracle once.
pub fn nizk_cheat<R: Rng + ?Sized>(omega: &BitString, x: &GiInstance, rng: &mut R) -> NizkProof {
    let guesses = BitString::random(omega.len(), rng);
    let convs: Vec<SigmaConversation> =
        (0..omega.len()).map(|i| gi_simulate_round_with(x, guesses.get(i), Permutation::random(x.vertices(), rng))).collect();
    NizkProof { firsts: convs.iter().map(|c| c.h.clone()).collect(), responses: convs.into_iter().map(|c| c.z).collect() }
}
