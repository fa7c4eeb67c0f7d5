//! The three-move graph-isomorphism proof.

use rand::Rng;

use super::graph::{GiInstance, GiWitness, Graph, GraphError, Permutation};

/// `(H, c, z)`: first message, challenge bit, response.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaConversation {
    pub h: Graph,
    pub challenge: bool,
    pub z: Permutation,
}

/// The prover's state after sending `H = rho(G0)`.
#[derive(Debug, Clone)]
pub struct ProverRound {
    h: Graph,
    rho: Permutation,
    rho_w_inv: Permutation,
}

impl ProverRound {
    pub fn first_message(&self) -> &Graph {
        &self.h
    }

    /// `rho` for challenge 0, `rho ∘ w⁻¹` for challenge 1.
    pub fn respond(&self, challenge: bool) -> Permutation {
        if challenge {
            self.rho_w_inv.clone()
        } else {
            self.rho.clone()
        }
    }

    pub fn conversation(&self, challenge: bool) -> SigmaConversation {
        SigmaConversation { h: self.h.clone(), challenge, z: self.respond(challenge) }
    }
}

pub fn gi_prove_round<R: Rng + ?Sized>(x: &GiInstance, w: &GiWitness, rng: &mut R) -> Result<ProverRound, GraphError> {
    gi_prove_round_with(x, w, Permutation::random(x.vertices(), rng))
}

pub fn gi_prove_round_with(x: &GiInstance, w: &GiWitness, rho: Permutation) -> Result<ProverRound, GraphError> {
    if !x.check(w) {
        return Err(GraphError::InvalidWitness);
    }
    let h = x.g0.permute(&rho);
    let rho_w_inv = rho.compose(&w.0.inverse());
    Ok(ProverRound { h, rho, rho_w_inv })
}

pub fn gi_verify_round(x: &GiInstance, conv: &SigmaConversation) -> bool {
    conv.z.len() == x.vertices() && conv.h.vertices() == x.vertices() && x.graph(conv.challenge).permute(&conv.z) == conv.h
}

/// Picks the challenge first and builds an accepting conversation without a witness.
pub fn gi_simulate_round<R: Rng + ?Sized>(x: &GiInstance, challenge: bool, rng: &mut R) -> SigmaConversation {
    gi_simulate_round_with(x, challenge, Permutation::random(x.vertices(), rng))
}

pub fn gi_simulate_round_with(x: &GiInstance, challenge: bool, rho: Permutation) -> SigmaConversation {
    SigmaConversation { h: x.graph(challenge).permute(&rho), challenge, z: rho }
}
