//! The extended commitment: a graph-isomorphism first message plus two
//! bitwise LWE commitments, one per challenge.
//!
//! A response `z` is encoded as its vertex images, `ceil(log2 v)` bits each,
//! most significant first, so every encoding at a given `v` has the same length.

use rand::Rng;
use thiserror::Error;

use super::lwe::{KeyMode, LweCiphertext, LweError, RegevKey};
use crate::zk::graph::{GiInstance, GiWitness, Graph, GraphError, Permutation};
use crate::zk::sigma::{gi_prove_round, gi_simulate_round, gi_verify_round, SigmaConversation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtError {
    #[error("equivocation needs a hiding key")]
    NotHiding,
    #[error("extraction needs a binding key")]
    NotBinding,
    #[error("neither slot holds an accepting response")]
    Junk,
    #[error("both slots hold accepting responses, which yields a witness")]
    RelationBreak,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lwe(#[from] LweError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtCrs {
    pub key: RegevKey,
    pub instance: GiInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtCommitment {
    pub first: Graph,
    pub c0: Vec<LweCiphertext>,
    pub c1: Vec<LweCiphertext>,
}

impl ExtCommitment {
    pub fn slot(&self, a: bool) -> &[LweCiphertext] {
        if a {
            &self.c1
        } else {
            &self.c0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtOpening {
    pub bit: bool,
    pub z: Permutation,
    /// One subset per committed bit of the encoded response.
    pub subsets: Vec<Vec<bool>>,
}

pub fn vertex_bits(v: usize) -> usize {
    v.next_power_of_two().trailing_zeros() as usize
}

/// Length `z'` of every encoded response on `v` vertices.
pub fn response_len(v: usize) -> usize {
    v * vertex_bits(v)
}

pub fn encode_response(z: &Permutation) -> Vec<bool> {
    let w = vertex_bits(z.len());
    z.images().iter().flat_map(|&i| (0..w).rev().map(move |b| i >> b & 1 == 1)).collect()
}

/// `None` unless the bits spell a permutation of `0..v`.
pub fn decode_response(bits: &[bool], v: usize) -> Option<Permutation> {
    let w = vertex_bits(v);
    if bits.len() != v * w {
        return None;
    }
    let images: Vec<usize> = if w == 0 {
        vec![0; v]
    } else {
        bits.chunks(w).map(|c| c.iter().fold(0, |acc, &b| acc << 1 | b as usize)).collect()
    };
    Permutation::from_images(images).ok()
}

fn commit_bits<R: Rng + ?Sized>(key: &RegevKey, bits: &[bool], rng: &mut R) -> (Vec<LweCiphertext>, Vec<Vec<bool>>) {
    bits.iter().map(|&b| key.commit_bit(b, rng)).unzip()
}

/// Commits to `a` with a simulated conversation for challenge `a`; the other
/// slot commits to zeros.
pub fn ext_commit<R: Rng + ?Sized>(crs: &ExtCrs, a: bool, rng: &mut R) -> (ExtCommitment, ExtOpening) {
    let conv = gi_simulate_round(&crs.instance, a, rng);
    let (real, subsets) = commit_bits(&crs.key, &encode_response(&conv.z), rng);
    let (zeros, _) = commit_bits(&crs.key, &vec![false; response_len(crs.instance.vertices())], rng);
    let (c0, c1) = if a { (zeros, real) } else { (real, zeros) };
    (ExtCommitment { first: conv.h, c0, c1 }, ExtOpening { bit: a, z: conv.z, subsets })
}

pub fn ext_verify(crs: &ExtCrs, com: &ExtCommitment, opening: &ExtOpening) -> bool {
    let encoded = encode_response(&opening.z);
    let slot = com.slot(opening.bit);
    slot.len() == encoded.len()
        && opening.subsets.len() == encoded.len()
        && slot.iter().zip(&encoded).zip(&opening.subsets).all(|((ct, &b), s)| crs.key.verify_open(ct, b, s))
        && gi_verify_round(&crs.instance, &SigmaConversation { h: com.first.clone(), challenge: opening.bit, z: opening.z.clone() })
}

/// Decrypts both slots and returns the one index with an accepting response.
pub fn ext_extract(crs: &ExtCrs, com: &ExtCommitment) -> Result<bool, ExtError> {
    if crs.key.mode() != KeyMode::Binding {
        return Err(ExtError::NotBinding);
    }
    let v = crs.instance.vertices();
    let valid = |a: bool| -> Result<bool, ExtError> {
        let bits = com.slot(a).iter().map(|ct| crs.key.extract(ct)).collect::<Result<Vec<_>, _>>()?;
        Ok(decode_response(&bits, v).is_some_and(|z| {
            gi_verify_round(&crs.instance, &SigmaConversation { h: com.first.clone(), challenge: a, z })
        }))
    };
    match (valid(false)?, valid(true)?) {
        (true, false) => Ok(false),
        (false, true) => Ok(true),
        (false, false) => Err(ExtError::Junk),
        (true, true) => Err(ExtError::RelationBreak),
    }
}

/// One first message answering both challenges, with both responses committed.
pub fn ext_equivocate<R: Rng + ?Sized>(
    crs: &ExtCrs,
    w: &GiWitness,
    rng: &mut R,
) -> Result<(ExtCommitment, ExtOpening, ExtOpening), ExtError> {
    if crs.key.mode() != KeyMode::Hiding {
        return Err(ExtError::NotHiding);
    }
    let round = gi_prove_round(&crs.instance, w, rng)?;
    let (z0, z1) = (round.respond(false), round.respond(true));
    let (c0, s0) = commit_bits(&crs.key, &encode_response(&z0), rng);
    let (c1, s1) = commit_bits(&crs.key, &encode_response(&z1), rng);
    Ok((
        ExtCommitment { first: round.first_message().clone(), c0, c1 },
        ExtOpening { bit: false, z: z0, subsets: s0 },
        ExtOpening { bit: true, z: z1, subsets: s1 },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualmode::lwe::LweParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn binding_crs(rng: &mut ChaCha20Rng) -> ExtCrs {
        let key = RegevKey::keygen_binding(LweParams::new(4, 16, 97, 1).unwrap(), rng);
        ExtCrs { key, instance: GiInstance::random_non_isomorphic(6, 7, rng).unwrap() }
    }

    #[test]
    fn encoding_is_fixed_width() {
        assert_eq!(vertex_bits(1), 0);
        assert_eq!(vertex_bits(3), 2);
        assert_eq!(vertex_bits(4), 2);
        assert_eq!(vertex_bits(5), 3);
        for z in Permutation::all(5) {
            let e = encode_response(&z);
            assert_eq!(e.len(), response_len(5));
            assert_eq!(decode_response(&e, 5), Some(z));
        }
        assert_eq!(decode_response(&[true; 6], 3), None);
    }

    #[test]
    fn commit_verify_extract() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let crs = binding_crs(&mut rng);
        for a in [false, true] {
            let (com, open) = ext_commit(&crs, a, &mut rng);
            assert!(ext_verify(&crs, &com, &open));
            assert_eq!(ext_extract(&crs, &com), Ok(a));
            let swapped = ExtCommitment { first: com.first.clone(), c0: com.c1.clone(), c1: com.c0.clone() };
            assert!(!ext_verify(&crs, &swapped, &open));
        }
    }

    #[test]
    fn zero_slots_are_junk() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let crs = binding_crs(&mut rng);
        let zeros = |rng: &mut ChaCha20Rng| commit_bits(&crs.key, &vec![false; response_len(6)], rng).0;
        let com = ExtCommitment { first: crs.instance.g0.clone(), c0: zeros(&mut rng), c1: zeros(&mut rng) };
        assert_eq!(ext_extract(&crs, &com), Err(ExtError::Junk));
    }

    #[test]
    fn mode_guards() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let crs = binding_crs(&mut rng);
        let w = GiWitness(Permutation::identity(6));
        assert_eq!(ext_equivocate(&crs, &w, &mut rng).unwrap_err(), ExtError::NotHiding);
        let hiding = ExtCrs { key: RegevKey::keygen_hiding(*crs.key.params(), &mut rng), instance: crs.instance.clone() };
        let (com, _) = ext_commit(&hiding, true, &mut rng);
        assert_eq!(ext_extract(&hiding, &com), Err(ExtError::NotBinding));
    }

    #[test]
    fn equivocation_opens_both_ways() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (x, w) = GiInstance::random_isomorphic(6, 8, &mut rng).unwrap();
        let crs = ExtCrs { key: RegevKey::keygen_hiding(LweParams::new(4, 16, 97, 1).unwrap(), &mut rng), instance: x };
        let (com, open0, open1) = ext_equivocate(&crs, &w, &mut rng).unwrap();
        assert!(ext_verify(&crs, &com, &open0));
        assert!(ext_verify(&crs, &com, &open1));
    }
}
