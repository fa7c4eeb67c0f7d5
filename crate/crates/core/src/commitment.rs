//! Naor-style bit commitment from a length-tripling pseudorandom generator.
//!
//! The receiver first sends a nonce `sigma` of `3n` bits. To commit to `bit`
//! with seed `r` the sender outputs `G(r)` when `bit = 0` and `G(r) ^ sigma`
//! when `bit = 1`. Binding is statistical over the choice of `sigma`: it fails
//! only if `sigma` lies in the set `{G(r) ^ G(r')}`, which has density at most
//! `2^-n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::BitString;

/// Largest `n` for which exhaustive tables over `{0,1}^n` are built.
pub const MAX_EXHAUSTIVE_N: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommitError {
    #[error("security parameter must be at least 1")]
    ZeroSecurityParameter,
    #[error("{what} has length {actual}, expected {expected}")]
    Length { what: &'static str, expected: usize, actual: usize },
    #[error("exhaustive search requested for n = {0}, limit is {MAX_EXHAUSTIVE_N}")]
    TooLargeForExhaustive(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommitParams {
    n: usize,
}

impl CommitParams {
    pub fn new(n: usize) -> Result<Self, CommitError> {
        if n == 0 {
            return Err(CommitError::ZeroSecurityParameter);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Randomness length `l`; equal to `n` for this instantiation.
    pub fn randomness_len(&self) -> usize {
        self.n
    }

    /// Length of both the receiver nonce and the commitment string.
    pub fn expanded_len(&self) -> usize {
        3 * self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReceiverNonce(BitString);

impl ReceiverNonce {
    pub fn new(params: &CommitParams, sigma: BitString) -> Result<Self, CommitError> {
        check_len("receiver nonce", params.expanded_len(), sigma.len())?;
        Ok(Self(sigma))
    }

    pub fn random<R: Rng + ?Sized>(params: &CommitParams, rng: &mut R) -> Self {
        Self(BitString::random(params.expanded_len(), rng))
    }

    /// Unchecked; a nonce decoded off the wire is length-checked by the session.
    pub fn from_wire(sigma: BitString) -> Self {
        Self(sigma)
    }

    pub fn sigma(&self) -> &BitString {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Commitment(pub BitString);

impl Commitment {
    pub fn value(&self) -> &BitString {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Opening {
    pub bit: bool,
    pub randomness: BitString,
}

/// A deterministic expander from `n` seed bits to `3n` output bits.
pub trait Prg: Send + Sync + fmt::Debug {
    fn expand(&self, seed: &BitString) -> BitString;
}

/// ChaCha20 keyed by SHA-256 of the seed; the production generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChaChaPrg;

impl Prg for ChaChaPrg {
    fn expand(&self, seed: &BitString) -> BitString {
        let mut hasher = Sha256::new();
        hasher.update(b"qcoin/naor-prg/v1");
        hasher.update(seed.encode());
        let key: [u8; 32] = hasher.finalize().into();
        let mut stream = ChaCha20Rng::from_seed(key);
        let out_len = 3 * seed.len();
        let mut bytes = vec![0u8; out_len.div_ceil(8)];
        stream.fill(&mut bytes[..]);
        (0..out_len).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0).collect()
    }
}

/// Test stub `G(r) = r || r || r`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RepeatPrg;

impl Prg for RepeatPrg {
    fn expand(&self, seed: &BitString) -> BitString {
        seed.concat(seed).concat(seed)
    }
}

/// The commitment scheme: parameters plus a generator.
#[derive(Debug, Clone)]
pub struct NaorScheme {
    params: CommitParams,
    prg: Arc<dyn Prg>,
}

impl NaorScheme {
    pub fn new(params: CommitParams, prg: impl Prg + 'static) -> Self {
        Self { params, prg: Arc::new(prg) }
    }

    pub fn params(&self) -> &CommitParams {
        &self.params
    }

    pub fn prg_expand(&self, seed: &BitString) -> Result<BitString, CommitError> {
        check_len("prg seed", self.params.n, seed.len())?;
        let out = self.prg.expand(seed);
        debug_assert_eq!(out.len(), self.params.expanded_len());
        Ok(out)
    }

    pub fn commit(
        &self,
        nonce: &ReceiverNonce,
        bit: bool,
        randomness: &BitString,
    ) -> Result<Commitment, CommitError> {
        check_len("randomness", self.params.randomness_len(), randomness.len())?;
        check_len("receiver nonce", self.params.expanded_len(), nonce.0.len())?;
        let g = self.prg_expand(randomness)?;
        Ok(Commitment(if bit { &g ^ nonce.sigma() } else { g }))
    }

    /// Malformed lengths are rejected rather than reported as errors.
    pub fn verify_open(&self, nonce: &ReceiverNonce, c: &Commitment, opening: &Opening) -> bool {
        if c.0.len() != self.params.expanded_len() {
            return false;
        }
        match self.commit(nonce, opening.bit, &opening.randomness) {
            Ok(expected) => expected == *c,
            Err(_) => false,
        }
    }

    /// Tabulates `G(r)` for every seed; the basis for exhaustive extraction.
    pub fn image_table(&self) -> Result<ImageTable, CommitError> {
        let n = self.params.n;
        if n > MAX_EXHAUSTIVE_N {
            return Err(CommitError::TooLargeForExhaustive(n));
        }
        let mut by_image: HashMap<BitString, Vec<u64>> = HashMap::with_capacity(1 << n);
        for r in 0..(1u64 << n) {
            let g = self.prg.expand(&BitString::from_u64(r, n));
            by_image.entry(g).or_default().push(r);
        }
        Ok(ImageTable { params: self.params, by_image })
    }
}

/// All preimages of the generator, keyed by output.
#[derive(Debug, Clone)]
pub struct ImageTable {
    params: CommitParams,
    by_image: HashMap<BitString, Vec<u64>>,
}

impl ImageTable {
    pub fn params(&self) -> &CommitParams {
        &self.params
    }

    /// Every opening `(bit, r)` with `commit(bit, r) = c` under `nonce`.
    pub fn preimages(&self, nonce: &ReceiverNonce, c: &Commitment) -> Vec<Opening> {
        let n = self.params.n;
        let mut out = Vec::new();
        if c.0.len() != self.params.expanded_len() || nonce.0.len() != c.0.len() {
            return out;
        }
        if let Some(rs) = self.by_image.get(&c.0) {
            out.extend(rs.iter().map(|&r| Opening { bit: false, randomness: BitString::from_u64(r, n) }));
        }
        let shifted = &c.0 ^ nonce.sigma();
        if let Some(rs) = self.by_image.get(&shifted) {
            out.extend(rs.iter().map(|&r| Opening { bit: true, randomness: BitString::from_u64(r, n) }));
        }
        out
    }

    /// Pairs `(r, r')` with `commit(0, r) = commit(1, r')` under `nonce`.
    pub fn cross_bit_collisions(&self, nonce: &ReceiverNonce) -> Vec<(BitString, BitString)> {
        let n = self.params.n;
        let mut out = Vec::new();
        for (g, rs) in &self.by_image {
            if let Some(rs1) = self.by_image.get(&(g ^ nonce.sigma())) {
                for &r0 in rs {
                    for &r1 in rs1 {
                        out.push((BitString::from_u64(r0, n), BitString::from_u64(r1, n)));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<(), CommitError> {
    if expected != actual {
        return Err(CommitError::Length { what, expected, actual });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn stub(n: usize) -> NaorScheme {
        NaorScheme::new(CommitParams::new(n).unwrap(), RepeatPrg)
    }

    #[test]
    fn stub_generator_repeats_seed() {
        assert_eq!(stub(3).prg_expand(&bits("101")).unwrap(), bits("101101101"));
    }

    #[test]
    fn zero_nonce_collapses_both_bits() {
        let s = stub(3);
        let nonce = ReceiverNonce::new(s.params(), bits("000000000")).unwrap();
        assert_eq!(s.commit(&nonce, false, &bits("101")).unwrap().0, bits("101101101"));
        assert_eq!(s.commit(&nonce, true, &bits("101")).unwrap().0, bits("101101101"));
    }

    #[test]
    fn one_bit_xors_nonce() {
        let s = stub(3);
        let nonce = ReceiverNonce::new(s.params(), bits("111111111")).unwrap();
        assert_eq!(s.commit(&nonce, true, &bits("101")).unwrap().0, bits("010010010"));
    }

    #[test]
    fn production_generator_is_deterministic_and_sized() {
        let s = NaorScheme::new(CommitParams::new(16).unwrap(), ChaChaPrg);
        let seed = BitString::from_u64(0xbeef, 16);
        let a = s.prg_expand(&seed).unwrap();
        assert_eq!(a, s.prg_expand(&seed).unwrap());
        assert_eq!(a.len(), 48);
    }

    #[test]
    fn wrong_lengths_are_parameter_errors() {
        let s = NaorScheme::new(CommitParams::new(4).unwrap(), ChaChaPrg);
        assert!(matches!(s.prg_expand(&bits("101")), Err(CommitError::Length { .. })));
        let nonce = ReceiverNonce::new(s.params(), BitString::zeros(12)).unwrap();
        assert!(s.commit(&nonce, true, &bits("10101")).is_err());
        assert!(ReceiverNonce::new(s.params(), BitString::zeros(11)).is_err());
        assert!(CommitParams::new(0).is_err());
    }

    #[test]
    fn verify_open_rejects_malformed_and_flipped() {
        let s = NaorScheme::new(CommitParams::new(4).unwrap(), ChaChaPrg);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let nonce = ReceiverNonce::random(s.params(), &mut rng);
        let r = BitString::random(4, &mut rng);
        let c = s.commit(&nonce, true, &r).unwrap();
        let o = Opening { bit: true, randomness: r.clone() };
        assert!(s.verify_open(&nonce, &c, &o));
        let mut bad = c.clone();
        bad.0.flip(5);
        assert!(!s.verify_open(&nonce, &bad, &o));
        let short = Opening { bit: true, randomness: bits("1") };
        assert!(!s.verify_open(&nonce, &c, &short));
        assert!(!s.verify_open(&nonce, &Commitment(bits("1")), &o));
    }

    #[test]
    fn production_generator_bit_bias() {
        // Monte Carlo frequency over 10^4 seeds at n = 16.
        let s = NaorScheme::new(CommitParams::new(16).unwrap(), ChaChaPrg);
        let (mut ones, mut total) = (0usize, 0usize);
        for r in 0..10_000u64 {
            let out = s.prg_expand(&BitString::from_u64(r, 16)).unwrap();
            ones += out.count_ones();
            total += out.len();
        }
        let freq = ones as f64 / total as f64;
        assert!((freq - 0.5).abs() <= 0.02, "bias {freq}");
    }

    /// Brute-force oracle: every pair `(r, r')` is tried directly through `commit`.
    fn brute_force_collisions(s: &NaorScheme, nonce: &ReceiverNonce) -> Vec<(BitString, BitString)> {
        let n = s.params().n();
        let mut out = Vec::new();
        for r0 in 0..(1u64 << n) {
            let r0 = BitString::from_u64(r0, n);
            let c0 = s.commit(nonce, false, &r0).unwrap();
            for r1 in 0..(1u64 << n) {
                let r1 = BitString::from_u64(r1, n);
                if s.commit(nonce, true, &r1).unwrap() == c0 {
                    out.push((r0.clone(), r1));
                }
            }
        }
        out
    }

    #[test]
    fn collision_table_matches_brute_force() {
        let s = NaorScheme::new(CommitParams::new(4).unwrap(), ChaChaPrg);
        let table = s.image_table().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..100 {
            let nonce = ReceiverNonce::random(s.params(), &mut rng);
            let fast = table.cross_bit_collisions(&nonce);
            assert_eq!(fast, brute_force_collisions(&s, &nonce));
        }
        // Forcing a collision: sigma = G(r0) ^ G(r1).
        let g0 = s.prg_expand(&BitString::from_u64(3, 4)).unwrap();
        let g1 = s.prg_expand(&BitString::from_u64(9, 4)).unwrap();
        let nonce = ReceiverNonce::new(s.params(), &g0 ^ &g1).unwrap();
        let forced = table.cross_bit_collisions(&nonce);
        assert_eq!(forced, brute_force_collisions(&s, &nonce));
        assert!(forced.contains(&(BitString::from_u64(3, 4), BitString::from_u64(9, 4))));
    }

    #[test]
    fn binding_failure_rate_within_naor_bound() {
        // Naor: Pr_sigma[collision exists] <= 2^{2n} / 2^{3n} = 2^-n.
        for n in 4..=6 {
            let s = NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg);
            let table = s.image_table().unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(n as u64);
            let trials = 2000;
            let bad = (0..trials)
                .filter(|_| !table.cross_bit_collisions(&ReceiverNonce::random(s.params(), &mut rng)).is_empty())
                .count();
            let rate = bad as f64 / trials as f64;
            let bound = 2f64.powi(-(n as i32));
            let slack = 3.0 * (bound / trials as f64).sqrt();
            assert!(rate <= bound + slack, "n={n}: rate {rate} > {bound}");
        }
    }

    #[test]
    fn acceptance_map_has_one_bit_per_commitment_on_binding_nonces() {
        // For every reachable commitment, the set of accepted bits is a
        // singleton unless the nonce admits a cross-bit collision.
        let s = NaorScheme::new(CommitParams::new(4).unwrap(), ChaChaPrg);
        let table = s.image_table().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..50 {
            let nonce = ReceiverNonce::random(s.params(), &mut rng);
            let collides = !table.cross_bit_collisions(&nonce).is_empty();
            let mut ambiguous = false;
            for bit in [false, true] {
                for r in 0..16u64 {
                    let c = s.commit(&nonce, bit, &BitString::from_u64(r, 4)).unwrap();
                    let accepted: std::collections::BTreeSet<bool> = [false, true]
                        .into_iter()
                        .filter(|&b| (0..16u64).any(|r2| s.verify_open(&nonce, &c, &Opening { bit: b, randomness: BitString::from_u64(r2, 4) })))
                        .collect();
                    assert!(accepted.contains(&bit));
                    ambiguous |= accepted.len() > 1;
                }
            }
            assert_eq!(ambiguous, collides);
        }
    }

    proptest! {
        #[test]
        fn commit_roundtrip(n in 1usize..24, seed in any::<u64>(), bit in any::<bool>()) {
            let s = NaorScheme::new(CommitParams::new(n).unwrap(), ChaChaPrg);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let nonce = ReceiverNonce::random(s.params(), &mut rng);
            let r = BitString::random(n, &mut rng);
            let c = s.commit(&nonce, bit, &r).unwrap();
            prop_assert_eq!(c.0.len(), 3 * n);
            prop_assert_eq!(&c, &s.commit(&nonce, bit, &r).unwrap());
            let opening = Opening { bit, randomness: r };
            prop_assert!(s.verify_open(&nonce, &c, &opening));
        }
    }
}
