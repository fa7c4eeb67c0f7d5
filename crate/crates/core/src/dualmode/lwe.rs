//! Regev encryption of single bits, used as a commitment.
//!
//! Key file: `k`, `m`, `p`, `beta` as little-endian `u32`, a mode byte
//! (0 binding, 1 hiding), the `m` rows `(a_i, b_i)` as little-endian `u32`
//! residues, and for binding keys the `k` residues of the secret.

use rand::Rng;
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LweError {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("dimension and sample count must be positive")]
    Empty,
    #[error("4 * m * beta = {0} must stay below p = {1}")]
    NoiseTooLarge(u64, u32),
    #[error("key has no secret")]
    NoSecret,
    #[error("need more coins: {elements} of {needed} elements sampled from {used} bits")]
    InsufficientCoins { used: usize, elements: usize, needed: usize },
    #[error("malformed key file: {0}")]
    KeyFile(&'static str),
    #[error("opening has {actual} subset entries, key has {expected} rows")]
    SubsetLength { expected: usize, actual: usize },
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|d: &u64| d * d <= p as u64).all(|d| !(p as u64).is_multiple_of(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LweParams {
    k: usize,
    m: usize,
    p: u32,
    beta: u32,
}

impl LweParams {
    pub fn new(k: usize, m: usize, p: u32, beta: u32) -> Result<Self, LweError> {
        if k == 0 || m == 0 {
            return Err(LweError::Empty);
        }
        if !is_prime(p) || p >= 1 << 31 {
            return Err(LweError::NotPrime(p));
        }
        let noise = 4 * m as u64 * beta as u64;
        if noise >= p as u64 {
            return Err(LweError::NoiseTooLarge(noise, p));
        }
        Ok(Self { k, m, p, beta })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn half(&self) -> u32 {
        self.p / 2
    }

    /// Worst-case noise `m * beta` lies strictly closer to the right target,
    /// so no ciphertext ever reaches the tie.
    pub fn decryption_is_exact(&self) -> bool {
        2 * self.m as u64 * (self.beta as u64) < self.half() as u64
    }

    /// `m >= (k + 1) log2 p + margin`.
    pub fn in_hiding_regime(&self, margin: f64) -> bool {
        self.m as f64 >= (self.k + 1) as f64 * (self.p as f64).log2() + margin
    }

    /// Bits per coin-sampled residue.
    pub fn element_bits(&self) -> usize {
        (32 - (self.p - 1).leading_zeros()) as usize
    }

    /// Size of a key's rows in bits: `m (k + 1) ceil(log2 p)`.
    pub fn key_bits(&self) -> usize {
        self.m * (self.k + 1) * self.element_bits()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyMode {
    Binding,
    Hiding,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LweCiphertext {
    pub u: Vec<u32>,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegevKey {
    params: LweParams,
    mode: KeyMode,
    /// Row `i` is `a_i` followed by `b_i`.
    rows: Vec<Vec<u32>>,
    secret: Option<Vec<u32>>,
}

impl RegevKey {
    /// Uniform `a_i` and `s`, `b_i = <a_i, s> + e_i` with `e_i` uniform in `[-beta, beta]`.
    pub fn keygen_binding<R: Rng + ?Sized>(params: LweParams, rng: &mut R) -> Self {
        let p = params.p;
        let s: Vec<u32> = (0..params.k).map(|_| rng.gen_range(0..p)).collect();
        let beta = params.beta as i64;
        let rows = (0..params.m)
            .map(|_| {
                let mut row: Vec<u32> = (0..params.k).map(|_| rng.gen_range(0..p)).collect();
                let e = rng.gen_range(-beta..=beta);
                let b = (inner(&row, &s, p) as i64 + e).rem_euclid(p as i64) as u32;
                row.push(b);
                row
            })
            .collect();
        Self { params, mode: KeyMode::Binding, rows, secret: Some(s) }
    }

    pub fn keygen_hiding<R: Rng + ?Sized>(params: LweParams, rng: &mut R) -> Self {
        let rows = (0..params.m).map(|_| (0..=params.k).map(|_| rng.gen_range(0..params.p)).collect()).collect();
        Self { params, mode: KeyMode::Hiding, rows, secret: None }
    }

    /// A hiding key read off coin flips: `ceil(log2 p)`-bit chunks, most
    /// significant bit first, with chunks `>= p` discarded.
    pub fn key_from_coins(params: LweParams, coins: &BitString) -> Result<Self, LweError> {
        let width = params.element_bits();
        let needed = params.m * (params.k + 1);
        let mut elements = Vec::with_capacity(needed);
        let mut used = 0;
        while elements.len() < needed {
            if used + width > coins.len() {
                return Err(LweError::InsufficientCoins { used, elements: elements.len(), needed });
            }
            let v = coins.slice(used, used + width).to_u64() as u32;
            used += width;
            if v < params.p {
                elements.push(v);
            }
        }
        let rows = elements.chunks(params.k + 1).map(<[u32]>::to_vec).collect();
        Ok(Self { params, mode: KeyMode::Hiding, rows, secret: None })
    }

    pub fn params(&self) -> &LweParams {
        &self.params
    }

    pub fn mode(&self) -> KeyMode {
        self.mode
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn secret(&self) -> Option<&[u32]> {
        self.secret.as_deref()
    }

    /// `u = sum of a_i over S`, `c = sum of b_i over S + bit * floor(p/2)`.
    pub fn commit_bit_with(&self, bit: bool, subset: &[bool]) -> Result<LweCiphertext, LweError> {
        if subset.len() != self.params.m {
            return Err(LweError::SubsetLength { expected: self.params.m, actual: subset.len() });
        }
        let p = self.params.p as u64;
        let mut acc = vec![0u64; self.params.k + 1];
        for (row, _) in self.rows.iter().zip(subset).filter(|(_, &inc)| inc) {
            for (a, &r) in acc.iter_mut().zip(row) {
                *a = (*a + r as u64) % p;
            }
        }
        let c = ((acc[self.params.k] + bit as u64 * self.params.half() as u64) % p) as u32;
        acc.truncate(self.params.k);
        Ok(LweCiphertext { u: acc.into_iter().map(|x| x as u32).collect(), c })
    }

    /// Returns the ciphertext and its opening, the subset `S`.
    pub fn commit_bit<R: Rng + ?Sized>(&self, bit: bool, rng: &mut R) -> (LweCiphertext, Vec<bool>) {
        let subset: Vec<bool> = (0..self.params.m).map(|_| rng.gen()).collect();
        let ct = self.commit_bit_with(bit, &subset).expect("subset sized from the key");
        (ct, subset)
    }

    pub fn verify_open(&self, ct: &LweCiphertext, bit: bool, subset: &[bool]) -> bool {
        self.commit_bit_with(bit, subset).is_ok_and(|c| c == *ct)
    }

    /// `d = c - <u, s>`; 0 when `d` is strictly closer to 0 than to `floor(p/2)`.
    pub fn extract(&self, ct: &LweCiphertext) -> Result<bool, LweError> {
        let s = self.secret.as_ref().ok_or(LweError::NoSecret)?;
        let p = self.params.p;
        let d = (ct.c as u64 + p as u64 - inner(&ct.u, s, p) as u64) % p as u64;
        let dist = |x: u64, y: u64| {
            let diff = x.abs_diff(y);
            diff.min(p as u64 - diff)
        };
        Ok(dist(d, 0) >= dist(d, self.params.half() as u64))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [self.params.k as u32, self.params.m as u32, self.params.p, self.params.beta] {
            out.extend(v.to_le_bytes());
        }
        out.push(match self.mode {
            KeyMode::Binding => 0,
            KeyMode::Hiding => 1,
        });
        for v in self.rows.iter().flatten().chain(self.secret.iter().flatten()) {
            out.extend(v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, LweError> {
        let words = |b: &[u8]| -> Vec<u32> { b.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect() };
        if bytes.len() < 17 {
            return Err(LweError::KeyFile("short header"));
        }
        let h = words(&bytes[..16]);
        let params = LweParams::new(h[0] as usize, h[1] as usize, h[2], h[3])?;
        let mode = match bytes[16] {
            0 => KeyMode::Binding,
            1 => KeyMode::Hiding,
            _ => return Err(LweError::KeyFile("unknown mode")),
        };
        let body = &bytes[17..];
        let row_words = params.m * (params.k + 1);
        let secret_words = if mode == KeyMode::Binding { params.k } else { 0 };
        if body.len() != 4 * (row_words + secret_words) {
            return Err(LweError::KeyFile("wrong body length"));
        }
        let values = words(body);
        if values.iter().any(|&v| v >= params.p) {
            return Err(LweError::KeyFile("residue out of range"));
        }
        let rows = values[..row_words].chunks(params.k + 1).map(<[u32]>::to_vec).collect();
        let secret = (mode == KeyMode::Binding).then(|| values[row_words..].to_vec());
        Ok(Self { params, mode, rows, secret })
    }
}

fn inner(a: &[u32], s: &[u32], p: u32) -> u32 {
    (a.iter().zip(s).fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64) % p as u64)) as u32
}
