//! The simulation circuit Q and the rewinding step built from it.
//!
//! Q prepares a uniform superposition of commitments to `a` with
//! `G = coin ^ a`, lets the adversary act on (W, V, B) controlled by the
//! commitment in A1, and finally XORs B into G. Afterwards `G = 0` marks the
//! branches where the adversary's challenge matched the guess.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use super::adversary::AdversaryCircuit;
use super::layout::RegisterLayout;
use super::state::{StateError, StateVector};

/// Perfectly binding toy commitment: a keyed permutation of the bits of `a || r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyCommit {
    /// Input bit `j` lands on output bit `perm[j]`.
    perm: Vec<usize>,
}

impl ToyCommit {
    pub fn identity(width: usize) -> Self {
        Self { perm: (0..width).collect() }
    }

    pub fn keyed(width: usize, key: u64) -> Self {
        let mut perm: Vec<usize> = (0..width).collect();
        perm.shuffle(&mut ChaCha20Rng::seed_from_u64(key));
        Self { perm }
    }

    /// Places the committed bit `a` (the top input bit) on output bit `pos`.
    pub fn with_a_at(width: usize, pos: usize) -> Self {
        assert!(pos < width);
        let mut perm: Vec<usize> = (0..width).filter(|&p| p != pos).collect();
        perm.push(pos);
        Self { perm }
    }

    pub fn width(&self) -> usize {
        self.perm.len()
    }

    pub fn commit(&self, value: usize) -> usize {
        self.perm.iter().enumerate().fold(0, |acc, (j, &p)| acc | ((value >> j & 1) << p))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("toy commitment width {actual} does not match register width {expected}")]
    Width { expected: usize, actual: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Step (1): Hadamards on R, then A1 ^= com(R), A2 ^= R, G ^= a ^ coin.
fn prepare(state: &mut StateVector, coin: bool, toy: &ToyCommit, adjoint: bool) {
    let layout = *state.layout();
    let r = layout.r();
    if !adjoint {
        hadamards(state, &layout);
    }
    let (a1, a2, g, l) = (layout.a1(), layout.a2(), layout.g(), layout.l());
    state.permute_involution(|i| {
        let rv = r.get(i);
        let a = rv >> l;
        let i = a1.set(i, a1.get(i) ^ toy.commit(rv));
        let i = a2.set(i, a2.get(i) ^ rv);
        g.set(i, g.get(i) ^ a ^ coin as usize)
    });
    if adjoint {
        hadamards(state, &layout);
    }
}

fn hadamards(state: &mut StateVector, layout: &RegisterLayout) {
    let r = layout.r();
    for q in r.offset..r.offset + r.width {
        state.hadamard(q);
    }
}

pub fn build_superposition(
    layout: RegisterLayout,
    coin: bool,
    toy: &ToyCommit,
    psi: &[Complex64],
) -> Result<StateVector, CircuitError> {
    if toy.width() != layout.commit_width() {
        return Err(CircuitError::Width { expected: layout.commit_width(), actual: toy.width() });
    }
    let mut s = StateVector::with_w(layout, psi)?;
    prepare(&mut s, coin, toy, false);
    Ok(s)
}

fn adversary(state: &mut StateVector, adv: &AdversaryCircuit, adjoint: bool) {
    let layout = *state.layout();
    let d = 1usize << layout.block_qubits();
    let a1 = layout.a1();
    let mut tmp = vec![Complex64::new(0.0, 0.0); d];
    for (idx, chunk) in state.amplitudes_mut().chunks_mut(d).enumerate() {
        let c = a1.get(idx * d);
        let u = if adjoint { adv.block_adjoint(c) } else { adv.block(c) };
        tmp.copy_from_slice(chunk);
        u.apply(&tmp, chunk);
    }
}

/// Step (2): the adversary's unitary on (W, V, B), controlled by A1.
pub fn apply_adversary(state: &mut StateVector, adv: &AdversaryCircuit) {
    adversary(state, adv, false);
}

/// Step (3): G ^= B.
pub fn apply_cnot_check(state: &mut StateVector) {
    let layout = *state.layout();
    let (b, g) = (layout.b(), layout.g());
    state.permute_involution(|i| if b.get(i) == 1 { g.set(i, g.get(i) ^ 1) } else { i });
}

/// Negates every amplitude whose X part is non-zero: `2 (I (x) |0><0|_X) - I`.
pub fn reflect_about_x_zero(state: &mut StateVector) {
    let x = state.layout().x();
    for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if x.get(i) != 0 {
            *a = -*a;
        }
    }
}

#[derive(Debug, Clone)]
pub struct CircuitQ {
    pub layout: RegisterLayout,
    pub toy: ToyCommit,
    pub adv: AdversaryCircuit,
    pub coin: bool,
}

impl CircuitQ {
    pub fn new(layout: RegisterLayout, toy: ToyCommit, adv: AdversaryCircuit, coin: bool) -> Result<Self, CircuitError> {
        if toy.width() != layout.commit_width() {
            return Err(CircuitError::Width { expected: layout.commit_width(), actual: toy.width() });
        }
        Ok(Self { layout, toy, adv, coin })
    }

    pub fn apply(&self, state: &mut StateVector) {
        prepare(state, self.coin, &self.toy, false);
        adversary(state, &self.adv, false);
        apply_cnot_check(state);
    }

    pub fn apply_adjoint(&self, state: &mut StateVector) {
        apply_cnot_check(state);
        adversary(state, &self.adv, true);
        prepare(state, self.coin, &self.toy, true);
    }

    /// `Q |psi>_W |0>_X`.
    pub fn run(&self, psi: &[Complex64]) -> Result<StateVector, StateError> {
        let mut s = StateVector::with_w(self.layout, psi)?;
        self.apply(&mut s);
        Ok(s)
    }

    /// `Q (2 (I (x) |0><0|_X) - I) Q^dagger`, applied after a failed measurement.
    pub fn rewind_once(&self, state: &StateVector) -> StateVector {
        let mut s = state.clone();
        self.apply_adjoint(&mut s);
        reflect_about_x_zero(&mut s);
        self.apply(&mut s);
        s
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DecomposeError {
    #[error("success probability {0} leaves one component undefined")]
    Degenerate(f64),
}

const DEGENERATE_TOL: f64 = 1e-24;

/// `state = sqrt(p) |0>_G |good> + sqrt(1 - p) |1>_G |bad>`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub p: f64,
    pub good: StateVector,
    pub bad: StateVector,
}

pub fn decompose_good_bad(state: &StateVector) -> Result<Decomposition, DecomposeError> {
    let mut good = state.project_g(0);
    let mut bad = state.project_g(1);
    let p = good.normalize();
    let q = bad.normalize();
    if p < DEGENERATE_TOL || q < DEGENERATE_TOL {
        return Err(DecomposeError::Degenerate(p));
    }
    Ok(Decomposition { p, good, bad })
}
