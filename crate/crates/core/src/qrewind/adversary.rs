//! Dishonest-verifier circuits: one unitary on (W, V, B) per value of A1.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use super::layout::RegisterLayout;
use super::unitary::{Unitary, UNITARY_TOL};

#[derive(Debug, Error, PartialEq)]
pub enum AdversaryError {
    #[error("expected {expected} blocks, got {actual}")]
    BlockCount { expected: usize, actual: usize },
    #[error("block {index} has dimension {actual}, expected {expected}")]
    BlockDim { index: usize, expected: usize, actual: usize },
    #[error("block {index} is not unitary (error {error:e})")]
    NotUnitary { index: usize, error: f64 },
}

#[derive(Debug, Clone)]
pub struct AdversaryCircuit {
    blocks: Vec<Unitary>,
    adjoints: Vec<Unitary>,
}

impl AdversaryCircuit {
    /// `blocks[c]` acts on (W, V, B) when A1 holds `c`.
    pub fn new(layout: &RegisterLayout, blocks: Vec<Unitary>) -> Result<Self, AdversaryError> {
        let expected = 1usize << layout.commit_width();
        if blocks.len() != expected {
            return Err(AdversaryError::BlockCount { expected, actual: blocks.len() });
        }
        let dim = 1usize << layout.block_qubits();
        for (index, u) in blocks.iter().enumerate() {
            if u.dim() != dim {
                return Err(AdversaryError::BlockDim { index, expected: dim, actual: u.dim() });
            }
            let error = u.unitarity_error();
            if error > UNITARY_TOL {
                return Err(AdversaryError::NotUnitary { index, error });
            }
        }
        let adjoints = blocks.iter().map(Unitary::adjoint).collect();
        Ok(Self { blocks, adjoints })
    }

    fn uniform(layout: &RegisterLayout, u: Unitary) -> Self {
        Self::new(layout, vec![u; 1 << layout.commit_width()]).expect("valid block")
    }

    pub fn identity(layout: &RegisterLayout) -> Self {
        Self::uniform(layout, Unitary::identity(1 << layout.block_qubits()))
    }

    /// Pauli X on B regardless of A1.
    pub fn flip_b(layout: &RegisterLayout) -> Self {
        Self::uniform(layout, x_on_b(layout))
    }

    /// The same Haar unitary for every commitment value, so `b` is independent of `a`.
    pub fn uniform_independent<R: Rng + ?Sized>(layout: &RegisterLayout, rng: &mut R) -> Self {
        Self::uniform(layout, Unitary::haar(1 << layout.block_qubits(), rng))
    }

    /// Independent Haar unitaries per commitment value.
    pub fn random<R: Rng + ?Sized>(layout: &RegisterLayout, rng: &mut R) -> Self {
        let dim = 1 << layout.block_qubits();
        let blocks = (0..1 << layout.commit_width()).map(|_| Unitary::haar(dim, rng)).collect();
        Self::new(layout, blocks).expect("haar blocks are unitary")
    }

    /// A shared Haar unitary followed by a few random rotations of size at most
    /// `delta` that depend on the commitment value.
    pub fn perturbed<R: Rng + ?Sized>(layout: &RegisterLayout, delta: f64, rng: &mut R) -> Self {
        let dim = 1 << layout.block_qubits();
        let base = Unitary::haar(dim, rng);
        let blocks = (0..1 << layout.commit_width())
            .map(|_| {
                let mut u = base.clone();
                for _ in 0..3 {
                    let i = rng.gen_range(0..dim);
                    let j = (i + rng.gen_range(1..dim)) % dim;
                    let theta = delta * rng.gen_range(-1.0..1.0);
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    u = Unitary::givens(dim, i, j, theta, phi).mul(&u);
                }
                u
            })
            .collect();
        Self::new(layout, blocks).expect("products of unitaries")
    }

    /// Rotates B by `angle` about Y when bit `bit` of A1 is set.
    pub fn reads_a1_bit(layout: &RegisterLayout, bit: usize, angle: f64) -> Self {
        let dim = 1usize << layout.block_qubits();
        let b_bit = layout.b().offset;
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        let mut ry = vec![Complex64::new(0.0, 0.0); dim * dim];
        for low in 0..dim {
            if low >> b_bit & 1 == 1 {
                continue;
            }
            let high = low | 1 << b_bit;
            ry[low * dim + low] = Complex64::new(c, 0.0);
            ry[low * dim + high] = Complex64::new(-s, 0.0);
            ry[high * dim + low] = Complex64::new(s, 0.0);
            ry[high * dim + high] = Complex64::new(c, 0.0);
        }
        let ry = Unitary::from_rows(dim, ry);
        let blocks = (0..1usize << layout.commit_width())
            .map(|value| if value >> bit & 1 == 1 { ry.clone() } else { Unitary::identity(dim) })
            .collect();
        Self::new(layout, blocks).expect("rotations are unitary")
    }

    pub fn block(&self, a1: usize) -> &Unitary {
        &self.blocks[a1]
    }

    pub fn block_adjoint(&self, a1: usize) -> &Unitary {
        &self.adjoints[a1]
    }
}

fn x_on_b(layout: &RegisterLayout) -> Unitary {
    let dim = 1usize << layout.block_qubits();
    let b_bit = layout.b().offset;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        data[(col ^ 1 << b_bit) * dim + col] = Complex64::new(1.0, 0.0);
    }
    Unitary::from_rows(dim, data)
}
