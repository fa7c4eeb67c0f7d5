//! Register layout of the simulator's state.
//!
//! Basis indices pack the registers from the least significant bit upwards:
//! `W | V | B | A1 | A2 | R | G`. W, V and B are therefore the low
//! `w + v + 1` bits, which lets the adversary act on contiguous blocks.

use thiserror::Error;

pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("layout needs {0} qubits, more than the cap of {MAX_QUBITS}")]
    TooLarge(usize),
    #[error("W register must have at least one qubit")]
    EmptyW,
    #[error("randomness width must be at least one bit")]
    EmptyRandomness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    w: usize,
    v: usize,
    l: usize,
}

/// A contiguous bit range of the basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    pub offset: usize,
    pub width: usize,
}

impl Field {
    pub fn mask(&self) -> usize {
        ((1usize << self.width) - 1) << self.offset
    }

    pub fn get(&self, index: usize) -> usize {
        (index >> self.offset) & ((1usize << self.width) - 1)
    }

    pub fn set(&self, index: usize, value: usize) -> usize {
        (index & !self.mask()) | ((value << self.offset) & self.mask())
    }
}

impl RegisterLayout {
    /// `w` qubits of auxiliary input, `v` of adversary work space and `l`
    /// bits of commitment randomness (R, A1 and A2 each hold `l + 1` qubits).
    pub fn new(w: usize, v: usize, l: usize) -> Result<Self, LayoutError> {
        if w == 0 {
            return Err(LayoutError::EmptyW);
        }
        if l == 0 {
            return Err(LayoutError::EmptyRandomness);
        }
        let layout = Self { w, v, l };
        if layout.qubits() > MAX_QUBITS {
            return Err(LayoutError::TooLarge(layout.qubits()));
        }
        Ok(layout)
    }

    /// Splits a total qubit budget with `l = 1`, giving W the extra qubit when odd.
    pub fn with_total(qubits: usize) -> Result<Self, LayoutError> {
        let fixed = 3 * 2 + 2;
        let free = qubits.saturating_sub(fixed);
        Self::new(free.div_ceil(2), free / 2, 1)
    }

    pub fn w_len(&self) -> usize {
        self.w
    }

    pub fn v_len(&self) -> usize {
        self.v
    }

    /// Randomness bits `l`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Width of R, A1 and A2.
    pub fn commit_width(&self) -> usize {
        self.l + 1
    }

    pub fn qubits(&self) -> usize {
        self.w + self.v + 1 + 3 * (self.l + 1) + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    /// Qubits of (W, V, B), the space the adversary acts on.
    pub fn block_qubits(&self) -> usize {
        self.w + self.v + 1
    }

    pub fn w(&self) -> Field {
        Field { offset: 0, width: self.w }
    }

    pub fn v(&self) -> Field {
        Field { offset: self.w, width: self.v }
    }

    pub fn b(&self) -> Field {
        Field { offset: self.w + self.v, width: 1 }
    }

    pub fn a1(&self) -> Field {
        Field { offset: self.block_qubits(), width: self.l + 1 }
    }

    pub fn a2(&self) -> Field {
        Field { offset: self.block_qubits() + self.l + 1, width: self.l + 1 }
    }

    /// Holds `a || r` with `a` as the most significant bit.
    pub fn r(&self) -> Field {
        Field { offset: self.block_qubits() + 2 * (self.l + 1), width: self.l + 1 }
    }

    pub fn g(&self) -> Field {
        Field { offset: self.qubits() - 1, width: 1 }
    }

    /// Everything except W.
    pub fn x(&self) -> Field {
        Field { offset: self.w, width: self.qubits() - self.w }
    }
}
