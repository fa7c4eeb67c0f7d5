use num_complex::Complex64;
use thiserror::Error;

use super::layout::RegisterLayout;

pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("W state has length {actual}, expected {expected}")]
    WLength { expected: usize, actual: usize },
    #[error("W state has norm {0}, expected 1")]
    NotNormalized(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|psi>_W |0>_X`.
    pub fn with_w(layout: RegisterLayout, psi: &[Complex64]) -> Result<Self, StateError> {
        let expected = 1usize << layout.w_len();
        if psi.len() != expected {
            return Err(StateError::WLength { expected, actual: psi.len() });
        }
        let n: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(n.sqrt()));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amps[..psi.len()].copy_from_slice(psi);
        Ok(Self { layout, amps })
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), layout.dim());
        Self { layout, amps }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Rescales to unit norm; returns the previous squared norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm_sqr();
        if n > 0.0 {
            let s = n.sqrt();
            self.amps.iter_mut().for_each(|x| *x /= s);
        }
        n
    }

    /// Relabels basis states by an involution `f` (`f(f(i)) = i`).
    pub fn permute_involution(&mut self, f: impl Fn(usize) -> usize) {
        for i in 0..self.amps.len() {
            let j = f(i);
            if j > i {
                self.amps.swap(i, j);
            } else {
                debug_assert_eq!(f(j), i, "not an involution");
            }
        }
    }

    /// Hadamard on qubit `q`.
    pub fn hadamard(&mut self, q: usize) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (x, y) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (x + y) * h;
                self.amps[i | bit] = (x - y) * h;
            }
        }
    }

    /// Probability that G reads 0.
    pub fn prob_g_zero(&self) -> f64 {
        let g = self.layout.g();
        self.amps.iter().enumerate().filter(|(i, _)| g.get(*i) == 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Unnormalized projection onto G = `value`.
    pub fn project_g(&self, value: usize) -> Self {
        let g = self.layout.g();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| if g.get(i) == value { *a } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self { layout: self.layout, amps }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}
