//! Small dense complex matrices for adversary blocks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub const UNITARY_TOL: f64 = 1e-9;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    /// Wraps row-major entries without checking unitarity.
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    /// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
    pub fn haar<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        for j in 0..dim {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: Complex64 = done[i].iter().zip(&rest[0]).map(|(q, x)| q.conj() * x).sum();
                for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * q;
                }
            }
            let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                data[i * dim + j] = *x;
            }
        }
        Self { dim, data }
    }

    /// Rotation mixing basis states `i` and `j` by angle `theta` with phase `phi`.
    pub fn givens(dim: usize, i: usize, j: usize, theta: f64, phi: f64) -> Self {
        assert!(i != j && i < dim && j < dim);
        let mut u = Self::identity(dim);
        let (c, s) = (theta.cos(), theta.sin());
        let e = Complex64::from_polar(1.0, phi);
        u.data[i * dim + i] = Complex64::new(c, 0.0);
        u.data[j * dim + j] = Complex64::new(c, 0.0);
        u.data[i * dim + j] = -e.conj() * s;
        u.data[j * dim + i] = e * s;
        u
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Self { dim: d, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Self { dim: d, data }
    }

    /// Largest entry of `U^dagger U - I` in absolute value.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let d = self.dim;
        (0..d * d)
            .map(|idx| {
                let target = if idx / d == idx % d { 1.0 } else { 0.0 };
                (p.data[idx] - target).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARY_TOL
    }

    /// `out = U * input`; both slices have length `dim`.
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.data[i * d..(i + 1) * d].iter().zip(input).map(|(a, x)| a * x).sum();
        }
    }
}

/// Haar-random pure state of the given dimension.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for dim in [1, 2, 8, 64] {
            let u = Unitary::haar(dim, &mut rng);
            assert!(u.unitarity_error() < 1e-12, "dim {dim}: {}", u.unitarity_error());
        }
    }

    #[test]
    fn givens_is_unitary_and_rotates() {
        let g = Unitary::givens(4, 1, 3, 0.3, 1.1);
        assert!(g.is_unitary());
        let mut e1 = vec![Complex64::new(0.0, 0.0); 4];
        e1[1] = Complex64::new(1.0, 0.0);
        let mut out = vec![Complex64::new(0.0, 0.0); 4];
        g.apply(&e1, &mut out);
        assert!((out[1].re - 0.3f64.cos()).abs() < 1e-15);
        assert!((out[3].norm() - 0.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn adjoint_inverts() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let u = Unitary::haar(8, &mut rng);
        let p = u.mul(&u.adjoint());
        let id = Unitary::identity(8);
        for i in 0..8 {
            for j in 0..8 {
                assert!((p.get(i, j) - id.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn non_unitary_detected() {
        let m = Unitary::from_rows(2, vec![Complex64::new(1.0, 0.0); 4]);
        assert!(!m.is_unitary());
    }

    #[test]
    fn state_is_normalized() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let s = haar_state(16, &mut rng);
        let n: f64 = s.iter().map(|x| x.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}
