use num_complex::Complex64;

use super::{guard, run_basis, SimError, MAX_UNITARY_QUBITS};
use crate::circuit::Circuit;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    pub fn identity(dim: usize) -> Unitary {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Unitary { dim, data }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Unitary {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Unitary { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn matmul(&self, other: &Unitary) -> Unitary {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Unitary::from_fn(n, |r, c| {
            (0..n).map(|k| self.get(r, k) * other.get(k, c)).sum()
        })
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    /// Largest entrywise deviation `max |self - other|`.
    pub fn max_deviation(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from `other` after removing the best global phase, aligned on
    /// the largest-magnitude entry of `other`.
    pub fn phase_aligned_deviation(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| {
                if a.norm() > best.1 {
                    (i, a.norm())
                } else {
                    best
                }
            });
        let ratio = self.data[idx] * other.data[idx].conj();
        let phase = if ratio.norm() > 0.0 {
            ratio / ratio.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }
}

/// Matrix of `circuit` whose column `j` is `run(circuit, |j⟩)`.
pub fn unitary_of(circuit: &Circuit) -> Result<Unitary, SimError> {
    guard(circuit.num_qubits(), MAX_UNITARY_QUBITS)?;
    let dim = 1usize << circuit.num_qubits();
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let out = run_basis(circuit, col)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            data[row * dim + col] = *a;
        }
    }
    Ok(Unitary { dim, data })
}

/// True iff `unitary_of(c1) = e^{iφ} unitary_of(c2)` within `tol` entrywise.
pub fn equivalent_up_to_global_phase(
    c1: &Circuit,
    c2: &Circuit,
    tol: f64,
) -> Result<bool, SimError> {
    if c1.num_qubits() != c2.num_qubits() {
        return Err(SimError::DimensionMismatch {
            circuit: c1.num_qubits(),
            state: c2.num_qubits(),
        });
    }
    let u1 = unitary_of(c1)?;
    let u2 = unitary_of(c2)?;
    Ok(u1.phase_aligned_deviation(&u2) <= tol)
}
