//! Dense statevector simulation.
//!
//! Basis-state indices are little-endian: qubit 0 is the least-significant
//! bit, so `|q2 q1 q0⟩` with `q0 = 1` is index 1.

mod noise;
mod sample;
mod unitary;

pub use noise::{NoiseModel, PauliError};
pub use sample::{sample, sample_from_state, sample_trajectories, ShotHistogram, PRNG_ALGORITHM};
pub use unitary::{equivalent_up_to_global_phase, unitary_of, Unitary};

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

/// Largest register the statevector path accepts by default (2^24 amplitudes).
pub const MAX_STATEVECTOR_QUBITS: usize = 24;
/// Largest register for which dense unitaries are built.
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("dimension mismatch: circuit has {circuit} qubits, state has {state}")]
    DimensionMismatch { circuit: usize, state: usize },
    #[error("{qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisOutOfRange { index: usize, num_qubits: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("circuit has no measurements")]
    NoMeasurements,
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Statevector, SimError> {
        guard(num_qubits, MAX_STATEVECTOR_QUBITS)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(SimError::BasisOutOfRange { index, num_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amps })
    }

    pub fn zero(num_qubits: usize) -> Result<Statevector, SimError> {
        Statevector::basis(num_qubits, 0)
    }

    /// Wraps an amplitude vector, which must be normalized within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Statevector, SimError> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(dim));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(Statevector {
            num_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    /// Tensor product of single-qubit states; `states[0]` is qubit 0.
    pub fn product(states: &[[Complex64; 2]]) -> Result<Statevector, SimError> {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for s in states.iter() {
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * s[0]));
            next.extend(amps.iter().map(|a| a * s[1]));
            amps = next;
        }
        Statevector::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Outcome distribution over `qubits`; bit `k` of the outcome is `qubits[k]`.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << qubits.len()];
        // Fast path: a contiguous low block of qubits is a mask.
        if qubits.iter().enumerate().all(|(i, &q)| i == q) {
            let mask = out.len() - 1;
            for (i, a) in self.amps.iter().enumerate() {
                out[i & mask] += a.norm_sqr();
            }
            return out;
        }
        for (i, a) in self.amps.iter().enumerate() {
            out[gather_bits(i, qubits)] += a.norm_sqr();
        }
        out
    }

    /// Applies one gate in place. Barriers and measurements are no-ops.
    pub fn apply(&mut self, gate: &Gate) {
        use GateKind::*;
        let q = gate.qubits();
        let theta = gate.angle().unwrap_or(0.0);
        match gate.kind() {
            H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q[0], [[h, h], [h, -h]]);
            }
            X => self.apply_x(q[0]),
            Y => {
                let i = Complex64::i();
                let z = Complex64::new(0.0, 0.0);
                self.apply_1q(q[0], [[z, -i], [i, z]]);
            }
            Z => self.apply_phase(q[0], Complex64::new(-1.0, 0.0)),
            S => self.apply_phase(q[0], Complex64::i()),
            Sdg => self.apply_phase(q[0], -Complex64::i()),
            T => self.apply_phase(
                q[0],
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            Tdg => self.apply_phase(
                q[0],
                Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            ),
            SX | SXdg => {
                let a = Complex64::new(0.5, 0.5);
                let b = Complex64::new(0.5, -0.5);
                if gate.kind() == SX {
                    self.apply_1q(q[0], [[a, b], [b, a]]);
                } else {
                    self.apply_1q(q[0], [[b, a], [a, b]]);
                }
            }
            RZ => self.apply_diag(
                q[0],
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ),
            P => self.apply_phase(q[0], Complex64::from_polar(1.0, theta)),
            CX => self.apply_cx(q[0], q[1]),
            CZ => self.apply_controlled_phase(q[0], q[1], Complex64::new(-1.0, 0.0)),
            CP => self.apply_controlled_phase(q[0], q[1], Complex64::from_polar(1.0, theta)),
            Swap => self.apply_swap(q[0], q[1]),
            CCX => self.apply_ccx(q[0], q[1], q[2]),
            CModMul => {
                let m = gate.modmul().expect("cmodmul carries parameters");
                self.apply_modmul(q[0], &q[1..], m.multiplier % m.modulus, m.modulus);
            }
            Barrier | Measure => {}
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_diag(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { d0 } else { d1 };
        }
    }

    fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= phase;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    fn apply_cx(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn apply_ccx(&mut self, c0: usize, c1: usize, t: usize) {
        let cb = (1usize << c0) | (1usize << c1);
        let tb = 1usize << t;
        for i in 0..self.amps.len() {
            if i & cb == cb && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn apply_controlled_phase(&mut self, a: usize, b: usize, phase: Complex64) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= phase;
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ab) | bb);
            }
        }
    }

    /// `|1⟩|f⟩ -> |1⟩|multiplier·f mod modulus⟩` for `f < modulus`; identity otherwise.
    fn apply_modmul(&mut self, control: usize, targets: &[usize], multiplier: u64, modulus: u64) {
        if multiplier == 1 {
            return;
        }
        let cb = 1usize << control;
        let tmask: usize = targets.iter().map(|&t| 1usize << t).sum();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let dest = if i & cb == 0 {
                i
            } else {
                let f = gather_bits(i, targets) as u64;
                if f < modulus {
                    let g = (multiplier as u128 * f as u128 % modulus as u128) as usize;
                    (i & !tmask) | scatter_bits(g, targets)
                } else {
                    i
                }
            };
            out[dest] = a;
        }
        self.amps = out;
    }

    pub fn inner(&self, other: &Statevector) -> Result<Complex64, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::DimensionMismatch {
                circuit: self.num_qubits,
                state: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Packs the bits of `index` at positions `qubits` into a dense integer.
pub(crate) fn gather_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((index >> q) & 1) << k))
}

pub(crate) fn scatter_bits(value: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((value >> k) & 1) << q))
}

pub(crate) fn guard(qubits: usize, limit: usize) -> Result<(), SimError> {
    if qubits > limit {
        Err(SimError::TooManyQubits { qubits, limit })
    } else {
        Ok(())
    }
}

/// Applies every gate of `circuit` to `initial`. Measurements are ignored.
pub fn run(circuit: &Circuit, initial: &Statevector) -> Result<Statevector, SimError> {
    if circuit.num_qubits() != initial.num_qubits {
        return Err(SimError::DimensionMismatch {
            circuit: circuit.num_qubits(),
            state: initial.num_qubits,
        });
    }
    let mut state = initial.clone();
    for g in circuit.gates() {
        state.apply(g);
    }
    Ok(state)
}

/// Runs `circuit` from computational basis state `|index⟩`.
pub fn run_basis(circuit: &Circuit, index: usize) -> Result<Statevector, SimError> {
    run_basis_limited(circuit, index, MAX_STATEVECTOR_QUBITS)
}

pub fn run_basis_limited(
    circuit: &Circuit,
    index: usize,
    max_qubits: usize,
) -> Result<Statevector, SimError> {
    guard(circuit.num_qubits(), max_qubits)?;
    let dim = 1usize
        .checked_shl(circuit.num_qubits() as u32)
        .ok_or(SimError::TooManyQubits {
            qubits: circuit.num_qubits(),
            limit: max_qubits,
        })?;
    if index >= dim {
        return Err(SimError::BasisOutOfRange {
            index,
            num_qubits: circuit.num_qubits(),
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[index] = Complex64::new(1.0, 0.0);
    let mut state = Statevector {
        num_qubits: circuit.num_qubits(),
        amps,
    };
    for g in circuit.gates() {
        state.apply(g);
    }
    Ok(state)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64, SimError> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn hadamard_on_zero() {
        let circ = Circuit::from_gates(1, [Gate::h(0)]).unwrap();
        let s = run_basis(&circ, 0).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes(), &[c(r, 0.0), c(r, 0.0)], 1e-15));
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        let circ = Circuit::from_gates(3, [Gate::x(0)]).unwrap();
        let s = run_basis(&circ, 0).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
        let circ = Circuit::from_gates(3, [Gate::x(2)]).unwrap();
        assert_eq!(run_basis(&circ, 0).unwrap().amplitudes()[4], c(1.0, 0.0));
        // cx control 0 target 1 maps |01⟩ (index 1) to |11⟩ (index 3)
        let circ = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
        assert_eq!(run_basis(&circ, 1).unwrap().amplitudes()[3], c(1.0, 0.0));
    }

    #[test]
    fn uniform_superposition() {
        let t = 5;
        let circ = Circuit::from_gates(t, (0..t).map(Gate::h)).unwrap();
        let s = run_basis(&circ, 0).unwrap();
        let expect = 1.0 / ((1 << t) as f64).sqrt();
        assert!(s
            .amplitudes()
            .iter()
            .all(|a| (a - c(expect, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn modmul_examples() {
        // control qubit 0 set, target register qubits 1..4 holding 3
        let g = Gate::cmodmul(2, 5, 0, &[1, 2, 3]).unwrap();
        let circ = Circuit::from_gates(4, [g]).unwrap();
        let s = run_basis(&circ, 1 | (3 << 1)).unwrap();
        assert_eq!(s.amplitudes()[1 | (1 << 1)], c(1.0, 0.0));
        // control clear: identity
        let s = run_basis(&circ, 3 << 1).unwrap();
        assert_eq!(s.amplitudes()[3 << 1], c(1.0, 0.0));
        // f >= modulus is padding and left alone
        let s = run_basis(&circ, 1 | (6 << 1)).unwrap();
        assert_eq!(s.amplitudes()[1 | (6 << 1)], c(1.0, 0.0));
    }

    #[test]
    fn modmul_matches_brute_force_on_every_basis_state() {
        for (mult, modulus) in [(2u64, 5u64), (4, 15), (11, 15), (3, 7)] {
            let width = (64 - (modulus - 1).leading_zeros()) as usize;
            let targets: Vec<usize> = (1..=width).collect();
            let circ = Circuit::from_gates(
                width + 1,
                [Gate::cmodmul(mult, modulus, 0, &targets).unwrap()],
            )
            .unwrap();
            for f in 0..(1usize << width) {
                let idx = 1 | (f << 1);
                let out = run_basis(&circ, idx).unwrap();
                let expected_f = if (f as u64) < modulus {
                    (mult * f as u64 % modulus) as usize
                } else {
                    f
                };
                assert_eq!(out.amplitudes()[1 | (expected_f << 1)], c(1.0, 0.0));
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let zero = Statevector::zero(1).unwrap();
        let one = Statevector::basis(1, 1).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        let v = Statevector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let w = Statevector::from_amplitudes(v.amplitudes().iter().map(|a| a * phase).collect())
            .unwrap();
        assert!((fidelity(&v, &w).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &Statevector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let circ = Circuit::from_gates(2, [Gate::h(0)]).unwrap();
        assert!(matches!(
            run(&circ, &Statevector::zero(3).unwrap()),
            Err(SimError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn product_state_ordering() {
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        let s = Statevector::product(&[one, zero, zero]).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn marginals() {
        let circ = Circuit::from_gates(3, [Gate::x(2), Gate::h(0)]).unwrap();
        let s = run_basis(&circ, 0).unwrap();
        let m = s.marginal_probabilities(&[2]);
        assert!((m[1] - 1.0).abs() < 1e-12);
        let m = s.marginal_probabilities(&[0, 1]);
        assert!((m[0] - 0.5).abs() < 1e-12 && (m[1] - 0.5).abs() < 1e-12);
    }
}
