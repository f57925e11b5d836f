//! Quantum Fourier transform builders.
//!
//! The transform maps `|j⟩ -> T^{-1/2} Σ_z e^{2πi jz/T} |z⟩` with `T = 2^n` under the
//! little-endian index convention. Qubits are processed from the most
//! significant downward: a Hadamard on qubit `i`, then controlled phases
//! `CP(π/2^{k-1})` from qubit `i-(k-1)` for `k = 2, 3, ...`, and finally a
//! layer of swaps reversing qubit order.
//!
//! The approximate transform stops emitting rotations once `k` exceeds the
//! cutoff `m`, dropping the smallest angles first. With the default cutoff
//! `m = ⌈log₂ n⌉` the Hadamard-plus-rotation count falls from `n(n+1)/2` to at
//! most `n·m`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::sim::{self, SimError, Statevector, MAX_STATEVECTOR_QUBITS};

/// Widest register the fidelity estimate accepts.
pub const MAX_FIDELITY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error("register width {0} outside 1..={1}")]
    Width(usize, usize),
    #[error("cutoff {m} outside 1..={n}")]
    Cutoff { m: usize, n: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Largest rotation index kept, or no cutoff at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    Full,
    #[serde(untagged)]
    Index(usize),
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Full => f.write_str("full"),
            Cutoff::Index(m) => write!(f, "{m}"),
        }
    }
}

/// `⌈log₂ n⌉`, floored at 1.
pub fn default_cutoff(n: usize) -> usize {
    let ceil_log2 = if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    ceil_log2.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AqftConfig {
    pub n: usize,
    pub cutoff: Cutoff,
}

impl AqftConfig {
    pub fn full(n: usize) -> AqftConfig {
        AqftConfig {
            n,
            cutoff: Cutoff::Full,
        }
    }

    pub fn with_cutoff(n: usize, m: usize) -> AqftConfig {
        AqftConfig {
            n,
            cutoff: Cutoff::Index(m),
        }
    }

    /// Cutoff `⌈log₂ n⌉`.
    pub fn default_for(n: usize) -> AqftConfig {
        AqftConfig::with_cutoff(n, default_cutoff(n))
    }

    pub fn validate(&self) -> Result<(), FourierError> {
        if self.n == 0 || self.n > MAX_STATEVECTOR_QUBITS {
            return Err(FourierError::Width(self.n, MAX_STATEVECTOR_QUBITS));
        }
        if let Cutoff::Index(m) = self.cutoff {
            if m == 0 || m > self.n {
                return Err(FourierError::Cutoff { m, n: self.n });
            }
        }
        Ok(())
    }

    /// Largest rotation index `k` that is emitted.
    fn max_index(&self) -> usize {
        match self.cutoff {
            Cutoff::Full => self.n,
            Cutoff::Index(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierBuildReport {
    pub hadamard_count: usize,
    pub rotation_count: usize,
    pub swap_count: usize,
    /// Qubit visits plus rotation emissions made by the recursive builder.
    pub recursive_calls: usize,
}

impl FourierBuildReport {
    /// Hadamards plus controlled rotations; the terminal swaps are excluded.
    pub fn transform_count(&self) -> usize {
        self.hadamard_count + self.rotation_count
    }
}

struct Builder {
    max_index: usize,
    gates: Vec<Gate>,
    report: FourierBuildReport,
}

impl Builder {
    fn visit_qubit(&mut self, target: usize) {
        self.report.recursive_calls += 1;
        self.gates.push(Gate::h(target));
        self.report.hadamard_count += 1;
        if target > 0 {
            self.rotate(target, target - 1, 2);
            self.visit_qubit(target - 1);
        }
    }

    fn rotate(&mut self, target: usize, control: usize, k: usize) {
        if k > self.max_index {
            return;
        }
        self.report.recursive_calls += 1;
        self.gates
            .push(Gate::cp(rotation_angle(k), control, target));
        self.report.rotation_count += 1;
        if control > 0 {
            self.rotate(target, control - 1, k + 1);
        }
    }
}

/// Angle of the rotation with index `k`: `π / 2^{k-1}` (k = 2 is π/2).
pub fn rotation_angle(k: usize) -> f64 {
    PI / (1u64 << (k - 1)) as f64
}

pub fn build_aqft(config: &AqftConfig) -> Result<(Circuit, FourierBuildReport), FourierError> {
    config.validate()?;
    let n = config.n;
    let mut b = Builder {
        max_index: config.max_index(),
        gates: Vec::with_capacity(n * (n + 1) / 2 + n / 2),
        report: FourierBuildReport::default(),
    };
    b.visit_qubit(n - 1);
    for i in 0..n / 2 {
        b.gates.push(Gate::swap(i, n - 1 - i));
        b.report.swap_count += 1;
    }
    let name = match config.cutoff {
        Cutoff::Full => format!("qft{n}"),
        Cutoff::Index(m) => format!("aqft{n}_m{m}"),
    };
    let mut circuit = Circuit::named(n, name);
    for g in b.gates {
        circuit.push(g).expect("builder emits in-range gates");
    }
    Ok((circuit, b.report))
}

pub fn build_qft(n: usize) -> Result<(Circuit, FourierBuildReport), FourierError> {
    build_aqft(&AqftConfig::full(n))
}

pub fn build_inverse_qft(config: &AqftConfig) -> Result<Circuit, FourierError> {
    let (c, _) = build_aqft(config)?;
    Ok(c.inverse().expect("transform has no measurements"))
}

/// `n(n+1)/2`, the Hadamard-plus-rotation count of the full transform.
pub fn full_transform_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `Σ_i min(n-1-i, m-1)` rotations survive a cutoff of `m`.
pub fn aqft_rotation_count(n: usize, m: usize) -> usize {
    (0..n).map(|i| (n - 1 - i).min(m.saturating_sub(1))).sum()
}

/// Sum of the angles a cutoff of `m` omits; bounds the entrywise deviation
/// between the exact and approximate unitaries.
pub fn omitted_angle_sum(n: usize, m: usize) -> f64 {
    (0..n)
        .flat_map(|target| (2..=target + 1).filter(move |&k| k > m))
        .map(rotation_angle)
        .sum()
}

fn random_qubit_state(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    // Uniform on the Bloch sphere.
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let half = cos_theta.acos() / 2.0;
    [
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    ]
}

/// Mean fidelity between the exact and approximate transforms applied to
/// `trials` random product states drawn from `seed`.
pub fn aqft_fidelity(
    n: usize,
    cutoff: Cutoff,
    trials: usize,
    seed: u64,
) -> Result<f64, FourierError> {
    if n == 0 || n > MAX_FIDELITY_QUBITS {
        return Err(FourierError::Width(n, MAX_FIDELITY_QUBITS));
    }
    let (exact, _) = build_qft(n)?;
    let (approx, _) = build_aqft(&AqftConfig { n, cutoff })?;
    if trials == 0 {
        return Ok(1.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..trials {
        let qubits: Vec<[Complex64; 2]> = (0..n).map(|_| random_qubit_state(&mut rng)).collect();
        let psi = Statevector::product(&qubits)?;
        let a = sim::run(&exact, &psi)?;
        let b = sim::run(&approx, &psi)?;
        total += sim::fidelity(&a, &b)?;
    }
    Ok((total / trials as f64).clamp(0.0, 1.0))
}
