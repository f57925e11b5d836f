use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::MitigationError;
use crate::circuit::{Circuit, CircuitError, Gate};
use crate::sim::{sample, NoiseModel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MirrorReport {
    pub base_depth: usize,
    pub mirrored_depth: usize,
    pub survival_probability: f64,
    pub shots: u64,
    pub seed: u64,
}

/// `C · C†` followed by a measurement of every qubit.
pub fn mirror_circuit(circuit: &Circuit) -> Result<Circuit, MitigationError> {
    if circuit.has_measure() {
        return Err(CircuitError::ContainsMeasure.into());
    }
    let mut mirrored = circuit.compose(&circuit.inverse()?)?;
    for q in 0..circuit.num_qubits() {
        mirrored.push(Gate::measure(q))?;
    }
    Ok(mirrored)
}

/// Fraction of shots of the mirrored circuit that return `|0…0⟩`.
pub fn mirror_benchmark(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<MirrorReport, MitigationError> {
    let mirrored = mirror_circuit(circuit)?;
    let hist = sample(&mirrored, shots, seed, noise)?;
    Ok(MirrorReport {
        base_depth: circuit.depth(),
        mirrored_depth: mirrored.without_measurements().depth(),
        survival_probability: hist.frequency(0),
        shots,
        seed,
    })
}

/// Random-parameter layered circuit: per layer, `RZ(θ)·SX` on every qubit
/// with uniform θ, then a CX ladder `0→1→…→n-1`.
pub fn random_layered_circuit(num_qubits: usize, layers: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::named(num_qubits, format!("layered-{num_qubits}x{layers}"));
    for _ in 0..layers {
        for q in 0..num_qubits {
            c.push(Gate::rz(rng.random_range(0.0..TAU), q))
                .expect("in range");
            c.push(Gate::sx(q)).expect("in range");
        }
        for q in 1..num_qubits {
            c.push(Gate::cx(q - 1, q)).expect("in range");
        }
    }
    c
}
