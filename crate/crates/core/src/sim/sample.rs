//! Shot sampling, noiseless and by stochastic Pauli trajectories.
//!
//! Every shot draws from its own ChaCha8 stream: the generator is seeded with
//! the user seed and `set_stream(shot_index)`. Noise events are drawn first
//! (only for channels with nonzero probability), then the outcome, then the
//! readout flips. A model with all probabilities zero therefore consumes the
//! same random numbers as the noiseless sampler and yields identical counts.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{guard, run_basis, NoiseModel, SimError, Statevector, MAX_STATEVECTOR_QUBITS};
use crate::circuit::{Circuit, Gate};

/// Name and version of the shot generator, reported alongside results.
pub const PRNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9), stream = shot index";

/// Measurement counts. Outcome bit `k` is the `k`-th measured qubit in
/// ascending qubit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    shots: u64,
    seed: u64,
    measured: Vec<usize>,
    counts: BTreeMap<u64, u64>,
}

impl ShotHistogram {
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn get(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: u64) -> f64 {
        self.get(outcome) as f64 / self.shots as f64
    }

    /// Outcome rendered with the lowest measured qubit rightmost.
    pub fn bitstring(&self, outcome: u64) -> String {
        (0..self.measured.len())
            .rev()
            .map(|k| if (outcome >> k) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Mean of `(-1)^{parity}` over the outcome bits selected by `mask`.
    pub fn parity_expectation(&self, mask: u64) -> f64 {
        let signed: i64 = self
            .counts
            .iter()
            .map(|(&o, &c)| {
                if (o & mask).count_ones() % 2 == 0 {
                    c as i64
                } else {
                    -(c as i64)
                }
            })
            .sum();
        signed as f64 / self.shots as f64
    }

    fn from_outcomes(shots: u64, seed: u64, measured: Vec<usize>, outcomes: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for &o in outcomes {
            *counts.entry(o).or_insert(0) += 1;
        }
        ShotHistogram {
            shots,
            seed,
            measured,
            counts,
        }
    }
}

impl Serialize for ShotHistogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a ShotHistogram);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.counts.len()))?;
                for (&o, c) in &self.0.counts {
                    map.serialize_entry(&self.0.bitstring(o), c)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("shots", &self.shots)?;
        map.serialize_entry("seed", &self.seed)?;
        map.serialize_entry("counts", &Counts(self))?;
        map.end()
    }
}

fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn draw(cdf: &[f64], u: f64) -> u64 {
    // u is scaled by the total so rounding in the norm never leaves a gap.
    let target = u * cdf.last().copied().unwrap_or(1.0);
    cdf.partition_point(|&c| c <= target).min(cdf.len() - 1) as u64
}

fn validate(circuit: &Circuit, shots: u64) -> Result<Vec<usize>, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let measured = circuit.measured_qubits();
    if measured.is_empty() {
        return Err(SimError::NoMeasurements);
    }
    guard(circuit.num_qubits(), MAX_STATEVECTOR_QUBITS)?;
    Ok(measured)
}

/// Samples the circuit's trailing measurements `shots` times.
///
/// With `noise` absent or noiseless the final state is computed once; otherwise
/// each shot is an independent Pauli trajectory.
pub fn sample(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<ShotHistogram, SimError> {
    match noise {
        Some(model) if !model.is_noiseless() => sample_trajectories(circuit, shots, seed, model),
        _ => {
            let measured = validate(circuit, shots)?;
            let state = run_basis(circuit, 0)?;
            sample_from_state(&state, &measured, shots, seed)
        }
    }
}

/// Noiseless shots drawn from an already computed final state.
pub fn sample_from_state(
    state: &Statevector,
    measured: &[usize],
    shots: u64,
    seed: u64,
) -> Result<ShotHistogram, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    if measured.is_empty() {
        return Err(SimError::NoMeasurements);
    }
    let cdf = cumulative(&state.marginal_probabilities(measured));
    let outcomes: Vec<u64> = (0..shots)
        .into_par_iter()
        .map(|shot| draw(&cdf, shot_rng(seed, shot).random::<f64>()))
        .collect();
    Ok(ShotHistogram::from_outcomes(
        shots,
        seed,
        measured.to_vec(),
        &outcomes,
    ))
}

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

/// Per-shot trajectory sampling, regardless of whether the model is noiseless.
pub fn sample_trajectories(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: &NoiseModel,
) -> Result<ShotHistogram, SimError> {
    let measured = validate(circuit, shots)?;
    let body = circuit.without_measurements();
    let ideal_cdf = cumulative(&run_basis(&body, 0)?.marginal_probabilities(&measured));
    let p_meas = noise.readout_error();

    let outcomes: Vec<u64> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let mut events: Vec<(usize, usize, Pauli)> = Vec::new();
            for (gi, g) in body.gates().iter().enumerate() {
                let Some(err) = noise.gate_error(g.kind()) else {
                    continue;
                };
                for &q in g.qubits() {
                    let u: f64 = rng.random();
                    if u < err.px {
                        events.push((gi, q, Pauli::X));
                    } else if u < err.px + err.py {
                        events.push((gi, q, Pauli::Y));
                    } else if u < err.total() {
                        events.push((gi, q, Pauli::Z));
                    }
                }
            }
            let u: f64 = rng.random();
            let mut outcome = if events.is_empty() {
                draw(&ideal_cdf, u)
            } else {
                let state = run_with_errors(&body, &events);
                draw(&cumulative(&state.marginal_probabilities(&measured)), u)
            };
            if p_meas > 0.0 {
                for k in 0..measured.len() {
                    if rng.random::<f64>() < p_meas {
                        outcome ^= 1 << k;
                    }
                }
            }
            outcome
        })
        .collect();
    Ok(ShotHistogram::from_outcomes(
        shots, seed, measured, &outcomes,
    ))
}

fn run_with_errors(body: &Circuit, events: &[(usize, usize, Pauli)]) -> Statevector {
    let mut state = Statevector::zero(body.num_qubits()).expect("guarded above");
    let mut next = events.iter().peekable();
    for (gi, g) in body.gates().iter().enumerate() {
        state.apply(g);
        while let Some(&&(at, q, p)) = next.peek() {
            if at != gi {
                break;
            }
            state.apply(&match p {
                Pauli::X => Gate::x(q),
                Pauli::Y => Gate::y(q),
                Pauli::Z => Gate::z(q),
            });
            next.next();
        }
    }
    state
}
