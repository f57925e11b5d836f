//! Circuit compilation and simulation toolkit.
//!
//! * [`circuit`] and [`text`]: the gate-level IR and its text format.
//! * [`sim`]: dense statevector simulation, sampling and equivalence oracles.
//! * [`fourier`]: QFT and approximate-QFT builders with gate-count reports.
//! * [`order`]: quantum order finding with continued-fraction postprocessing.
//! * [`transpiler`]: decomposition, layout, routing, basis translation,
//!   peephole optimization and scheduling.
//! * [`mitigation`]: dynamical decoupling, Pauli twirling, zero-noise
//!   extrapolation and mirror-circuit benchmarking.

pub mod circuit;
pub mod fourier;
pub mod mitigation;
pub mod order;
pub mod sim;
pub mod text;
pub mod transpiler;

pub use circuit::{Circuit, CircuitError, Gate, GateKind};
