//! Error suppression and mitigation on top of the simulator.
//!
//! Dynamical decoupling is modeled at gate level: X–X or X–Y–X–Y pulses in
//! scheduled idle windows. The stochastic Pauli noise of [`crate::sim`] has
//! no coherent component, so DD cannot show a benefit here; it is checked
//! for semantics preservation only.

mod dd;
mod fold;
mod mirror;
mod twirl;

use thiserror::Error;

use crate::circuit::{CircuitError, GateKind};
use crate::sim::SimError;

pub use dd::{insert_dd, DdOutcome, DdPulse, DdSequence};
pub use fold::{extrapolate, fold, zne_estimate, Extrapolator, FoldMode, ZneConfig, ZneResult};
pub use mirror::{mirror_benchmark, mirror_circuit, random_layered_circuit, MirrorReport};
pub use twirl::{compensating_pair, pauli_twirl, Pauli, CX_CONJUGATION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MitigationError {
    #[error("scale factor {0} is not an odd positive integer")]
    EvenScale(u64),
    #[error("invalid scale factors: {0}")]
    ScaleFactors(String),
    #[error("{points} points cannot determine a degree-{degree} fit")]
    TooFewPoints { points: usize, degree: usize },
    #[error("invalid observable: {0}")]
    Observable(String),
    #[error("twirling needs CX as the only two-qubit gate, found {}", .0.name())]
    Untranslated(GateKind),
    #[error("schedule does not match the circuit at gate {0}")]
    ScheduleMismatch(usize),
    #[error("no duration given for {}", .0.name())]
    MissingDuration(GateKind),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
