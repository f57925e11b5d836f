//! Pass pipeline mapping a virtual circuit onto a device.
//!
//! Stages run in order: virtual-circuit optimization, multi-qubit
//! decomposition, layout, routing, basis translation, physical optimization
//! and ASAP scheduling. Every stage is a pure function and can be used alone.
//!
//! The output is related to the input by a wire permutation: with `P` the
//! reported `output_permutation` and the input laid out by `initial_layout`,
//! `unitary(output) = P · unitary(input)` up to global phase.

mod coupling;
mod layout;
mod optimize;
mod route;
mod schedule;
mod translate;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateKind};

pub use coupling::CouplingMap;
pub use layout::{
    assign_layout, compose, invert, is_permutation, permutation_circuit, Layout, LayoutStrategy,
};
pub use optimize::{
    absorb_swaps, cancel_and_fuse, optimize, optimize_with, OptimizeOptions, OptimizeOutcome,
    DEFAULT_MAX_PASSES,
};
pub use route::route;
pub use schedule::{schedule, Durations, IdleWindow, Schedule, ScheduledGate};
pub use translate::{ccx_template, decompose_multiqubit, translate_to_basis, BasisGateSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TranspileError {
    #[error("invalid coupling map: {0}")]
    Coupling(String),
    #[error("coupling map is disconnected")]
    Disconnected,
    #[error("circuit needs {virtual_qubits} qubits but the device has {physical}")]
    TooFewPhysical {
        virtual_qubits: usize,
        physical: usize,
    },
    #[error("layout covers {layout} qubits but the device has {physical}")]
    LayoutMismatch { layout: usize, physical: usize },
    #[error("{} acts on more than two qubits; decompose it before routing", .0.name())]
    Unroutable(GateKind),
    #[error("no rule translates {} into basis {{{basis}}}", .kind.name())]
    NoRule { kind: GateKind, basis: String },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("no duration given for {}", .0.name())]
    MissingDuration(GateKind),
    #[error("duration of {} must be positive", .0.name())]
    InvalidDuration(GateKind),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageMetrics {
    pub stage: &'static str,
    pub depth_before: usize,
    pub depth_after: usize,
    pub counts_before: BTreeMap<GateKind, usize>,
    pub counts_after: BTreeMap<GateKind, usize>,
}

impl StageMetrics {
    fn new(stage: &'static str, before: &Circuit, after: &Circuit) -> StageMetrics {
        StageMetrics {
            stage,
            depth_before: before.depth(),
            depth_after: after.depth(),
            counts_before: before.gate_counts(),
            counts_after: after.gate_counts(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranspileReport {
    pub stages: Vec<StageMetrics>,
    pub swap_inserted: usize,
    pub swap_eliminated: usize,
    pub opaque_gates: usize,
    pub optimization_passes: usize,
    pub initial_layout: Vec<usize>,
    /// Physical qubit holding each virtual qubit at the end.
    pub final_layout: Vec<usize>,
    /// `output_permutation[p]`: where the content of laid-out wire `p` ends.
    pub output_permutation: Vec<usize>,
    pub schedule: Schedule,
}

impl TranspileReport {
    pub fn layout(&self) -> Layout {
        Layout {
            initial: self.initial_layout.clone(),
            permutation: self.output_permutation.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspileOptions {
    pub layout: LayoutStrategy,
    pub durations: Durations,
    pub max_passes: usize,
    pub virtual_optimization: bool,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        TranspileOptions {
            layout: LayoutStrategy::Trivial,
            durations: Durations::default(),
            max_passes: DEFAULT_MAX_PASSES,
            virtual_optimization: true,
        }
    }
}

pub fn transpile(
    circuit: &Circuit,
    coupling: &CouplingMap,
    basis: &BasisGateSet,
    options: &TranspileOptions,
) -> Result<(Circuit, TranspileReport), TranspileError> {
    let mut stages = Vec::with_capacity(7);

    let virt = optimize_with(
        circuit,
        OptimizeOptions {
            absorb_swaps: true,
            max_passes: if options.virtual_optimization {
                options.max_passes
            } else {
                0
            },
        },
    );
    stages.push(StageMetrics::new(
        "virtual-optimization",
        circuit,
        &virt.circuit,
    ));

    let decomposed = decompose_multiqubit(&virt.circuit);
    stages.push(StageMetrics::new("init", &virt.circuit, &decomposed));

    let layout = assign_layout(&decomposed, coupling, options.layout)?;
    let laid_out = decomposed.remapped(&layout.initial, coupling.num_physical())?;
    stages.push(StageMetrics::new("layout", &decomposed, &laid_out));

    let (routed, routed_layout, swap_inserted) = route(&decomposed, &layout, coupling)?;
    stages.push(StageMetrics::new("routing", &laid_out, &routed));

    let (translated, opaque_gates) = translate_to_basis(&routed, basis)?;
    stages.push(StageMetrics::new("translation", &routed, &translated));

    let phys = optimize_with(
        &translated,
        OptimizeOptions {
            absorb_swaps: false,
            max_passes: options.max_passes,
        },
    );
    stages.push(StageMetrics::new(
        "optimization",
        &translated,
        &phys.circuit,
    ));

    let sched = schedule(&phys.circuit, &options.durations)?;
    stages.push(StageMetrics::new(
        "scheduling",
        &phys.circuit,
        &phys.circuit,
    ));

    // Virtual absorption acts on virtual wires; carry it onto physical ones.
    let p = coupling.num_physical();
    let mut alpha = virt.permutation;
    alpha.extend(alpha.len()..p);
    let pi = &layout.initial;
    let alpha_phys = compose(pi, &compose(&alpha, &invert(pi)));
    let total = Layout {
        initial: layout.initial.clone(),
        permutation: compose(&routed_layout.permutation, &alpha_phys),
    };

    let report = TranspileReport {
        stages,
        swap_inserted,
        swap_eliminated: virt.swaps_absorbed,
        opaque_gates,
        optimization_passes: virt.passes + phys.passes,
        final_layout: total.final_layout()[..circuit.num_qubits()].to_vec(),
        initial_layout: total.initial.clone(),
        output_permutation: total.permutation,
        schedule: sched,
    };
    Ok((phys.circuit, report))
}
