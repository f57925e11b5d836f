//! Peephole rule engine.
//!
//! Rules, applied to a fixpoint:
//! * adjacent inverse pairs cancel (CX·CX, H·H, S·S†, ...);
//! * adjacent RZ/P/CP rotations on the same qubits fuse, and rotations whose
//!   angle is zero modulo 2π (within 1e-12) disappear;
//! * SWAPs after the last barrier are deleted by relabeling every later gate,
//!   with the relabeling folded into the layout's output permutation.
//!
//! Barriers stop every rule: nothing cancels, fuses or moves across one.

use std::f64::consts::{PI, TAU};

use super::Layout;
use crate::circuit::{Circuit, Gate, GateKind};

pub const DEFAULT_MAX_PASSES: usize = 100;
const ZERO_ANGLE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub absorb_swaps: bool,
    pub max_passes: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            absorb_swaps: true,
            max_passes: DEFAULT_MAX_PASSES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    pub circuit: Circuit,
    /// Relabeling from absorbed SWAPs: input wire `q` ends on `permutation[q]`.
    pub permutation: Vec<usize>,
    pub swaps_absorbed: usize,
    pub passes: usize,
    pub converged: bool,
}

/// Peephole optimization with swap absorption; the absorbed SWAPs are
/// recorded in the returned layout's permutation.
pub fn optimize(circuit: &Circuit, layout: &Layout) -> (Circuit, Layout) {
    let outcome = optimize_with(circuit, OptimizeOptions::default());
    let mut perm = outcome.permutation;
    perm.extend(perm.len()..layout.num_physical());
    (outcome.circuit, layout.then(&perm))
}

pub fn optimize_with(circuit: &Circuit, options: OptimizeOptions) -> OptimizeOutcome {
    let mut current = circuit.clone();
    let mut permutation: Vec<usize> = (0..circuit.num_qubits()).collect();
    let mut swaps_absorbed = 0;
    let mut passes = 0;
    let mut converged = false;
    while passes < options.max_passes {
        passes += 1;
        let mut changed = false;
        if options.absorb_swaps {
            let (next, perm, absorbed) = absorb_swaps(&current);
            if absorbed > 0 {
                permutation = super::compose(&perm, &permutation);
                swaps_absorbed += absorbed;
                current = next;
                changed = true;
            }
        }
        let (next, pass_changed) = cancel_and_fuse(&current);
        current = next;
        if !(changed || pass_changed) {
            converged = true;
            break;
        }
    }
    OptimizeOutcome {
        circuit: current,
        permutation,
        swaps_absorbed,
        passes,
        converged,
    }
}

/// Deletes the SWAPs after the last barrier, relabeling the gates that follow.
pub fn absorb_swaps(circuit: &Circuit) -> (Circuit, Vec<usize>, usize) {
    let start = circuit
        .gates()
        .iter()
        .rposition(|g| g.kind() == GateKind::Barrier)
        .map_or(0, |i| i + 1);
    let mut wire: Vec<usize> = (0..circuit.num_qubits()).collect();
    let mut gates: Vec<Gate> = circuit.gates()[..start].to_vec();
    let mut absorbed = 0;
    for g in &circuit.gates()[start..] {
        if g.kind() == GateKind::Swap {
            wire.swap(g.qubits()[0], g.qubits()[1]);
            absorbed += 1;
        } else {
            gates.push(g.remapped(&wire));
        }
    }
    (circuit.with_gates_unchecked(gates), wire, absorbed)
}

/// Angle reduced to (-π, π].
fn wrap(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn is_rotation(kind: GateKind) -> bool {
    matches!(kind, GateKind::RZ | GateKind::P | GateKind::CP)
}

fn same_operands(a: &Gate, b: &Gate) -> bool {
    match a.kind() {
        GateKind::CZ | GateKind::Swap | GateKind::CP => {
            let (x, y) = (a.qubits(), b.qubits());
            (x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0])
        }
        GateKind::CCX => {
            let (x, y) = (a.qubits(), b.qubits());
            x[2] == y[2] && ((x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0]))
        }
        _ => a.qubits() == b.qubits(),
    }
}

fn cancels(prev: &Gate, next: &Gate) -> bool {
    if is_rotation(prev.kind()) || !prev.is_unitary() || prev.kind() == GateKind::CModMul {
        return false;
    }
    match prev.inverse() {
        Some(inv) => inv.kind() == next.kind() && same_operands(&inv, next),
        None => false,
    }
}

fn is_zero_rotation(g: &Gate) -> bool {
    is_rotation(g.kind()) && wrap(g.angle().unwrap_or(0.0)).abs() < ZERO_ANGLE
}

/// One sweep of cancellation and fusion. Returns whether anything changed.
pub fn cancel_and_fuse(circuit: &Circuit) -> (Circuit, bool) {
    let n = circuit.num_qubits();
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(circuit.len());
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut changed = false;

    for g in circuit.gates() {
        if is_zero_rotation(g) {
            changed = true;
            continue;
        }
        let qs = g.qubits();
        let top = stacks[qs[0]].last().copied();
        let shared = top.filter(|&j| {
            qs.iter().all(|&q| stacks[q].last() == Some(&j))
                && out[j]
                    .as_ref()
                    .is_some_and(|h| h.qubits().len() == qs.len())
        });
        if let Some(j) = shared {
            let prev = out[j].as_ref().expect("live gate");
            if prev.kind() == g.kind() && is_rotation(g.kind()) && same_operands(prev, g) {
                let angle = wrap(prev.angle().unwrap_or(0.0) + g.angle().unwrap_or(0.0));
                changed = true;
                if angle.abs() < ZERO_ANGLE {
                    out[j] = None;
                    for &q in qs {
                        stacks[q].pop();
                    }
                } else {
                    out[j] = Some(prev.with_angle(angle));
                }
                continue;
            }
            if cancels(prev, g) {
                out[j] = None;
                for &q in qs {
                    stacks[q].pop();
                }
                changed = true;
                continue;
            }
        }
        let idx = out.len();
        out.push(Some(g.clone()));
        for &q in qs {
            stacks[q].push(idx);
        }
    }
    let gates = out.into_iter().flatten().collect();
    (circuit.with_gates_unchecked(gates), changed)
}
