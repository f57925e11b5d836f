use serde::Serialize;

use super::MitigationError;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::transpiler::{Durations, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DdSequence {
    #[default]
    Xx,
    Xyxy,
}

impl DdSequence {
    pub fn pulses(self) -> &'static [GateKind] {
        match self {
            DdSequence::Xx => &[GateKind::X, GateKind::X],
            DdSequence::Xyxy => &[GateKind::X, GateKind::Y, GateKind::X, GateKind::Y],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdPulse {
    pub qubit: usize,
    pub kind: GateKind,
    pub start: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DdOutcome {
    #[serde(skip)]
    pub circuit: Circuit,
    pub windows_filled: usize,
    pub pulses: Vec<DdPulse>,
}

/// Fills every idle window of at least `min_window` units (and long enough
/// for the whole sequence) with `sequence`. The window is split into equal
/// slots, one pulse centered in each.
pub fn insert_dd(
    circuit: &Circuit,
    schedule: &Schedule,
    min_window: u64,
    sequence: DdSequence,
    durations: &Durations,
) -> Result<DdOutcome, MitigationError> {
    check_schedule(circuit, schedule)?;
    let kinds = sequence.pulses();
    let pulse_len = kinds
        .iter()
        .map(|&k| durations.get(k).ok_or(MitigationError::MissingDuration(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let slots = kinds.len() as u64;
    let widest = *pulse_len.iter().max().expect("non-empty sequence");
    let first_measure = circuit
        .gates()
        .iter()
        .position(|g| g.kind() == GateKind::Measure);

    // (insertion point, qubit) -> pulses
    let mut inserts: Vec<(usize, usize, Vec<DdPulse>)> = Vec::new();
    for w in &schedule.idle_windows {
        if w.duration < min_window || w.duration < slots * widest {
            continue;
        }
        let slot = w.duration / slots;
        let pulses = kinds
            .iter()
            .zip(&pulse_len)
            .enumerate()
            .map(|(i, (&kind, &len))| DdPulse {
                qubit: w.qubit,
                kind,
                start: w.start + i as u64 * slot + (slot - len) / 2,
            })
            .collect();
        let at = match (circuit.gates()[w.before_gate].kind(), first_measure) {
            (GateKind::Measure, Some(m)) => m,
            _ => w.before_gate,
        };
        inserts.push((at, w.qubit, pulses));
    }
    inserts.sort_by_key(|&(at, q, _)| (at, q));

    let mut gates = Vec::with_capacity(circuit.len() + inserts.len() * kinds.len());
    let mut pending = inserts.iter().peekable();
    for (i, g) in circuit.gates().iter().enumerate() {
        while let Some((_, q, pulses)) = pending.next_if(|(at, _, _)| *at == i) {
            gates.extend(pulses.iter().map(|p| pulse_gate(p.kind, *q)));
        }
        gates.push(g.clone());
    }
    let pulses = inserts
        .iter()
        .flat_map(|(_, _, p)| p.iter().cloned())
        .collect();
    Ok(DdOutcome {
        circuit: Circuit::from_gates(circuit.num_qubits(), gates)?,
        windows_filled: inserts.len(),
        pulses,
    })
}

fn pulse_gate(kind: GateKind, q: usize) -> Gate {
    match kind {
        GateKind::Y => Gate::y(q),
        _ => Gate::x(q),
    }
}

fn check_schedule(circuit: &Circuit, schedule: &Schedule) -> Result<(), MitigationError> {
    if schedule.entries.len() != circuit.len() {
        return Err(MitigationError::ScheduleMismatch(
            schedule.entries.len().min(circuit.len()),
        ));
    }
    for (i, (e, g)) in schedule.entries.iter().zip(circuit.gates()).enumerate() {
        if e.index != i || e.kind != g.kind() || e.qubits != g.qubits() {
            return Err(MitigationError::ScheduleMismatch(i));
        }
    }
    if let Some(w) = schedule
        .idle_windows
        .iter()
        .find(|w| w.before_gate >= circuit.len() || w.qubit >= circuit.num_qubits())
    {
        return Err(MitigationError::ScheduleMismatch(w.before_gate));
    }
    Ok(())
}
