use std::collections::BTreeMap;

use serde::Serialize;

use super::TranspileError;
use crate::circuit::{Circuit, GateKind};

/// Gate durations in abstract integer time units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Durations(BTreeMap<GateKind, u64>);

impl Default for Durations {
    /// Single-qubit gates 1, two-qubit gates 2, CCX 6, CMODMUL 10, measurement 4.
    fn default() -> Self {
        let map = GateKind::ALL
            .iter()
            .filter(|k| **k != GateKind::Barrier)
            .map(|&k| {
                let d = match k {
                    GateKind::Measure => 4,
                    GateKind::CModMul => 10,
                    GateKind::CCX => 6,
                    _ if k.arity() == Some(2) => 2,
                    _ => 1,
                };
                (k, d)
            })
            .collect();
        Durations(map)
    }
}

impl Durations {
    pub fn empty() -> Durations {
        Durations(BTreeMap::new())
    }

    /// Sets the duration of `kind`; zero is rejected.
    pub fn with(mut self, kind: GateKind, units: u64) -> Result<Durations, TranspileError> {
        if units == 0 {
            return Err(TranspileError::InvalidDuration(kind));
        }
        self.0.insert(kind, units);
        Ok(self)
    }

    /// Barriers always take zero time.
    pub fn get(&self, kind: GateKind) -> Option<u64> {
        if kind == GateKind::Barrier {
            Some(0)
        } else {
            self.0.get(&kind).copied()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduledGate {
    pub index: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub start: u64,
    pub duration: u64,
}

/// A stretch where `qubit` does nothing between two of its operations (or
/// between time 0 and its first one). `before_gate` indexes the operation
/// that ends the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdleWindow {
    pub qubit: usize,
    pub start: u64,
    pub duration: u64,
    pub before_gate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub entries: Vec<ScheduledGate>,
    pub makespan: u64,
    pub idle_windows: Vec<IdleWindow>,
}

/// ASAP schedule: each gate starts once all its qubits are free. Barriers
/// synchronize their qubits at zero cost. Idle windows after a qubit's last
/// operation are not reported.
pub fn schedule(circuit: &Circuit, durations: &Durations) -> Result<Schedule, TranspileError> {
    let mut ready = vec![0u64; circuit.num_qubits()];
    let mut entries = Vec::with_capacity(circuit.len());
    let mut idle_windows = Vec::new();
    let mut makespan = 0;
    for (index, g) in circuit.gates().iter().enumerate() {
        let duration = durations
            .get(g.kind())
            .ok_or(TranspileError::MissingDuration(g.kind()))?;
        let start = g.qubits().iter().map(|&q| ready[q]).max().unwrap_or(0);
        for &q in g.qubits() {
            if start > ready[q] {
                idle_windows.push(IdleWindow {
                    qubit: q,
                    start: ready[q],
                    duration: start - ready[q],
                    before_gate: index,
                });
            }
            ready[q] = start + duration;
        }
        makespan = makespan.max(start + duration);
        entries.push(ScheduledGate {
            index,
            kind: g.kind(),
            qubits: g.qubits().to_vec(),
            start,
            duration,
        });
    }
    idle_windows.sort_by_key(|w| (w.qubit, w.start));
    Ok(Schedule {
        entries,
        makespan,
        idle_windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn durations() -> Durations {
        Durations::empty()
            .with(GateKind::H, 1)
            .unwrap()
            .with(GateKind::CX, 2)
            .unwrap()
    }

    #[test]
    fn parallel_gates() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::h(1)]).unwrap();
        let s = schedule(&c, &durations()).unwrap();
        assert_eq!(s.entries[0].start, 0);
        assert_eq!(s.entries[1].start, 0);
        assert_eq!(s.makespan, 1);
        assert!(s.idle_windows.is_empty());
    }

    #[test]
    fn chain_leaves_leading_window() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1)]).unwrap();
        let s = schedule(&c, &durations()).unwrap();
        assert_eq!(s.entries[1].start, 1);
        assert_eq!(s.makespan, 3);
        assert_eq!(
            s.idle_windows,
            vec![IdleWindow {
                qubit: 1,
                start: 0,
                duration: 1,
                before_gate: 1
            }]
        );
    }

    #[test]
    fn barrier_synchronizes() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::barrier(0..2), Gate::h(1)]).unwrap();
        let s = schedule(&c, &durations()).unwrap();
        assert_eq!(s.entries[1].start, 1);
        assert_eq!(s.entries[1].duration, 0);
        assert_eq!(s.entries[2].start, 1);
        assert_eq!(s.idle_windows.len(), 1);
        assert_eq!(s.idle_windows[0].before_gate, 1);
    }

    #[test]
    fn missing_duration() {
        let c = Circuit::from_gates(1, [Gate::x(0)]).unwrap();
        assert!(matches!(
            schedule(&c, &durations()),
            Err(TranspileError::MissingDuration(GateKind::X))
        ));
        assert_eq!(
            schedule(&Circuit::new(3), &durations()).unwrap().makespan,
            0
        );
    }
}
