use super::{CouplingMap, Layout, TranspileError};
use crate::circuit::{Circuit, Gate, GateKind};

/// Lays `circuit` out on physical qubits and inserts SWAPs so every two-qubit
/// gate acts on a coupling edge.
///
/// For each gate on non-adjacent qubits the control walks along the BFS
/// shortest path toward the target. Returns the routed circuit, the updated
/// layout and the number of SWAPs inserted. CMODMUL is opaque and only
/// relabeled; gates on three or more qubits must be decomposed first.
pub fn route(
    circuit: &Circuit,
    layout: &Layout,
    coupling: &CouplingMap,
) -> Result<(Circuit, Layout, usize), TranspileError> {
    let p = coupling.num_physical();
    if layout.num_physical() != p {
        return Err(TranspileError::LayoutMismatch {
            layout: layout.num_physical(),
            physical: p,
        });
    }
    let laid_out = circuit.remapped(&layout.initial, p)?;
    // loc[w]: where laid-out wire w currently lives; at[q]: which wire sits on q.
    let mut loc: Vec<usize> = (0..p).collect();
    let mut at: Vec<usize> = (0..p).collect();
    let mut out = Circuit::named(p, circuit.name());
    let mut inserted = 0;

    for g in laid_out.gates() {
        let placed = g.remapped(&loc);
        let arity = if g.is_unitary() { g.qubits().len() } else { 1 };
        match (g.kind(), arity) {
            (GateKind::CModMul, _) | (_, 1) | (GateKind::Barrier, _) => out.push(placed)?,
            (_, 2) => {
                let (a, b) = (placed.qubits()[0], placed.qubits()[1]);
                if !coupling.is_adjacent(a, b) {
                    let path = coupling
                        .shortest_path(a, b)
                        .ok_or(TranspileError::Disconnected)?;
                    for step in path.windows(2).take(path.len() - 2) {
                        let (x, y) = (step[0], step[1]);
                        out.push(Gate::swap(x, y))?;
                        inserted += 1;
                        let (wx, wy) = (at[x], at[y]);
                        at.swap(x, y);
                        loc[wx] = y;
                        loc[wy] = x;
                    }
                    out.push(g.remapped(&loc))?;
                } else {
                    out.push(placed)?;
                }
            }
            (kind, _) => return Err(TranspileError::Unroutable(kind)),
        }
    }
    Ok((out, layout.then(&loc), inserted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_of_three() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 2)]).unwrap();
        let (out, layout, n) = route(&c, &Layout::trivial(3), &CouplingMap::line(3)).unwrap();
        assert_eq!(out.gates(), &[Gate::swap(0, 1), Gate::cx(1, 2)]);
        assert_eq!(n, 1);
        assert_eq!(layout.permutation, vec![1, 0, 2]);
    }

    #[test]
    fn adjacent_gates_untouched() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 1), Gate::cx(2, 1), Gate::h(0)]).unwrap();
        let (out, layout, n) = route(&c, &Layout::trivial(3), &CouplingMap::line(3)).unwrap();
        assert_eq!(n, 0);
        assert_eq!(out.gates(), c.gates());
        assert_eq!(layout, Layout::trivial(3));
    }

    #[test]
    fn three_qubit_gates_rejected() {
        let c = Circuit::from_gates(3, [Gate::ccx(0, 1, 2)]).unwrap();
        assert!(matches!(
            route(&c, &Layout::trivial(3), &CouplingMap::line(3)),
            Err(TranspileError::Unroutable(GateKind::CCX))
        ));
    }
}
