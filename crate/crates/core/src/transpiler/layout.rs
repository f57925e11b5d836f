use serde::Serialize;

use super::{CouplingMap, TranspileError};
use crate::circuit::{Circuit, Gate};

/// Placement of virtual qubits plus the permutation accumulated by routing
/// and swap absorption.
///
/// `initial[v]` is the physical qubit virtual qubit `v` starts on; entries
/// past the circuit width place idle ancillas. `permutation[p]` is the wire
/// where the content of physical wire `p` of the laid-out input ends up, so
/// `unitary(output) = P(permutation) · unitary(input laid out by initial)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub initial: Vec<usize>,
    pub permutation: Vec<usize>,
}

impl Layout {
    pub fn trivial(num_physical: usize) -> Layout {
        Layout {
            initial: (0..num_physical).collect(),
            permutation: (0..num_physical).collect(),
        }
    }

    pub fn from_initial(initial: Vec<usize>) -> Layout {
        let n = initial.len();
        Layout {
            initial,
            permutation: (0..n).collect(),
        }
    }

    pub fn num_physical(&self) -> usize {
        self.initial.len()
    }

    /// Physical qubit holding each virtual qubit at the end of the circuit.
    pub fn final_layout(&self) -> Vec<usize> {
        self.initial.iter().map(|&p| self.permutation[p]).collect()
    }

    /// Records a further permutation applied after the current one.
    pub fn then(&self, after: &[usize]) -> Layout {
        Layout {
            initial: self.initial.clone(),
            permutation: compose(after, &self.permutation),
        }
    }

    pub fn is_bijection(&self) -> bool {
        is_permutation(&self.initial) && is_permutation(&self.permutation)
    }
}

/// `after ∘ before`: apply `before`, then `after`.
pub fn compose(after: &[usize], before: &[usize]) -> Vec<usize> {
    before.iter().map(|&p| after[p]).collect()
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter()
        .all(|&p| p < perm.len() && !std::mem::replace(&mut seen[p], true))
}

/// SWAP network moving the content of wire `p` to wire `perm[p]`.
pub fn permutation_circuit(perm: &[usize]) -> Circuit {
    let n = perm.len();
    let source_of = invert(perm);
    let mut at: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n.max(1));
    for j in 0..n {
        let content = source_of[j];
        let from = pos[content];
        if from != j {
            c.push(Gate::swap(j, from)).expect("indices in range");
            let displaced = at[j];
            at.swap(j, from);
            pos[content] = j;
            pos[displaced] = from;
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutStrategy {
    #[default]
    Trivial,
    DegreeGreedy,
}

fn interaction_counts(circuit: &Circuit) -> Vec<Vec<usize>> {
    let n = circuit.num_qubits();
    let mut w = vec![vec![0usize; n]; n];
    for g in circuit.gates() {
        if !g.is_unitary() {
            continue;
        }
        let qs = g.qubits();
        for (i, &a) in qs.iter().enumerate() {
            for &b in &qs[i + 1..] {
                w[a][b] += 1;
                w[b][a] += 1;
            }
        }
    }
    w
}

/// Chooses where each virtual qubit starts.
///
/// `DegreeGreedy` puts the most-interacting virtual qubit on the
/// highest-degree physical qubit, then repeatedly places the unplaced virtual
/// qubit with the most interactions with already placed ones on the free
/// physical qubit adjacent to the most of its placed partners. Ties break by
/// lower index.
pub fn assign_layout(
    circuit: &Circuit,
    coupling: &CouplingMap,
    strategy: LayoutStrategy,
) -> Result<Layout, TranspileError> {
    let n = circuit.num_qubits();
    let p = coupling.num_physical();
    if n > p {
        return Err(TranspileError::TooFewPhysical {
            virtual_qubits: n,
            physical: p,
        });
    }
    let mut initial = match strategy {
        LayoutStrategy::Trivial => (0..n).collect::<Vec<_>>(),
        LayoutStrategy::DegreeGreedy => greedy(circuit, coupling),
    };
    let mut used = vec![false; p];
    for &q in &initial {
        used[q] = true;
    }
    initial.extend((0..p).filter(|&q| !used[q]));
    Ok(Layout::from_initial(initial))
}

fn greedy(circuit: &Circuit, coupling: &CouplingMap) -> Vec<usize> {
    let n = circuit.num_qubits();
    let p = coupling.num_physical();
    let w = interaction_counts(circuit);
    let total: Vec<usize> = w.iter().map(|row| row.iter().sum()).collect();
    let mut phys_of: Vec<Option<usize>> = vec![None; n];
    let mut taken = vec![false; p];

    // argmax with lowest-index tie-break
    let best = |items: &mut dyn Iterator<Item = (usize, (usize, usize))>| {
        items
            .fold(
                None,
                |acc: Option<(usize, (usize, usize))>, (i, key)| match acc {
                    Some((_, k)) if k >= key => acc,
                    _ => Some((i, key)),
                },
            )
            .map(|(i, _)| i)
    };

    for _ in 0..n {
        let v = best(&mut (0..n).filter(|&v| phys_of[v].is_none()).map(|v| {
            let placed: usize = (0..n)
                .filter(|&u| phys_of[u].is_some())
                .map(|u| w[v][u])
                .sum();
            (v, (placed, total[v]))
        }))
        .expect("an unplaced virtual qubit remains");
        let q = best(&mut (0..p).filter(|&q| !taken[q]).map(|q| {
            let near: usize = (0..n)
                .filter_map(|u| phys_of[u].map(|pu| (u, pu)))
                .filter(|&(_, pu)| coupling.is_adjacent(q, pu))
                .map(|(u, _)| w[v][u])
                .sum();
            (q, (near, coupling.degree(q)))
        }))
        .expect("enough physical qubits");
        phys_of[v] = Some(q);
        taken[q] = true;
    }
    phys_of
        .into_iter()
        .map(|q| q.expect("all placed"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_basis;

    #[test]
    fn trivial_layout() {
        let c = Circuit::from_gates(3, [Gate::cx(0, 1)]).unwrap();
        let l = assign_layout(&c, &CouplingMap::line(3), LayoutStrategy::Trivial).unwrap();
        assert_eq!(l.initial, vec![0, 1, 2]);
        assert!(l.is_bijection());
    }

    #[test]
    fn greedy_puts_hub_on_center() {
        let c = Circuit::from_gates(
            4,
            [
                Gate::cx(2, 0),
                Gate::cx(2, 1),
                Gate::cx(3, 2),
                Gate::cx(0, 2),
            ],
        )
        .unwrap();
        let l = assign_layout(&c, &CouplingMap::star(4, 0), LayoutStrategy::DegreeGreedy).unwrap();
        assert_eq!(l.initial[2], 0);
        assert!(l.is_bijection());
    }

    #[test]
    fn ancillas_fill_remaining_slots() {
        let c = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
        let l = assign_layout(&c, &CouplingMap::star(5, 3), LayoutStrategy::DegreeGreedy).unwrap();
        assert_eq!(l.initial.len(), 5);
        assert!(l.is_bijection());
        assert_eq!(l.initial[0], 3);
    }

    #[test]
    fn too_few_physical() {
        let c = Circuit::new(4);
        assert!(matches!(
            assign_layout(&c, &CouplingMap::line(3), LayoutStrategy::Trivial),
            Err(TranspileError::TooFewPhysical { .. })
        ));
    }

    #[test]
    fn permutation_circuit_moves_content() {
        let perm = vec![2, 0, 3, 1];
        let c = permutation_circuit(&perm);
        for p in 0..4 {
            let out = run_basis(&c, 1 << p).unwrap();
            assert!((out.amplitudes()[1 << perm[p]].re - 1.0).abs() < 1e-12);
        }
        assert!(permutation_circuit(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn compose_and_invert() {
        let a = vec![1, 2, 0];
        let b = vec![2, 1, 0];
        assert_eq!(compose(&a, &invert(&a)), vec![0, 1, 2]);
        assert_eq!(compose(&a, &b), vec![0, 2, 1]);
        let l = Layout::from_initial(vec![1, 0, 2]).then(&a);
        assert_eq!(l.final_layout(), vec![2, 1, 0]);
    }
}
