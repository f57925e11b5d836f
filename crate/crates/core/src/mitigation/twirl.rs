use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::MitigationError;
use crate::circuit::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn gate(self, q: usize) -> Option<Gate> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Gate::x(q)),
            Pauli::Y => Some(Gate::y(q)),
            Pauli::Z => Some(Gate::z(q)),
        }
    }
}

use Pauli::{I, X, Y, Z};

/// `CX_CONJUGATION[4a + b]` is the pair `(a', b')` with
/// `(a' ⊗ b') · CX · (a ⊗ b) = ±CX`, indices in `Pauli::ALL` order and the
/// control first.
pub const CX_CONJUGATION: [(Pauli, Pauli); 16] = [
    (I, I),
    (I, X),
    (Z, Y),
    (Z, Z),
    (X, X),
    (X, I),
    (Y, Z),
    (Y, Y),
    (Y, X),
    (Y, I),
    (X, Z),
    (X, Y),
    (Z, I),
    (Z, X),
    (I, Y),
    (I, Z),
];

pub fn compensating_pair(control: Pauli, target: Pauli) -> (Pauli, Pauli) {
    CX_CONJUGATION[4 * control as usize + target as usize]
}

/// Wraps every CX in a uniformly drawn Pauli pair and its exact compensation.
/// One draw per CX, in gate order, from a ChaCha8 stream seeded by `seed`.
pub fn pauli_twirl(circuit: &Circuit, seed: u64) -> Result<Circuit, MitigationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(circuit.len() * 3);
    for g in circuit.gates() {
        if g.kind() == GateKind::CX {
            let (c, t) = (g.qubits()[0], g.qubits()[1]);
            let k = rng.random_range(0..16);
            let (a, b) = (Pauli::ALL[k / 4], Pauli::ALL[k % 4]);
            let (a2, b2) = compensating_pair(a, b);
            gates.extend(a.gate(c));
            gates.extend(b.gate(t));
            gates.push(g.clone());
            gates.extend(a2.gate(c));
            gates.extend(b2.gate(t));
        } else if g.is_unitary() && g.qubits().len() > 1 {
            return Err(MitigationError::Untranslated(g.kind()));
        } else {
            gates.push(g.clone());
        }
    }
    Ok(Circuit::from_gates(circuit.num_qubits(), gates)?)
}
