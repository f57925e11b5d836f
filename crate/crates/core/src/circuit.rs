//! Gate-level circuit representation.
//!
//! Qubits are flat integer indices. A [`Circuit`] is an ordered gate list; all
//! operations on it return new values and leave their inputs untouched.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit index {qubit} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("{kind} expects {expected} qubit operand(s), got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: String,
        got: usize,
    },
    #[error("duplicate qubit operand {0}")]
    DuplicateQubit(usize),
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("{kind} requires an angle")]
    MissingAngle { kind: GateKind },
    #[error("modular multiplier {multiplier} is not coprime to modulus {modulus}")]
    NotCoprime { multiplier: u64, modulus: u64 },
    #[error("modulus {modulus} does not fit in a {width}-qubit register")]
    ModulusTooWide { modulus: u64, width: usize },
    #[error("modular multiplication needs a positive multiplier and a modulus >= 2")]
    InvalidModMul,
    #[error("gates after a measurement are not supported")]
    MeasureNotSuffix,
    #[error("circuit contains measurements")]
    ContainsMeasure,
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Gate kinds understood by every module of the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    SX,
    SXdg,
    RZ,
    P,
    CX,
    CZ,
    CP,
    Swap,
    CCX,
    CModMul,
    Barrier,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 20] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::SX,
        GateKind::SXdg,
        GateKind::RZ,
        GateKind::P,
        GateKind::CX,
        GateKind::CZ,
        GateKind::CP,
        GateKind::Swap,
        GateKind::CCX,
        GateKind::CModMul,
        GateKind::Barrier,
        GateKind::Measure,
    ];

    /// Lowercase mnemonic used by the text format and in reports.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::SX => "sx",
            GateKind::SXdg => "sxdg",
            GateKind::RZ => "rz",
            GateKind::P => "p",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::CP => "cp",
            GateKind::Swap => "swap",
            GateKind::CCX => "ccx",
            GateKind::CModMul => "cmodmul",
            GateKind::Barrier => "barrier",
            GateKind::Measure => "measure",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Fixed operand count, or `None` for variable-width kinds.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::CP | GateKind::Swap => Some(2),
            GateKind::CCX => Some(3),
            GateKind::CModMul | GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RZ | GateKind::P | GateKind::CP)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a controlled modular multiplication `f -> multiplier * f mod modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModMul {
    pub multiplier: u64,
    pub modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    angle: Option<f64>,
    modmul: Option<ModMul>,
}

impl Gate {
    /// Builds a gate, checking operand count, distinctness and parameters.
    ///
    /// Range checks against a circuit width happen when the gate is appended.
    pub fn new(
        kind: GateKind,
        qubits: Vec<usize>,
        angle: Option<f64>,
        modmul: Option<ModMul>,
    ) -> Result<Gate, CircuitError> {
        match kind.arity() {
            Some(n) if qubits.len() != n => {
                return Err(CircuitError::ArityMismatch {
                    kind,
                    expected: n.to_string(),
                    got: qubits.len(),
                })
            }
            None if kind == GateKind::CModMul && qubits.len() < 2 => {
                return Err(CircuitError::ArityMismatch {
                    kind,
                    expected: "1 control + at least 1 target".into(),
                    got: qubits.len(),
                })
            }
            None if kind == GateKind::Barrier && qubits.is_empty() => {
                return Err(CircuitError::ArityMismatch {
                    kind,
                    expected: "at least 1".into(),
                    got: 0,
                })
            }
            _ => {}
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(CircuitError::DuplicateQubit(*q));
            }
        }
        let angle = if kind.has_angle() {
            let a = angle.ok_or(CircuitError::MissingAngle { kind })?;
            if !a.is_finite() {
                return Err(CircuitError::NonFiniteAngle(a));
            }
            Some(a)
        } else {
            None
        };
        let modmul = if kind == GateKind::CModMul {
            let m = modmul.ok_or(CircuitError::InvalidModMul)?;
            if m.multiplier == 0 || m.modulus < 2 {
                return Err(CircuitError::InvalidModMul);
            }
            if gcd(m.multiplier, m.modulus) != 1 {
                return Err(CircuitError::NotCoprime {
                    multiplier: m.multiplier,
                    modulus: m.modulus,
                });
            }
            let width = qubits.len() - 1;
            if width < 64 && m.modulus > (1u64 << width) {
                return Err(CircuitError::ModulusTooWide {
                    modulus: m.modulus,
                    width,
                });
            }
            Some(m)
        } else {
            None
        };
        Ok(Gate {
            kind,
            qubits,
            angle,
            modmul,
        })
    }

    fn fixed(kind: GateKind, qubits: Vec<usize>, angle: Option<f64>) -> Gate {
        Gate {
            kind,
            qubits,
            angle,
            modmul: None,
        }
    }

    pub fn h(q: usize) -> Gate {
        Gate::fixed(GateKind::H, vec![q], None)
    }
    pub fn x(q: usize) -> Gate {
        Gate::fixed(GateKind::X, vec![q], None)
    }
    pub fn y(q: usize) -> Gate {
        Gate::fixed(GateKind::Y, vec![q], None)
    }
    pub fn z(q: usize) -> Gate {
        Gate::fixed(GateKind::Z, vec![q], None)
    }
    pub fn s(q: usize) -> Gate {
        Gate::fixed(GateKind::S, vec![q], None)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::fixed(GateKind::Sdg, vec![q], None)
    }
    pub fn t(q: usize) -> Gate {
        Gate::fixed(GateKind::T, vec![q], None)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::fixed(GateKind::Tdg, vec![q], None)
    }
    pub fn sx(q: usize) -> Gate {
        Gate::fixed(GateKind::SX, vec![q], None)
    }
    pub fn sxdg(q: usize) -> Gate {
        Gate::fixed(GateKind::SXdg, vec![q], None)
    }
    pub fn rz(theta: f64, q: usize) -> Gate {
        Gate::fixed(GateKind::RZ, vec![q], Some(theta))
    }
    pub fn p(theta: f64, q: usize) -> Gate {
        Gate::fixed(GateKind::P, vec![q], Some(theta))
    }
    pub fn measure(q: usize) -> Gate {
        Gate::fixed(GateKind::Measure, vec![q], None)
    }

    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Gate {
        assert_ne!(control, target, "cx operands must differ");
        Gate::fixed(GateKind::CX, vec![control, target], None)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "cz operands must differ");
        Gate::fixed(GateKind::CZ, vec![a, b], None)
    }
    pub fn cp(theta: f64, control: usize, target: usize) -> Gate {
        assert_ne!(control, target, "cp operands must differ");
        Gate::fixed(GateKind::CP, vec![control, target], Some(theta))
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "swap operands must differ");
        Gate::fixed(GateKind::Swap, vec![a, b], None)
    }
    pub fn ccx(c0: usize, c1: usize, target: usize) -> Gate {
        assert!(
            c0 != c1 && c0 != target && c1 != target,
            "ccx operands must differ"
        );
        Gate::fixed(GateKind::CCX, vec![c0, c1, target], None)
    }
    pub fn barrier(qubits: impl IntoIterator<Item = usize>) -> Gate {
        Gate::fixed(GateKind::Barrier, qubits.into_iter().collect(), None)
    }

    pub fn cmodmul(
        multiplier: u64,
        modulus: u64,
        control: usize,
        targets: &[usize],
    ) -> Result<Gate, CircuitError> {
        let mut qubits = Vec::with_capacity(targets.len() + 1);
        qubits.push(control);
        qubits.extend_from_slice(targets);
        Gate::new(
            GateKind::CModMul,
            qubits,
            None,
            Some(ModMul {
                multiplier,
                modulus,
            }),
        )
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    pub fn modmul(&self) -> Option<ModMul> {
        self.modmul
    }

    /// Same gate with every operand replaced by `map[q]`.
    pub fn remapped(&self, map: &[usize]) -> Gate {
        Gate {
            qubits: self.qubits.iter().map(|&q| map[q]).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn with_angle(&self, angle: f64) -> Gate {
        Gate {
            angle: Some(angle),
            ..self.clone()
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self.kind, GateKind::Barrier | GateKind::Measure)
    }

    /// The gate undoing this one. `None` for measurements.
    pub fn inverse(&self) -> Option<Gate> {
        use GateKind::*;
        let kind = match self.kind {
            Measure => return None,
            S => Sdg,
            Sdg => S,
            T => Tdg,
            Tdg => T,
            SX => SXdg,
            SXdg => SX,
            RZ | P | CP => return Some(self.with_angle(-self.angle.unwrap_or(0.0))),
            CModMul => {
                let m = self.modmul.expect("cmodmul carries parameters");
                let inv = mod_inverse(m.multiplier % m.modulus, m.modulus)
                    .expect("multiplier coprime to modulus");
                return Some(Gate {
                    modmul: Some(ModMul {
                        multiplier: inv,
                        modulus: m.modulus,
                    }),
                    ..self.clone()
                });
            }
            other => other,
        };
        Some(Gate {
            kind,
            ..self.clone()
        })
    }

    fn check_range(&self, num_qubits: usize) -> Result<(), CircuitError> {
        match self.qubits.iter().find(|&&q| q >= num_qubits) {
            Some(&qubit) => Err(CircuitError::QubitOutOfRange { qubit, num_qubits }),
            None => Ok(()),
        }
    }
}

/// Ordered gate list over `num_qubits` indexed qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    name: String,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            name: String::new(),
        }
    }

    pub fn named(num_qubits: usize, name: impl Into<String>) -> Circuit {
        Circuit {
            name: name.into(),
            ..Circuit::new(num_qubits)
        }
    }

    /// Builds a circuit from a gate list, validating every gate.
    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends in place. The gate is rejected if it breaks an invariant.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if self.num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        gate.check_range(self.num_qubits)?;
        if gate.kind != GateKind::Measure && self.has_measure() {
            return Err(CircuitError::MeasureNotSuffix);
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Returns a copy with `gate` appended.
    pub fn append(&self, gate: Gate) -> Result<Circuit, CircuitError> {
        let mut c = self.clone();
        c.push(gate)?;
        Ok(c)
    }

    pub fn has_measure(&self) -> bool {
        self.gates
            .last()
            .is_some_and(|g| g.kind == GateKind::Measure)
    }

    /// Qubits read out by trailing MEASURE gates, in ascending order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| g.qubits[0])
            .collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// The circuit with its measurement suffix removed.
    pub fn without_measurements(&self) -> Circuit {
        Circuit {
            gates: self
                .gates
                .iter()
                .filter(|g| g.kind != GateKind::Measure)
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    /// Longest chain of gates sharing qubits, by greedy layering.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let l = 1 + g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0);
            for &q in &g.qubits {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn gate_counts(&self) -> BTreeMap<GateKind, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.kind).or_insert(0) += 1;
        }
        counts
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Reversed circuit of inverted gates.
    pub fn inverse(&self) -> Result<Circuit, CircuitError> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| g.inverse().ok_or(CircuitError::ContainsMeasure))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit {
            num_qubits: self.num_qubits,
            gates,
            name: self.name.clone(),
        })
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.num_qubits != other.num_qubits {
            return Err(CircuitError::QubitCountMismatch(
                self.num_qubits,
                other.num_qubits,
            ));
        }
        let mut c = self.clone();
        for g in &other.gates {
            c.push(g.clone())?;
        }
        Ok(c)
    }

    /// Moves every qubit `q` onto `map[q]` in a circuit of width `num_qubits`.
    pub fn remapped(&self, map: &[usize], num_qubits: usize) -> Result<Circuit, CircuitError> {
        if map.len() < self.num_qubits {
            return Err(CircuitError::QubitCountMismatch(map.len(), self.num_qubits));
        }
        let mut c = Circuit::named(num_qubits, self.name.clone());
        for g in &self.gates {
            c.push(g.remapped(map))?;
        }
        Ok(c)
    }

    /// Replaces the gate list without re-validating; callers uphold the invariants.
    pub(crate) fn with_gates_unchecked(&self, gates: Vec<Gate>) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates,
            name: self.name.clone(),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
