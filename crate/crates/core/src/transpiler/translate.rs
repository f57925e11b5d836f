use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use super::TranspileError;
use crate::circuit::{Circuit, Gate, GateKind};

/// Standard Toffoli template: six CX, two H, seven T/T†. Exact, no phase.
pub fn ccx_template(a: usize, b: usize, t: usize) -> Vec<Gate> {
    vec![
        Gate::h(t),
        Gate::cx(b, t),
        Gate::tdg(t),
        Gate::cx(a, t),
        Gate::t(t),
        Gate::cx(b, t),
        Gate::tdg(t),
        Gate::cx(a, t),
        Gate::t(b),
        Gate::t(t),
        Gate::h(t),
        Gate::cx(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cx(a, b),
    ]
}

/// Expands gates acting on more than two qubits. CMODMUL passes through.
pub fn decompose_multiqubit(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        if g.kind() == GateKind::CCX {
            let q = g.qubits();
            gates.extend(ccx_template(q[0], q[1], q[2]));
        } else {
            gates.push(g.clone());
        }
    }
    circuit.with_gates_unchecked(gates)
}

/// Native gate kinds of a target backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisGateSet(BTreeSet<GateKind>);

impl Default for BasisGateSet {
    /// `{cx, rz, sx, x}`.
    fn default() -> Self {
        BasisGateSet(BTreeSet::from([
            GateKind::CX,
            GateKind::RZ,
            GateKind::SX,
            GateKind::X,
        ]))
    }
}

impl BasisGateSet {
    /// Accepts any set that can express every IR gate kind.
    pub fn new(kinds: impl IntoIterator<Item = GateKind>) -> Result<Self, TranspileError> {
        let set = BasisGateSet(
            kinds
                .into_iter()
                .filter(|k| !matches!(k, GateKind::Barrier | GateKind::Measure))
                .collect(),
        );
        set.validate()?;
        Ok(set)
    }

    /// Parses a comma-separated list such as `cx,rz,sx,x`.
    pub fn parse(list: &str) -> Result<Self, TranspileError> {
        let kinds = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| GateKind::from_name(s).ok_or_else(|| TranspileError::UnknownGate(s.into())))
            .collect::<Result<Vec<_>, _>>()?;
        BasisGateSet::new(kinds)
    }

    pub fn contains(&self, kind: GateKind) -> bool {
        self.0.contains(&kind) || matches!(kind, GateKind::Barrier | GateKind::Measure)
    }

    pub fn kinds(&self) -> impl Iterator<Item = GateKind> + '_ {
        self.0.iter().copied()
    }

    fn validate(&self) -> Result<(), TranspileError> {
        for kind in GateKind::ALL {
            if matches!(
                kind,
                GateKind::CModMul | GateKind::Barrier | GateKind::Measure
            ) {
                continue;
            }
            let probe = match kind.arity() {
                Some(1) => Gate::new(kind, vec![0], kind.has_angle().then_some(0.5), None),
                Some(2) => Gate::new(kind, vec![0, 1], kind.has_angle().then_some(0.5), None),
                _ => Gate::new(kind, vec![0, 1, 2], None, None),
            }
            .expect("probe gate is valid");
            translate_gate(&probe, self, 0)?;
        }
        Ok(())
    }
}

/// One rewrite step toward the basis, or `None` if no rule exists.
fn rewrite(g: &Gate) -> Option<Vec<Gate>> {
    use GateKind::*;
    let q = g.qubits();
    let theta = g.angle().unwrap_or(0.0);
    Some(match g.kind() {
        H => vec![
            Gate::rz(FRAC_PI_2, q[0]),
            Gate::sx(q[0]),
            Gate::rz(FRAC_PI_2, q[0]),
        ],
        X => vec![Gate::sx(q[0]), Gate::sx(q[0])],
        Y => vec![Gate::rz(PI, q[0]), Gate::x(q[0])],
        Z => vec![Gate::rz(PI, q[0])],
        S => vec![Gate::rz(FRAC_PI_2, q[0])],
        Sdg => vec![Gate::rz(-FRAC_PI_2, q[0])],
        T => vec![Gate::rz(FRAC_PI_4, q[0])],
        Tdg => vec![Gate::rz(-FRAC_PI_4, q[0])],
        SXdg => vec![Gate::sx(q[0]), Gate::x(q[0])],
        P => vec![Gate::rz(theta, q[0])],
        RZ => vec![Gate::p(theta, q[0])],
        CZ => vec![Gate::h(q[1]), Gate::cx(q[0], q[1]), Gate::h(q[1])],
        CX => vec![Gate::h(q[1]), Gate::cz(q[0], q[1]), Gate::h(q[1])],
        CP => vec![
            Gate::rz(theta / 2.0, q[0]),
            Gate::cx(q[0], q[1]),
            Gate::rz(-theta / 2.0, q[1]),
            Gate::cx(q[0], q[1]),
            Gate::rz(theta / 2.0, q[1]),
        ],
        Swap => vec![
            Gate::cx(q[0], q[1]),
            Gate::cx(q[1], q[0]),
            Gate::cx(q[0], q[1]),
        ],
        CCX => ccx_template(q[0], q[1], q[2]),
        SX | CModMul | Barrier | Measure => return None,
    })
}

const MAX_REWRITE_DEPTH: usize = 6;

fn translate_gate(
    g: &Gate,
    basis: &BasisGateSet,
    depth: usize,
) -> Result<Vec<Gate>, TranspileError> {
    if basis.contains(g.kind()) || g.kind() == GateKind::CModMul {
        return Ok(vec![g.clone()]);
    }
    let no_rule = || TranspileError::NoRule {
        kind: g.kind(),
        basis: basis
            .kinds()
            .map(|k| k.name())
            .collect::<Vec<_>>()
            .join(","),
    };
    if depth >= MAX_REWRITE_DEPTH {
        return Err(no_rule());
    }
    let mut out = Vec::new();
    for step in rewrite(g).ok_or_else(no_rule)? {
        out.extend(translate_gate(&step, basis, depth + 1).map_err(|_| no_rule())?);
    }
    Ok(out)
}

/// Rewrites every gate into `basis` using a fixed rule table. CMODMUL is left
/// in place; the second return value counts such opaque gates.
pub fn translate_to_basis(
    circuit: &Circuit,
    basis: &BasisGateSet,
) -> Result<(Circuit, usize), TranspileError> {
    let mut gates = Vec::with_capacity(circuit.len() * 3);
    let mut opaque = 0;
    for g in circuit.gates() {
        if g.kind() == GateKind::CModMul {
            opaque += 1;
        }
        gates.extend(translate_gate(g, basis, 0)?);
    }
    Ok((circuit.with_gates_unchecked(gates), opaque))
}
