//! Line-oriented text format for circuits.
//!
//! ```text
//! qubits 3
//! # comment
//! h 0
//! cp 1.5707963267948966 0 1
//! cmodmul 4 35 0 1 2 3 4 5 6
//! barrier
//! measure 0
//! ```
//!
//! Angles come first, then modular parameters (multiplier, modulus), then
//! qubit operands. A bare `barrier` spans every qubit.

use std::fmt::Write as _;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, ModMul};

fn err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let args: Vec<&str> = tokens.collect();

        let Some(c) = circuit.as_mut() else {
            if head != "qubits" || args.len() != 1 {
                return Err(err(line, "expected header `qubits <n>`"));
            }
            let n: usize = args[0]
                .parse()
                .map_err(|_| err(line, format!("invalid qubit count `{}`", args[0])))?;
            if n == 0 {
                return Err(err(line, "qubit count must be positive"));
            }
            circuit = Some(Circuit::new(n));
            continue;
        };

        let kind = GateKind::from_name(head)
            .ok_or_else(|| err(line, format!("unknown gate kind `{head}`")))?;
        let gate = parse_gate(kind, &args, c.num_qubits()).map_err(|e| match e {
            CircuitError::Parse { .. } => e,
            other => err(line, other.to_string()),
        })?;
        c.push(gate).map_err(|e| err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| err(1, "missing header `qubits <n>`"))
}

fn parse_gate(kind: GateKind, args: &[&str], num_qubits: usize) -> Result<Gate, CircuitError> {
    let mut rest = args;
    let angle = if kind.has_angle() {
        let (first, tail) = rest
            .split_first()
            .ok_or(CircuitError::MissingAngle { kind })?;
        rest = tail;
        Some(
            first
                .parse::<f64>()
                .map_err(|_| err(0, format!("invalid angle `{first}`")))?,
        )
    } else {
        None
    };
    let modmul = if kind == GateKind::CModMul {
        if rest.len() < 2 {
            return Err(CircuitError::InvalidModMul);
        }
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| err(0, format!("invalid integer `{s}`")))
        };
        let m = ModMul {
            multiplier: num(rest[0])?,
            modulus: num(rest[1])?,
        };
        rest = &rest[2..];
        Some(m)
    } else {
        None
    };
    let mut qubits = rest
        .iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| err(0, format!("invalid qubit index `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if kind == GateKind::Barrier && qubits.is_empty() {
        qubits = (0..num_qubits).collect();
    }
    Gate::new(kind, qubits, angle, modmul)
}

/// Renders a circuit so that `parse_circuit(render_circuit(c))` reproduces it.
pub fn render_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    if !circuit.name().is_empty() {
        let _ = writeln!(out, "# {}", circuit.name().replace('\n', " "));
    }
    let _ = writeln!(out, "qubits {}", circuit.num_qubits());
    for g in circuit.gates() {
        out.push_str(g.kind().name());
        if let Some(a) = g.angle() {
            // Display for f64 is the shortest string that round-trips.
            let _ = write!(out, " {a}");
        }
        if let Some(m) = g.modmul() {
            let _ = write!(out, " {} {}", m.multiplier, m.modulus);
        }
        let full_barrier = g.kind() == GateKind::Barrier
            && g.qubits().len() == circuit.num_qubits()
            && g.qubits().iter().enumerate().all(|(i, &q)| i == q);
        if !full_barrier {
            for q in g.qubits() {
                let _ = write!(out, " {q}");
            }
        }
        out.push('\n');
    }
    out
}
