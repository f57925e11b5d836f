use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MitigationError;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::sim::{sample, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldMode {
    #[default]
    Global,
    PerGate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extrapolator {
    #[default]
    Linear,
    Quadratic,
}

impl Extrapolator {
    pub fn degree(self) -> usize {
        match self {
            Extrapolator::Linear => 1,
            Extrapolator::Quadratic => 2,
        }
    }
}

/// Noise amplification by unitary folding.
///
/// Global: body `C` becomes `C (C† C)^k`; per-gate: each `G` becomes
/// `G (G† G)^k`, with `k = (λ - 1) / 2`. Barriers are not folded in per-gate
/// mode. Trailing measurements stay at the end.
pub fn fold(circuit: &Circuit, lambda: u64, mode: FoldMode) -> Result<Circuit, MitigationError> {
    if lambda % 2 == 0 {
        return Err(MitigationError::EvenScale(lambda));
    }
    let k = (lambda - 1) / 2;
    let body = circuit.without_measurements();
    let measures = circuit
        .gates()
        .iter()
        .filter(|g| g.kind() == GateKind::Measure);
    let mut gates: Vec<Gate> = Vec::with_capacity(circuit.len() * lambda as usize);
    match mode {
        FoldMode::Global => {
            let inverse = body.inverse()?;
            gates.extend_from_slice(body.gates());
            for _ in 0..k {
                gates.extend_from_slice(inverse.gates());
                gates.extend_from_slice(body.gates());
            }
        }
        FoldMode::PerGate => {
            for g in body.gates() {
                gates.push(g.clone());
                if g.kind() == GateKind::Barrier {
                    continue;
                }
                let inv = g.inverse().expect("body gates are unitary");
                for _ in 0..k {
                    gates.push(inv.clone());
                    gates.push(g.clone());
                }
            }
        }
    }
    gates.extend(measures.cloned());
    Ok(Circuit::from_gates(circuit.num_qubits(), gates)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZneConfig {
    pub scale_factors: Vec<u64>,
    pub fold_mode: FoldMode,
    pub extrapolator: Extrapolator,
    /// Qubits whose Z product is the observable.
    pub observable: Vec<usize>,
}

impl ZneConfig {
    /// λ = 1, 3, 5 with global folding and a linear fit.
    pub fn new(observable: Vec<usize>) -> ZneConfig {
        ZneConfig {
            scale_factors: vec![1, 3, 5],
            fold_mode: FoldMode::Global,
            extrapolator: Extrapolator::Linear,
            observable,
        }
    }

    pub fn validate(&self) -> Result<(), MitigationError> {
        if let Some(&even) = self.scale_factors.iter().find(|&&l| l % 2 == 0) {
            return Err(MitigationError::EvenScale(even));
        }
        if self.scale_factors.first() != Some(&1) {
            return Err(MitigationError::ScaleFactors(
                "the first factor must be 1".into(),
            ));
        }
        if self.scale_factors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MitigationError::ScaleFactors(
                "factors must be strictly ascending".into(),
            ));
        }
        let degree = self.extrapolator.degree();
        if self.scale_factors.len() <= degree {
            return Err(MitigationError::TooFewPoints {
                points: self.scale_factors.len(),
                degree,
            });
        }
        if self.observable.is_empty() {
            return Err(MitigationError::Observable("no qubits".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZneResult {
    pub mitigated: f64,
    /// Polynomial coefficients, constant term first.
    pub coefficients: Vec<f64>,
    /// `(λ, expectation)` per scale factor.
    pub raw: Vec<(u64, f64)>,
}

/// Least-squares polynomial fit of `points`, evaluated at λ = 0.
/// Constant data is returned exactly.
pub fn extrapolate(
    points: &[(f64, f64)],
    extrapolator: Extrapolator,
) -> Result<(f64, Vec<f64>), MitigationError> {
    let degree = extrapolator.degree();
    if points.len() <= degree {
        return Err(MitigationError::TooFewPoints {
            points: points.len(),
            degree,
        });
    }
    let first = points[0].1;
    if points.iter().all(|&(_, y)| y == first) {
        let mut coefficients = vec![0.0; degree + 1];
        coefficients[0] = first;
        return Ok((first, coefficients));
    }
    let a = DMatrix::from_fn(points.len(), degree + 1, |i, j| points[i].0.powi(j as i32));
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let coefficients = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| MitigationError::ScaleFactors(e.into()))?;
    Ok((coefficients[0], coefficients.iter().copied().collect()))
}

/// Zero-noise extrapolation of a Z-parity expectation.
///
/// Measurements are added on the observable qubits if the circuit has none.
/// Every scale factor is sampled with the same `seed`.
pub fn zne_estimate(
    circuit: &Circuit,
    config: &ZneConfig,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<ZneResult, MitigationError> {
    config.validate()?;
    let mut measured_circuit = circuit.clone();
    if !circuit.has_measure() {
        for &q in &config.observable {
            measured_circuit.push(Gate::measure(q))?;
        }
    }
    let measured = measured_circuit.measured_qubits();
    let mut mask = 0u64;
    for q in &config.observable {
        let pos = measured
            .iter()
            .position(|m| m == q)
            .ok_or_else(|| MitigationError::Observable(format!("qubit {q} is not measured")))?;
        if mask & (1 << pos) != 0 {
            return Err(MitigationError::Observable(format!(
                "qubit {q} listed twice"
            )));
        }
        mask |= 1 << pos;
    }

    let raw = config
        .scale_factors
        .par_iter()
        .map(|&lambda| {
            let folded = fold(&measured_circuit, lambda, config.fold_mode)?;
            let hist = sample(&folded, shots, seed, Some(noise))?;
            Ok((lambda, hist.parity_expectation(mask)))
        })
        .collect::<Result<Vec<_>, MitigationError>>()?;
    let points: Vec<(f64, f64)> = raw.iter().map(|&(l, e)| (l as f64, e)).collect();
    let (mitigated, coefficients) = extrapolate(&points, config.extrapolator)?;
    Ok(ZneResult {
        mitigated,
        coefficients,
        raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body() -> Circuit {
        Circuit::from_gates(
            3,
            [
                Gate::h(0),
                Gate::cx(0, 1),
                Gate::t(2),
                Gate::cp(0.3, 1, 2),
                Gate::measure(0),
                Gate::measure(1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fold_count_law() {
        let c = body();
        for lambda in [1, 3, 5, 7] {
            let f = fold(&c, lambda, FoldMode::Global).unwrap();
            assert_eq!(f.len(), lambda as usize * 4 + 2);
            let g = fold(&c, lambda, FoldMode::PerGate).unwrap();
            assert_eq!(g.len(), lambda as usize * 4 + 2);
            let ideal = c.without_measurements();
            for folded in [f, g] {
                assert!(crate::sim::equivalent_up_to_global_phase(
                    &ideal,
                    &folded.without_measurements(),
                    1e-12
                )
                .unwrap());
            }
        }
        assert_eq!(fold(&c, 1, FoldMode::Global).unwrap(), c);
        assert_eq!(
            fold(&c, 2, FoldMode::Global),
            Err(MitigationError::EvenScale(2))
        );
    }

    #[test]
    fn linear_synthetic_intercept() {
        let pts = [(1.0, 0.9), (3.0, 0.7), (5.0, 0.5)];
        let (v, coeffs) = extrapolate(&pts, Extrapolator::Linear).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!((coeffs[1] + 0.1).abs() < 1e-12);
    }

    #[test]
    fn quadratic_needs_three_points() {
        let pts = [(1.0, 0.9), (3.0, 0.7)];
        assert_eq!(
            extrapolate(&pts, Extrapolator::Quadratic),
            Err(MitigationError::TooFewPoints {
                points: 2,
                degree: 2
            })
        );
    }

    #[test]
    fn config_validation() {
        let mut cfg = ZneConfig::new(vec![0]);
        assert!(cfg.validate().is_ok());
        cfg.scale_factors = vec![3, 5];
        assert!(cfg.validate().is_err());
        cfg.scale_factors = vec![1, 5, 3];
        assert!(cfg.validate().is_err());
        cfg.scale_factors = vec![1, 4];
        assert_eq!(cfg.validate(), Err(MitigationError::EvenScale(4)));
    }

    #[test]
    fn zero_noise_is_exact() {
        let ghz = Circuit::from_gates(3, [Gate::h(0), Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        let r = zne_estimate(
            &ghz,
            &ZneConfig::new(vec![0, 1]),
            &NoiseModel::noiseless(),
            500,
            3,
        )
        .unwrap();
        assert_eq!(r.mitigated, 1.0);
        assert!(r.raw.iter().all(|&(_, e)| e == 1.0));
    }
}
