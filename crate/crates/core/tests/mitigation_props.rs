mod common;

use common::{random_circuit, seeded};
use proptest::prelude::*;
use qkit_core::mitigation::*;
use qkit_core::sim::{equivalent_up_to_global_phase, NoiseModel};
use qkit_core::transpiler::{schedule, translate_to_basis, BasisGateSet, Durations};
use qkit_core::{Circuit, Gate, GateKind};

fn basis_circuit(seed: u64, n: usize, len: usize) -> Circuit {
    let c = random_circuit(&mut seeded(seed), n, len);
    let c = qkit_core::transpiler::decompose_multiqubit(&c);
    translate_to_basis(&c, &BasisGateSet::default()).unwrap().0
}

fn ghz3() -> Circuit {
    Circuit::from_gates(
        3,
        [
            Gate::h(0),
            Gate::cx(0, 1),
            Gate::cx(1, 2),
            Gate::measure(0),
            Gate::measure(1),
            Gate::measure(2),
        ],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn twirl_preserves_semantics(seed in any::<u64>(), twirl_seed in any::<u64>(), n in 2usize..=5, len in 0usize..=25) {
        let c = basis_circuit(seed, n, len);
        let t = pauli_twirl(&c, twirl_seed).unwrap();
        prop_assert!(equivalent_up_to_global_phase(&c, &t, 1e-9).unwrap());
        prop_assert_eq!(t, pauli_twirl(&c, twirl_seed).unwrap());
    }

    #[test]
    fn dd_preserves_semantics(seed in any::<u64>(), n in 1usize..=5, len in 0usize..=25, xyxy in any::<bool>(), min in 1u64..4) {
        let c = basis_circuit(seed, n, len);
        let d = Durations::default();
        let s = schedule(&c, &d).unwrap();
        let seq = if xyxy { DdSequence::Xyxy } else { DdSequence::Xx };
        let out = insert_dd(&c, &s, min, seq, &d).unwrap();
        prop_assert!(equivalent_up_to_global_phase(&c, &out.circuit, 1e-9).unwrap());
        prop_assert_eq!(out.circuit.len(), c.len() + out.pulses.len());
        for p in &out.pulses {
            let w = s.idle_windows.iter().find(|w| w.qubit == p.qubit && w.start <= p.start && p.start < w.start + w.duration);
            prop_assert!(w.is_some(), "pulse {:?} outside every window", p);
            let w = w.unwrap();
            prop_assert!(p.start + d.get(p.kind).unwrap() <= w.start + w.duration);
        }
    }

    #[test]
    fn fold_preserves_semantics_and_count(seed in any::<u64>(), n in 1usize..=5, len in 0usize..=20, k in 0u64..4, per_gate in any::<bool>()) {
        let c = random_circuit(&mut seeded(seed), n, len);
        let lambda = 2 * k + 1;
        let mode = if per_gate { FoldMode::PerGate } else { FoldMode::Global };
        let f = fold(&c, lambda, mode).unwrap();
        prop_assert!(equivalent_up_to_global_phase(&c, &f, 1e-9).unwrap());
        if !per_gate {
            prop_assert_eq!(f.len(), lambda as usize * c.len());
        }
    }

    #[test]
    fn polynomial_data_is_extrapolated_exactly(a in -1.0f64..1.0, b in -0.2f64..0.2, c in -0.02f64..0.02) {
        let lin: Vec<(f64, f64)> = [1.0, 3.0, 5.0].iter().map(|&l| (l, a + b * l)).collect();
        let (v, _) = extrapolate(&lin, Extrapolator::Linear).unwrap();
        prop_assert!((v - a).abs() < 1e-9);
        let quad: Vec<(f64, f64)> = [1.0, 3.0, 5.0, 7.0].iter().map(|&l| (l, a + b * l + c * l * l)).collect();
        let (v, coeffs) = extrapolate(&quad, Extrapolator::Quadratic).unwrap();
        prop_assert!((v - a).abs() < 1e-9);
        prop_assert!((coeffs[2] - c).abs() < 1e-9);
    }
}

#[test]
fn twirl_pairs_are_uniform() {
    let c = Circuit::from_gates(2, [Gate::cx(0, 1)]).unwrap();
    let trials = 3200u64;
    let mut counts = [0u64; 16];
    for seed in 0..trials {
        let t = pauli_twirl(&c, seed).unwrap();
        let cx_at = t
            .gates()
            .iter()
            .position(|g| g.kind() == GateKind::CX)
            .unwrap();
        let before = &t.gates()[..cx_at];
        let pauli_on = |q: usize| {
            before
                .iter()
                .find(|g| g.qubits() == [q])
                .map_or(Pauli::I, |g| match g.kind() {
                    GateKind::X => Pauli::X,
                    GateKind::Y => Pauli::Y,
                    _ => Pauli::Z,
                })
        };
        counts[4 * pauli_on(0) as usize + pauli_on(1) as usize] += 1;
    }
    let p = 1.0 / 16.0;
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    for (i, &n) in counts.iter().enumerate() {
        assert!(
            (n as f64 - trials as f64 * p).abs() <= 3.0 * sigma,
            "pair {i}: {n} of {trials}"
        );
    }
}

#[test]
fn folded_expectation_decays_with_scale() {
    let noise = NoiseModel::depolarizing(GateKind::CX, 0.02).unwrap();
    let mut last = f64::INFINITY;
    for lambda in [1, 3, 5, 7, 9] {
        let f = fold(&ghz3(), lambda, FoldMode::Global).unwrap();
        let h = qkit_core::sim::sample(&f, 20_000, 5, Some(&noise)).unwrap();
        let e = h.parity_expectation(0b011);
        assert!(e < last, "λ = {lambda}: {e} !< {last}");
        last = e;
    }
}

#[test]
fn zne_improves_ghz_parity() {
    let noise = NoiseModel::depolarizing(GateKind::CX, 0.01).unwrap();
    let config = ZneConfig::new(vec![0, 1]);
    let (mut raw_err, mut zne_err) = (0.0, 0.0);
    for seed in 0..20 {
        let r = zne_estimate(&ghz3(), &config, &noise, 4000, seed).unwrap();
        raw_err += (r.raw[0].1 - 1.0).abs();
        zne_err += (r.mitigated - 1.0).abs();
    }
    assert!(zne_err < raw_err, "zne {zne_err} vs raw {raw_err}");
}

#[test]
fn zne_quadratic_and_per_gate() {
    let noise = NoiseModel::depolarizing(GateKind::CX, 0.01).unwrap();
    let config = ZneConfig {
        scale_factors: vec![1, 3, 5, 7],
        fold_mode: FoldMode::PerGate,
        extrapolator: Extrapolator::Quadratic,
        observable: vec![1, 2],
    };
    let r = zne_estimate(&ghz3(), &config, &noise, 2000, 1).unwrap();
    assert_eq!(r.raw.len(), 4);
    assert_eq!(r.coefficients.len(), 3);
    assert!(r.mitigated > 0.5 && r.mitigated < 1.5);
    let bad = ZneConfig {
        observable: vec![5],
        ..ZneConfig::new(vec![])
    };
    assert!(zne_estimate(&ghz3(), &bad, &noise, 10, 1).is_err());
}

#[test]
fn mirror_survival_decreases_with_depth() {
    let noise = NoiseModel::depolarizing(GateKind::CX, 0.005).unwrap();
    let mut last = 1.0;
    for layers in [1, 2, 4, 8] {
        let c = random_layered_circuit(4, layers, 42);
        let r = mirror_benchmark(&c, 10_000, 9, Some(&noise)).unwrap();
        assert!(r.survival_probability < last, "{layers} layers");
        assert!((0.0..=1.0).contains(&r.survival_probability));
        last = r.survival_probability;
    }
}

#[test]
fn mirror_readout_only() {
    let noise = NoiseModel::noiseless().with_readout_error(0.1).unwrap();
    let shots = 10_000u64;
    let r = mirror_benchmark(&Circuit::new(4), shots, 8, Some(&noise)).unwrap();
    let p = 0.9f64.powi(4);
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    assert!((r.survival_probability - p).abs() < 4.0 * sigma);
    assert_eq!(r.base_depth, 0);
}
