mod common;

use common::{dft_matrix, phase_free_distance};
use proptest::prelude::*;
use qkit_core::fourier::*;
use qkit_core::sim::{run_basis, unitary_of, Statevector};
use qkit_core::GateKind;

#[test]
fn qft_matches_dft_matrix() {
    for n in 1..=8 {
        let (c, _) = build_qft(n).unwrap();
        let u = unitary_of(&c).unwrap();
        let dft = dft_matrix(n);
        assert!(u.max_deviation(&dft) < 1e-10, "n = {n}");
    }
}

#[test]
fn inverse_qft_is_adjoint() {
    for n in 1..=6 {
        let inv = build_inverse_qft(&AqftConfig::full(n)).unwrap();
        let u = unitary_of(&inv).unwrap();
        assert!(u.max_deviation(&dft_matrix(n).adjoint()) < 1e-10);
    }
}

#[test]
fn full_count_is_triangular() {
    for n in 1..=24 {
        let (c, report) = build_qft(n).unwrap();
        let expected = n * (n + 1) / 2;
        assert_eq!(report.transform_count(), expected);
        assert_eq!(c.count(GateKind::H) + c.count(GateKind::CP), expected);
        assert_eq!(report.swap_count, n / 2);
        assert_eq!(full_transform_count(n), expected);
    }
    assert_eq!(build_qft(13).unwrap().1.transform_count(), 91);
}

#[test]
fn default_cutoff_count_bound() {
    for n in 1..=24 {
        let m = default_cutoff(n);
        assert_eq!(m, (n as f64).log2().ceil().max(1.0) as usize);
        let (c, report) = build_aqft(&AqftConfig::default_for(n)).unwrap();
        assert!(report.transform_count() <= n * (m + 1), "n = {n}");
        // direct count: rotations with 2 ≤ k ≤ min(m, i + 1) on qubit i
        let expected_rot: usize = (0..n).map(|i| (i + 1).min(m).saturating_sub(1)).sum();
        assert_eq!(c.count(GateKind::CP), expected_rot);
        assert_eq!(aqft_rotation_count(n, m), expected_rot);
    }
}

#[test]
fn aqft_fidelity_regression() {
    let f = aqft_fidelity(8, Cutoff::Index(3), 64, 2024).unwrap();
    assert!((f - AQFT_8_3_FIDELITY).abs() < 1e-12, "{f:.17}");
}

/// Frozen output of `aqft_fidelity(8, Cutoff::Index(3), 64, 2024)`.
pub const AQFT_8_3_FIDELITY: f64 = 0.77371399016645093;

#[test]
fn basis_state_fidelity_closed_form() {
    // A dropped CP(θ) from control c to target i only shifts the relative
    // phase of output qubit i by θ·bit_c(j), so F = Π cos²(ε_i / 2).
    let (n, m) = (8, 3);
    let (exact, _) = build_qft(n).unwrap();
    let (approx, _) = build_aqft(&AqftConfig::with_cutoff(n, m)).unwrap();
    for j in 0..1usize << n {
        let a = run_basis(&exact, j).unwrap();
        let b = run_basis(&approx, j).unwrap();
        let got = qkit_core::sim::fidelity(&a, &b).unwrap();
        let mut expected = 1.0;
        for i in 0..n {
            let eps: f64 = (m + 1..=i + 1)
                .filter(|&k| (j >> (i + 1 - k)) & 1 == 1)
                .map(|k| std::f64::consts::PI / f64::powi(2.0, k as i32 - 1))
                .sum();
            expected *= (eps / 2.0).cos().powi(2);
        }
        assert!(
            (got - expected).abs() < 1e-12,
            "j = {j}: {got} vs {expected}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn aqft_on_basis_states_preserves_norm(n in 1usize..=7, m in 1usize..=7, j in any::<u64>()) {
        prop_assume!(m <= n);
        let (c, _) = build_aqft(&AqftConfig::with_cutoff(n, m)).unwrap();
        let out = run_basis(&c, (j % (1 << n)) as usize).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aqft_with_full_cutoff_is_qft(n in 1usize..=7) {
        let (a, _) = build_aqft(&AqftConfig::with_cutoff(n, n)).unwrap();
        let (q, _) = build_qft(n).unwrap();
        prop_assert!(phase_free_distance(&unitary_of(&a).unwrap(), &unitary_of(&q).unwrap()) < 1e-12);
    }

    #[test]
    fn omitted_rotations_bound_the_error(n in 2usize..=6, m in 1usize..=6) {
        prop_assume!(m < n);
        let (a, _) = build_aqft(&AqftConfig::with_cutoff(n, m)).unwrap();
        let dft = dft_matrix(n);
        // each dropped CP(θ) contributes at most |1 - e^{iθ}| ≤ θ in operator norm
        let bound = omitted_angle_sum(n, m);
        let state = Statevector::basis(n, (1 << n) - 1).unwrap();
        let got = qkit_core::sim::run(&a, &state).unwrap();
        let col = (1 << n) - 1;
        let err: f64 = (0..1 << n)
            .map(|z| (got.amplitudes()[z] - dft.get(z, col)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        prop_assert!(err <= bound + 1e-12, "err {} bound {}", err, bound);
    }
}
