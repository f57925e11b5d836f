#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qkit_core::sim::Unitary;
use qkit_core::{Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random unitary circuit over every IR gate kind except CMODMUL.
pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    while c.len() < len {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n);
        let mut t = rng.random_range(0..n);
        let theta = rng.random_range(-PI..PI);
        let two = n >= 2 && {
            while b == a {
                b = rng.random_range(0..n);
            }
            true
        };
        let three = n >= 3 && {
            while t == a || t == b {
                t = rng.random_range(0..n);
            }
            true
        };
        let g = match rng.random_range(0..20) {
            0 => Gate::h(a),
            1 => Gate::x(a),
            2 => Gate::y(a),
            3 => Gate::z(a),
            4 => Gate::s(a),
            5 => Gate::sdg(a),
            6 => Gate::t(a),
            7 => Gate::tdg(a),
            8 => Gate::sx(a),
            9 => Gate::sxdg(a),
            10 => Gate::rz(theta, a),
            11 => Gate::p(theta, a),
            12 | 13 if two => Gate::cx(a, b),
            14 if two => Gate::cz(a, b),
            15 if two => Gate::cp(theta, a, b),
            16 | 17 if two => Gate::swap(a, b),
            18 if three => Gate::ccx(a, b, t),
            19 if rng.random_range(0..4) == 0 => Gate::barrier(0..n),
            _ => continue,
        };
        c.push(g).unwrap();
    }
    c
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of the wire permutation moving the content of wire `p` to
/// `sigma[p]`, applied after `u`.
pub fn permute_after(u: &Unitary, sigma: &[usize]) -> Unitary {
    let source_row = |row: usize| {
        let mut r = 0;
        for (p, &s) in sigma.iter().enumerate() {
            r |= ((row >> s) & 1) << p;
        }
        r
    };
    Unitary::from_fn(u.dim(), |row, col| u.get(source_row(row), col))
}

/// Largest entry deviation after removing the global phase picked from the
/// largest-magnitude entry of `a`.
pub fn phase_free_distance(a: &Unitary, b: &Unitary) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let mut best = (0, 0);
    let mut mag = 0.0;
    for r in 0..a.dim() {
        for c in 0..a.dim() {
            if a.get(r, c).norm() > mag {
                mag = a.get(r, c).norm();
                best = (r, c);
            }
        }
    }
    let ratio = b.get(best.0, best.1) / a.get(best.0, best.1);
    let phase = ratio / ratio.norm();
    let mut worst: f64 = 0.0;
    for r in 0..a.dim() {
        for c in 0..a.dim() {
            worst = worst.max((a.get(r, c) * phase - b.get(r, c)).norm());
        }
    }
    worst
}

/// `(1/√T) ω^{jz}` with `ω = e^{2πi/T}`; row `z`, column `j`.
pub fn dft_matrix(n: usize) -> Unitary {
    let t = 1usize << n;
    let scale = 1.0 / (t as f64).sqrt();
    Unitary::from_fn(t, |z, j| {
        let angle = 2.0 * PI * ((j * z) % t) as f64 / t as f64;
        Complex64::from_polar(scale, angle)
    })
}

/// Smallest `r ≥ 1` with `x^r ≡ 1 (mod n)`, by repeated multiplication.
pub fn brute_order(x: u64, n: u64) -> u64 {
    let mut acc = x % n;
    let mut r = 1;
    while acc != 1 {
        acc = acc * x % n;
        r += 1;
        assert!(r <= n, "x not a unit");
    }
    r
}
