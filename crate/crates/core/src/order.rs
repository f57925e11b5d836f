//! Quantum order finding.
//!
//! Register layout: qubits `[0, t)` hold the argument register and
//! `[t, t+n)` the function register, `n = ⌈log₂ N⌉`. The circuit prepares the
//! function register in `|1⟩`, puts the argument register in uniform
//! superposition, applies `x^a mod N` as `t` controlled modular
//! multiplications by `x^{2^j} mod N`, Fourier-transforms the argument
//! register and measures it. Outcomes concentrate near `z = dT/r`, and the
//! continued-fraction expansion of `z/T` recovers `r`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{gcd, Circuit, CircuitError, Gate, GateKind};
use crate::fourier::{self, AqftConfig, FourierBuildReport, FourierError};
use crate::sim::{self, ShotHistogram, SimError, MAX_STATEVECTOR_QUBITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("modulus must be at least 3, got {0}")]
    InvalidModulus(u64),
    #[error("base {base} must lie in [2, {}]", modulus - 1)]
    InvalidBase { base: u64, modulus: u64 },
    #[error("gcd({base}, {modulus}) = {gcd}: base is not coprime to the modulus")]
    NotCoprime { base: u64, modulus: u64, gcd: u64 },
    #[error("argument register width {t} is smaller than function register width {n}")]
    ArgumentTooNarrow { t: usize, n: usize },
    #[error("{qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("shot count must be positive")]
    ZeroShots,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Which transform is applied to the argument register before readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    #[default]
    Forward,
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderFindingConfig {
    /// N, the modulus.
    pub modulus: u64,
    /// x, coprime to N.
    pub base: u64,
    /// t, the argument register width.
    pub arg_qubits: usize,
    pub use_aqft: bool,
    /// Rotation cutoff when `use_aqft` is set; `None` means `⌈log₂ t⌉`.
    pub cutoff: Option<usize>,
    pub transform: Transform,
    pub shots: u64,
    pub seed: u64,
    pub max_qubits: usize,
}

impl OrderFindingConfig {
    /// Defaults: `t = 2n+1`, full transform, 1024 shots, seed 0.
    pub fn new(modulus: u64, base: u64) -> OrderFindingConfig {
        let n = function_width(modulus.max(2));
        OrderFindingConfig {
            modulus,
            base,
            arg_qubits: 2 * n + 1,
            use_aqft: false,
            cutoff: None,
            transform: Transform::Forward,
            shots: 1024,
            seed: 0,
            max_qubits: MAX_STATEVECTOR_QUBITS,
        }
    }

    pub fn function_qubits(&self) -> usize {
        function_width(self.modulus)
    }

    pub fn total_qubits(&self) -> usize {
        self.arg_qubits + self.function_qubits()
    }

    /// T = 2^t.
    pub fn period_space(&self) -> u64 {
        1u64 << self.arg_qubits
    }

    pub fn transform_config(&self) -> AqftConfig {
        let t = self.arg_qubits;
        if self.use_aqft {
            AqftConfig::with_cutoff(t, self.cutoff.unwrap_or_else(|| fourier::default_cutoff(t)))
        } else {
            AqftConfig::full(t)
        }
    }

    pub fn validate(&self) -> Result<(), OrderError> {
        if self.modulus < 3 {
            return Err(OrderError::InvalidModulus(self.modulus));
        }
        if self.base < 2 || self.base >= self.modulus {
            return Err(OrderError::InvalidBase {
                base: self.base,
                modulus: self.modulus,
            });
        }
        let g = gcd(self.base, self.modulus);
        if g != 1 {
            return Err(OrderError::NotCoprime {
                base: self.base,
                modulus: self.modulus,
                gcd: g,
            });
        }
        let n = self.function_qubits();
        if self.arg_qubits < n {
            return Err(OrderError::ArgumentTooNarrow {
                t: self.arg_qubits,
                n,
            });
        }
        let limit = self.max_qubits;
        if self.total_qubits() > limit || self.arg_qubits >= 63 {
            return Err(OrderError::TooManyQubits {
                qubits: self.total_qubits(),
                limit,
            });
        }
        if self.shots == 0 {
            return Err(OrderError::ZeroShots);
        }
        Ok(())
    }
}

/// `⌈log₂ N⌉`.
pub fn function_width(modulus: u64) -> usize {
    (u64::BITS - (modulus - 1).leading_zeros()) as usize
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest `r ≥ 1` with `x^r ≡ 1 (mod N)`, by direct iteration.
pub fn classical_order(base: u64, modulus: u64) -> Result<u64, OrderError> {
    if modulus < 2 {
        return Err(OrderError::InvalidModulus(modulus));
    }
    let g = gcd(base, modulus);
    if g != 1 {
        return Err(OrderError::NotCoprime {
            base,
            modulus,
            gcd: g,
        });
    }
    let x = base % modulus;
    let mut acc = x;
    let mut r = 1;
    while acc != 1 % modulus {
        acc = (acc as u128 * x as u128 % modulus as u128) as u64;
        r += 1;
    }
    Ok(r)
}

/// Steps up to and including modular exponentiation: no transform, no readout.
pub fn build_modexp_circuit(config: &OrderFindingConfig) -> Result<Circuit, OrderError> {
    config.validate()?;
    let t = config.arg_qubits;
    let n = config.function_qubits();
    let mut c = Circuit::named(
        t + n,
        format!("order_N{}_x{}_t{}", config.modulus, config.base, t),
    );
    c.push(Gate::x(t))?;
    for q in 0..t {
        c.push(Gate::h(q))?;
    }
    let targets: Vec<usize> = (t..t + n).collect();
    let mut multiplier = config.base % config.modulus;
    for j in 0..t {
        c.push(Gate::cmodmul(multiplier, config.modulus, j, &targets)?)?;
        multiplier = (multiplier as u128 * multiplier as u128 % config.modulus as u128) as u64;
    }
    Ok(c)
}

/// The full order-finding circuit and the report of its Fourier stage.
pub fn build_order_circuit(
    config: &OrderFindingConfig,
) -> Result<(Circuit, FourierBuildReport), OrderError> {
    let mut c = build_modexp_circuit(config)?;
    let (transform, report) = fourier::build_aqft(&config.transform_config())?;
    let transform = match config.transform {
        Transform::Forward => transform,
        Transform::Inverse => transform.inverse()?,
    };
    for g in transform.gates() {
        c.push(g.clone())?;
    }
    for q in 0..config.arg_qubits {
        c.push(Gate::measure(q))?;
    }
    Ok((c, report))
}

/// Exact outcome distribution of the argument register, indexed by `z`.
pub fn spectrum(config: &OrderFindingConfig) -> Result<Vec<(u64, f64)>, OrderError> {
    let (c, _) = build_order_circuit(config)?;
    let state = sim::run_basis_limited(&c, 0, config.max_qubits)?;
    let arg: Vec<usize> = (0..config.arg_qubits).collect();
    Ok(state
        .marginal_probabilities(&arg)
        .into_iter()
        .enumerate()
        .map(|(z, p)| (z as u64, p))
        .collect())
}

/// Convergents `d/r` of `z/T` with `r < N`, by increasing denominator.
pub fn continued_fractions(z: u64, period_space: u64, modulus: u64) -> Vec<(u64, u64)> {
    let (mut num, mut den) = (z as u128, period_space as u128);
    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    let (mut h_prev, mut h_prev2) = (1u128, 0u128);
    let (mut k_prev, mut k_prev2) = (0u128, 1u128);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        let h = a * h_prev + h_prev2;
        let k = a * k_prev + k_prev2;
        if k >= modulus as u128 {
            break;
        }
        out.push((h as u64, k as u64));
        (h_prev2, h_prev) = (h_prev, h);
        (k_prev2, k_prev) = (k_prev, k);
        (num, den) = (den, num - a * den);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateFraction {
    pub z: u64,
    pub d: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderResult {
    /// Recovered order, `None` when no shot verified.
    pub order: Option<u64>,
    pub candidate_fractions: Vec<CandidateFraction>,
    pub histogram: ShotHistogram,
    pub success_fraction: f64,
    pub transform_report: FourierBuildReport,
    pub gate_counts: BTreeMap<GateKind, usize>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Shrinks a verified exponent to the true order by removing prime factors.
fn reduce_to_order(base: u64, mut r: u64, modulus: u64) -> u64 {
    for p in prime_factors(r) {
        while r % p == 0 && pow_mod(base, r / p, modulus) == 1 {
            r /= p;
        }
    }
    r
}

/// Samples the order-finding circuit and post-processes every outcome.
///
/// Each observed `z` contributes the denominators of its convergents. The
/// order is the smallest denominator satisfying `x^r ≡ 1`; if none does, the
/// least common multiples of pairs of distinct denominators are tried. A shot
/// counts as a success when its denominators contain the order, or a proper
/// divisor of it that completes to the order by lcm with another observed
/// denominator.
pub fn find_order(config: &OrderFindingConfig) -> Result<OrderResult, OrderError> {
    let (circuit, transform_report) = build_order_circuit(config)?;
    let state = sim::run_basis_limited(&circuit, 0, config.max_qubits)?;
    let histogram = sample_state(&circuit, &state, config)?;
    let (x, n_mod) = (config.base, config.modulus);
    let t_space = config.period_space();

    let mut candidate_fractions = Vec::new();
    let mut per_outcome: Vec<(u64, u64, BTreeSet<u64>)> = Vec::new();
    let mut all_denominators = BTreeSet::new();
    for (&z, &count) in histogram.counts() {
        let mut dens = BTreeSet::new();
        for (d, r) in continued_fractions(z, t_space, n_mod) {
            candidate_fractions.push(CandidateFraction { z, d, r });
            if r > 1 {
                dens.insert(r);
            }
        }
        all_denominators.extend(dens.iter().copied());
        per_outcome.push((z, count, dens));
    }

    let verifies = |r: u64| pow_mod(x, r, n_mod) == 1;
    let mut found = all_denominators.iter().copied().find(|&r| verifies(r));
    if found.is_none() {
        let dens: Vec<u64> = all_denominators.iter().copied().collect();
        found = dens
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| dens[i + 1..].iter().map(move |&b| lcm(a, b)))
            .filter(|&l| l < n_mod && verifies(l))
            .min();
    }
    let order = found.map(|r| reduce_to_order(x, r, n_mod));

    let success_fraction = match order {
        None => 0.0,
        Some(r) => {
            let hits: u64 = per_outcome
                .iter()
                .filter(|(_, _, dens)| {
                    dens.iter().any(|&q| {
                        q == r || (r % q == 0 && all_denominators.iter().any(|&o| lcm(q, o) == r))
                    })
                })
                .map(|(_, count, _)| count)
                .sum();
            hits as f64 / histogram.shots() as f64
        }
    };

    Ok(OrderResult {
        order,
        candidate_fractions,
        histogram,
        success_fraction,
        transform_report,
        gate_counts: circuit.gate_counts(),
    })
}

fn sample_state(
    circuit: &Circuit,
    state: &sim::Statevector,
    config: &OrderFindingConfig,
) -> Result<ShotHistogram, OrderError> {
    Ok(sim::sample_from_state(
        state,
        &circuit.measured_qubits(),
        config.shots,
        config.seed,
    )?)
}
