//! Dephased graph states in closed form, their exact purity and entropy,
//! and seeded finite-shot sampling of generator expectations.
//!
//! Under `dρ/dt = (γ/2) Σ_i (Z_i ρ Z_i - ρ)` a Pauli operator with `X` or `Y`
//! on `m` qubits decays as `e^{-m γt}`. The stabilizer element `S_i` has
//! `X`/`Y` exactly on the qubits where `i` has a one, so the dephased
//! coefficients are `c[i] = e^{-γt · popcount(i)}` and the state factorizes
//! in the stabilizer eigenbasis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimator::{binary_entropy, MeasurementRecord};
use crate::graph::GraphSpec;
use crate::stabdiag::CoeffVector;
use crate::stabilizer::{check_dense_cap, DEFAULT_DENSE_CAP};

/// Identifies the sampling stream; bump when the sampling procedure changes.
pub const RNG_ALGORITHM: &str = "chacha8(seed_from_u64)/uniform-f64-threshold/v1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub gamma: Option<f64>,
    pub t: Option<f64>,
    pub gamma_t: f64,
}

impl NoiseParams {
    pub fn from_gamma_t(gamma_t: f64) -> Result<Self> {
        if gamma_t.is_nan() || gamma_t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma*t = {gamma_t} must be >= 0"
            )));
        }
        Ok(Self {
            gamma: None,
            t: None,
            gamma_t,
        })
    }

    pub fn from_rate_and_time(gamma: f64, t: f64) -> Result<Self> {
        let mut p = Self::from_gamma_t(gamma * t)?;
        p.gamma = Some(gamma);
        p.t = Some(t);
        Ok(p)
    }

    /// Per-generator decay factor `e^{-γt}`.
    pub fn decay(&self) -> f64 {
        (-self.gamma_t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotPlan {
    pub shots_per_generator: u64,
    pub seed: u64,
}

impl ShotPlan {
    pub fn new(shots_per_generator: u64, seed: u64) -> Result<Self> {
        if shots_per_generator == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok(Self {
            shots_per_generator,
            seed,
        })
    }
}

/// `c[i] = e^{-γt · popcount(i)}`.
pub fn dephased_coefficients(graph: &GraphSpec, noise: &NoiseParams) -> Result<CoeffVector> {
    let n = graph.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    let decay = noise.decay();
    let powers: Vec<f64> = (0..=n as i32).map(|m| decay.powi(m)).collect();
    CoeffVector::new(
        (0usize..1 << n)
            .map(|i| powers[i.count_ones() as usize])
            .collect(),
    )
}

/// Exact generator expectations `a_k = e^{-γt}`.
pub fn dephased_expectations(graph: &GraphSpec, noise: &NoiseParams) -> Vec<f64> {
    vec![noise.decay(); graph.n()]
}

/// `((1 + e^{-2γt}) / 2)^n`.
pub fn exact_purity_dephased(graph: &GraphSpec, noise: &NoiseParams) -> f64 {
    (0.5 * (1.0 + (-2.0 * noise.gamma_t).exp())).powi(graph.n() as i32)
}

/// `n · h((1 + e^{-γt}) / 2)` in nats.
pub fn exact_entropy_dephased(graph: &GraphSpec, noise: &NoiseParams) -> f64 {
    graph.n() as f64 * binary_entropy(0.5 * (1.0 + noise.decay()))
}

/// Draws `shots` outcomes `±1` per generator with `P(+1) = (1 + a_k) / 2`,
/// returning the sample means and plug-in standard errors
/// `sqrt((1 - â²) / shots)`. One stream per call, generators in order.
pub fn sample_measurements(a: &[f64], plan: &ShotPlan) -> Result<MeasurementRecord> {
    if plan.shots_per_generator == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if let Some((k, v)) = a
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_nan() || v.abs() > 1.0)
    {
        return Err(Error::InvalidRecord(format!(
            "a[{k}] = {v} is outside [-1, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let shots = plan.shots_per_generator;
    let mut means = Vec::with_capacity(a.len());
    let mut errors = Vec::with_capacity(a.len());
    for &ak in a {
        let p_plus = 0.5 * (1.0 + ak);
        let plus = (0..shots).filter(|_| rng.random::<f64>() < p_plus).count() as u64;
        let mean = (2 * plus) as f64 / shots as f64 - 1.0;
        means.push(mean);
        errors.push(((1.0 - mean * mean).max(0.0) / shots as f64).sqrt());
    }
    MeasurementRecord::new(means, errors)?.with_shots(vec![shots; a.len()])
}

/// [`sample_measurements`] on the single-bit coefficients of `c`.
pub fn sample_from_coefficients(c: &CoeffVector, plan: &ShotPlan) -> Result<MeasurementRecord> {
    sample_measurements(&c.generator_expectations(), plan)
}
