#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabpurity::{DenseMatrix, GraphSpec, MeasurementRecord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Graph on `n` vertices with each possible edge present when the
/// corresponding bit of `mask` is set.
pub fn graph_from_mask(n: usize, mask: u64) -> GraphSpec {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> (bit % 64) & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    GraphSpec::new(n, edges).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> GraphSpec {
    graph_from_mask(n, rng.random())
}

/// Random probability vector of length `2^n`.
pub fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..1 << n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

/// Random full-rank density matrix `G G† / tr(G G†)`.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let dim = 1 << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Expectations with `a_k ∈ [0, 1]` meeting `λ_0 >= 0` and the pair
/// condition `2 λ_0 >= d_1 + d_2`, by rejection.
pub fn random_certified_record(rng: &mut ChaCha8Rng, n: usize) -> MeasurementRecord {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let r = MeasurementRecord::exact(a).unwrap();
        if let Ok(est) = stabpurity::min_purity(&r) {
            if est.certified_optimal {
                return r;
            }
        }
    }
}

/// Expectations in `[0, 1]` with `λ_0 >= 0`, by rejection.
pub fn random_feasible_record(rng: &mut ChaCha8Rng, n: usize) -> MeasurementRecord {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let r = MeasurementRecord::exact(a).unwrap();
        if stabpurity::estimator::is_feasible(&r) {
            return r;
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}
