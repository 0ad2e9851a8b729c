//! Brute-force verifiers for the closed forms: a quadratic program for the
//! least purity, a maximum-entropy solve, and a dense master-equation
//! integrator for dephasing.
//!
//! The optimization oracles work directly on the `2^n` eigenvalues `λ`.
//! The measurement constraints become `Σ_j λ_j = 1` and
//! `Σ_j (-1)^{j_k} λ_j = a_k`, and positivity is the nonnegative orthant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimator::MeasurementRecord;
use crate::graph::GraphSpec;
use crate::stabdiag::xlogx_neg;
use crate::stabilizer::{check_dense_cap, graph_state_projector, DenseMatrix, DEFAULT_DENSE_CAP};

/// Largest generator count the optimization oracles accept.
pub const DEFAULT_ORACLE_CAP: usize = 8;

/// Minimum integration steps per unit of `γt`.
pub const MIN_STEPS_PER_GAMMA_T: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpOptions {
    /// Target KKT residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub cap: usize,
}

impl Default for QpOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 1_000_000,
            cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub lambda_star: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

/// The `n + 1` constraint rows (all-ones, then one parity row per
/// generator) are mutually orthogonal with squared norm `2^n`, so the
/// affine projection is a sum of independent row corrections.
struct ParityConstraints {
    targets: Vec<f64>,
    dim: usize,
}

impl ParityConstraints {
    fn new(a: &[f64]) -> Self {
        let mut targets = Vec::with_capacity(a.len() + 1);
        targets.push(1.0);
        targets.extend_from_slice(a);
        Self {
            targets,
            dim: 1 << a.len(),
        }
    }

    fn row_sign(row: usize, j: usize) -> f64 {
        if row == 0 || j >> (row - 1) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn violations(&self, v: &[f64]) -> Vec<f64> {
        self.targets
            .iter()
            .enumerate()
            .map(|(row, b)| {
                let dot: f64 = v
                    .iter()
                    .enumerate()
                    .map(|(j, x)| Self::row_sign(row, j) * x)
                    .sum();
                dot - b
            })
            .collect()
    }

    fn max_violation(&self, v: &[f64]) -> f64 {
        self.violations(v).iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    fn project(&self, v: &mut [f64]) {
        let scale = 1.0 / self.dim as f64;
        let viol = self.violations(v);
        for (j, x) in v.iter_mut().enumerate() {
            let corr: f64 = viol
                .iter()
                .enumerate()
                .map(|(row, r)| Self::row_sign(row, j) * r)
                .sum();
            *x -= corr * scale;
        }
    }
}

fn check_oracle_record(record: &MeasurementRecord, cap: usize) -> Result<()> {
    if record.n() > cap {
        return Err(Error::InvalidArgument(format!(
            "{} generators exceeds the oracle cap of {cap}",
            record.n()
        )));
    }
    Ok(())
}

pub fn qp_min_purity(record: &MeasurementRecord) -> Result<QpSolution> {
    qp_min_purity_with(record, &QpOptions::default())
}

/// Minimizes `Σ λ²` over the constraint set by Dykstra's alternating
/// projections started from the origin, i.e. computes the projection of
/// zero onto (affine set ∩ orthant).
///
/// Invariant: `x + p + q = 0` where `p` lies in the row space and `q <= 0`
/// is complementary to `x >= 0`, so `x` satisfies every KKT condition except
/// the equality constraints; the residual tracks those.
pub fn qp_min_purity_with(record: &MeasurementRecord, opts: &QpOptions) -> Result<QpSolution> {
    check_oracle_record(record, opts.cap)?;
    let constraints = ParityConstraints::new(record.a());
    let dim = constraints.dim;
    let mut x = vec![0.0; dim];
    let mut p = vec![0.0; dim];
    let mut q = vec![0.0; dim];
    let mut y = vec![0.0; dim];

    let kkt_residual = |x: &[f64], p: &[f64], q: &[f64]| {
        let mut r = constraints.max_violation(x);
        for j in 0..x.len() {
            r = r
                .max((x[j] + p[j] + q[j]).abs())
                .max(q[j].max(0.0))
                .max((q[j] * x[j]).abs());
        }
        r
    };

    let mut residual = f64::INFINITY;
    let mut midpoint_gap = None;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        for j in 0..dim {
            y[j] = x[j] + p[j];
        }
        constraints.project(&mut y);
        for j in 0..dim {
            p[j] += x[j] - y[j];
            let shifted = y[j] + q[j];
            x[j] = shifted.max(0.0);
            q[j] = shifted - x[j];
        }
        iterations += 1;
        if opts.max_iterations >= 1000 && iterations == opts.max_iterations / 2 {
            midpoint_gap = Some(constraints.max_violation(&x));
        }
        if iterations % 8 == 0 || iterations == opts.max_iterations {
            residual = kkt_residual(&x, &p, &q);
            if residual <= opts.tolerance {
                break;
            }
        }
    }

    let converged = residual <= opts.tolerance;
    if !converged {
        // With an empty intersection the affine gap stalls at the distance
        // between the two sets instead of shrinking.
        let primal = constraints.max_violation(&x);
        if let Some(mid) = midpoint_gap {
            if primal > 1e-6 && primal > 0.5 * mid {
                return Err(Error::Infeasible { residual: primal });
            }
        }
        return Err(Error::NotConverged {
            iterations,
            residual,
        });
    }
    Ok(QpSolution {
        objective: x.iter().map(|v| v * v).sum(),
        lambda_star: x,
        iterations,
        kkt_residual: residual,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntropySolution {
    pub lambda_star: Vec<f64>,
    pub entropy: f64,
    /// Natural parameters; `±∞` for generators pinned at `a_k = ±1`.
    pub theta: Vec<f64>,
    pub sweeps: usize,
    pub residual: f64,
}

/// Gibbs state `λ_j ∝ exp(Σ_k θ_k (-1)^{j_k})` over the full index set.
fn gibbs(theta: &[f64], dim: usize) -> Vec<f64> {
    let log_w: Vec<f64> = (0..dim)
        .map(|j| {
            theta
                .iter()
                .enumerate()
                .map(|(k, &t)| {
                    let s = if j >> k & 1 == 0 { 1.0 } else { -1.0 };
                    if t.is_infinite() {
                        if t.signum() == s {
                            0.0
                        } else {
                            f64::NEG_INFINITY
                        }
                    } else {
                        t * s
                    }
                })
                .sum()
        })
        .collect();
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|&l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

fn marginal(lambda: &[f64], k: usize) -> f64 {
    lambda
        .iter()
        .enumerate()
        .map(|(j, l)| if j >> k & 1 == 0 { *l } else { -l })
        .sum()
}

/// Maximizes `-Σ λ ln λ` under the measurement constraints.
///
/// The maximizer has Gibbs form; each `θ_k` is found by bisection on its own
/// constraint with the others held fixed, sweeping until all constraints
/// hold to `1e-13`.
pub fn max_entropy_numeric(record: &MeasurementRecord) -> Result<MaxEntropySolution> {
    check_oracle_record(record, DEFAULT_ORACLE_CAP)?;
    let n = record.n();
    let dim = 1usize << n;
    let a = record.a();
    let mut theta: Vec<f64> = a
        .iter()
        .map(|&ak| {
            if ak >= 1.0 {
                f64::INFINITY
            } else if ak <= -1.0 {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        })
        .collect();

    const TOL: f64 = 1e-13;
    const MAX_SWEEPS: usize = 100;
    let mut residual = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        for k in 0..n {
            if theta[k].is_infinite() {
                continue;
            }
            // marginal_k is increasing in θ_k
            let (mut lo, mut hi) = (-40.0, 40.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                theta[k] = mid;
                if marginal(&gibbs(&theta, dim), k) < a[k] {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            theta[k] = 0.5 * (lo + hi);
        }
        sweeps += 1;
        let lambda = gibbs(&theta, dim);
        residual = (0..n)
            .map(|k| (marginal(&lambda, k) - a[k]).abs())
            .fold(0.0, f64::max);
        if residual <= TOL {
            return Ok(MaxEntropySolution {
                entropy: lambda.iter().map(|&l| xlogx_neg(l)).sum(),
                lambda_star: lambda,
                theta,
                sweeps,
                residual,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: sweeps,
        residual,
    })
}

/// `(γ/2) Σ_i (Z_i ρ Z_i - ρ)`. `Z_i ρ Z_i` flips the sign of entries whose
/// row and column differ in bit `i`.
fn dephasing_rhs(rho: &DenseMatrix, n: usize, gamma: f64) -> DenseMatrix {
    let dim = rho.nrows();
    let mut out = DenseMatrix::zeros(dim, dim);
    for i in 0..n {
        for c in 0..dim {
            for r in 0..dim {
                let sign = if (r ^ c) >> i & 1 == 0 { 1.0 } else { -1.0 };
                let v = rho[(r, c)];
                out[(r, c)] += (v * sign - v) * (0.5 * gamma);
            }
        }
    }
    out
}

/// Integrates the dephasing master equation from the pure graph state with
/// classic RK4, calling `observer(step, ρ)` after each step (and once with
/// step 0 for the initial state).
pub fn master_equation_trajectory(
    graph: &GraphSpec,
    gamma: f64,
    t: f64,
    steps: usize,
    mut observer: impl FnMut(usize, &DenseMatrix),
) -> Result<DenseMatrix> {
    let n = graph.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    if !(gamma >= 0.0 && t >= 0.0 && gamma.is_finite() && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rate {gamma} and time {t} must be finite and nonnegative"
        )));
    }
    let gamma_t = gamma * t;
    if steps == 0 || (steps as f64) < MIN_STEPS_PER_GAMMA_T * gamma_t {
        return Err(Error::InvalidArgument(format!(
            "{steps} steps is below {MIN_STEPS_PER_GAMMA_T} per unit of gamma*t = {gamma_t}"
        )));
    }
    let h = t / steps as f64;
    let mut rho = graph_state_projector(graph)?;
    observer(0, &rho);
    for step in 1..=steps {
        let k1 = dephasing_rhs(&rho, n, gamma);
        let k2 = dephasing_rhs(&(&rho + &k1 * Complex64::new(h / 2.0, 0.0)), n, gamma);
        let k3 = dephasing_rhs(&(&rho + &k2 * Complex64::new(h / 2.0, 0.0)), n, gamma);
        let k4 = dephasing_rhs(&(&rho + &k3 * Complex64::new(h, 0.0)), n, gamma);
        let incr = (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
            * Complex64::new(h / 6.0, 0.0);
        rho += incr;
        rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        observer(step, &rho);
    }
    Ok(rho)
}

pub fn master_equation_evolve(
    graph: &GraphSpec,
    gamma: f64,
    t: f64,
    steps: usize,
) -> Result<DenseMatrix> {
    master_equation_trajectory(graph, gamma, t, steps, |_, _| {})
}

/// Step count meeting the accuracy guard for a given `γt`.
pub fn default_steps(gamma_t: f64) -> usize {
    ((MIN_STEPS_PER_GAMMA_T * gamma_t).ceil() as usize).max(1000)
}
