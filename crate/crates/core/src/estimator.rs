//! Closed-form least-purity state compatible with generator expectations,
//! its KKT certificate, error bars and entropy bounds.
//!
//! For sign-normalized expectations `a_k ∈ [0, 1]` the candidate state has
//! coefficients `c[i] = Σ_k i_k a_k - popcount(i) + 1`, whose spectrum is
//! `λ_0 = (Σ a_k - n + 2) / 2`, `λ_{e_k} = (1 - a_k) / 2` on the single-bit
//! indices and zero elsewhere. Everything except the certificate is `O(n)`.
//!
//! The candidate is a valid state iff `λ_0 >= 0`. It is the least-purity
//! state iff additionally `2 λ_0 >= d_1 + d_2`, where `d_1 >= d_2` are the
//! two largest deficits `1 - a_k` (the pair multipliers `μ` are then
//! nonnegative). When that second condition fails the closed-form value is
//! still the purity of a compatible state but overestimates the minimum;
//! [`PurityEstimate::certified_optimal`] reports which case applies.

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::stabdiag::{eigenvalues, walsh_hadamard_in_place, xlogx_neg, CoeffVector};
use crate::stabilizer::{check_dense_cap, DEFAULT_DENSE_CAP};

/// Slack allowed on `λ_0 >= 0` for floating-point round-off.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Bound on each KKT residual for a certificate to count as valid.
pub const KKT_TOLERANCE: f64 = 1e-9;

/// Generator expectations with uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    a: Vec<f64>,
    delta_a: Vec<f64>,
    shots: Option<Vec<u64>>,
}

impl MeasurementRecord {
    pub fn new(a: Vec<f64>, delta_a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidRecord(
                "at least one generator is required".into(),
            ));
        }
        if delta_a.len() != a.len() {
            return Err(Error::InvalidRecord(format!(
                "delta_a has {} entries, a has {}",
                delta_a.len(),
                a.len()
            )));
        }
        for (k, &v) in a.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::InvalidRecord(format!(
                    "a[{k}] = {v} is outside [-1, 1]"
                )));
            }
        }
        for (k, &v) in delta_a.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidRecord(format!(
                    "delta_a[{k}] = {v} is negative"
                )));
            }
        }
        Ok(Self {
            a,
            delta_a,
            shots: None,
        })
    }

    /// Record with zero uncertainties.
    pub fn exact(a: Vec<f64>) -> Result<Self> {
        let zeros = vec![0.0; a.len()];
        Self::new(a, zeros)
    }

    pub fn with_shots(mut self, shots: Vec<u64>) -> Result<Self> {
        if shots.len() != self.a.len() {
            return Err(Error::InvalidRecord(format!(
                "shots has {} entries, a has {}",
                shots.len(),
                self.a.len()
            )));
        }
        if let Some(k) = shots.iter().position(|&s| s == 0) {
            return Err(Error::InvalidRecord(format!("shots[{k}] must be positive")));
        }
        self.shots = Some(shots);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn delta_a(&self) -> &[f64] {
        &self.delta_a
    }

    pub fn shots(&self) -> Option<&[u64]> {
        self.shots.as_deref()
    }

    pub fn is_normalized(&self) -> bool {
        self.a.iter().all(|&v| v >= 0.0)
    }

    fn abs_a(&self) -> Vec<f64> {
        self.a.iter().map(|v| v.abs()).collect()
    }
}

/// Replaces `K_k` by `-K_k` wherever `a_k < 0`. Returns the normalized
/// record and the flipped generators.
pub fn normalize_signs(record: &MeasurementRecord) -> (MeasurementRecord, Vec<bool>) {
    let flips: Vec<bool> = record.a.iter().map(|&v| v < 0.0).collect();
    let normalized = MeasurementRecord {
        a: record.abs_a(),
        ..record.clone()
    };
    (normalized, flips)
}

/// Formats sign flips as a bit string, generator 0 first.
pub fn sign_string(flips: &[bool]) -> String {
    flips.iter().map(|&f| if f { '1' } else { '0' }).collect()
}

/// `O(n)` description of the candidate spectrum: `λ_0`, the single-bit
/// eigenvalues and `2^n - n - 1` zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub lambda0: f64,
    pub singles: Vec<f64>,
}

impl SpectrumSummary {
    pub fn n(&self) -> usize {
        self.singles.len()
    }

    /// Number of zero eigenvalues, if it fits in a `u128`.
    pub fn zero_multiplicity(&self) -> Option<u128> {
        let n = self.n() as u32;
        1u128.checked_shl(n).map(|full| full - u128::from(n) - 1)
    }

    pub fn purity(&self) -> f64 {
        self.lambda0 * self.lambda0 + self.singles.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn entropy(&self) -> f64 {
        xlogx_neg(self.lambda0) + self.singles.iter().map(|&v| xlogx_neg(v)).sum::<f64>()
    }

    /// Smallest pair multiplier `2 λ_0 - d_k - d_l` (`+∞` for one qubit).
    pub fn optimality_margin(&self) -> f64 {
        let mut top = [0.0f64; 2];
        for &s in &self.singles {
            let d = 2.0 * s;
            if d > top[0] {
                top = [d, top[0]];
            } else if d > top[1] {
                top[1] = d;
            }
        }
        if self.n() < 2 {
            f64::INFINITY
        } else {
            2.0 * self.lambda0 - top[0] - top[1]
        }
    }
}

fn closed_form_from_abs(a: &[f64]) -> Result<SpectrumSummary> {
    let n = a.len() as f64;
    let sum_a: f64 = a.iter().sum();
    let lambda0 = 0.5 * (sum_a - n + 2.0);
    if lambda0 < -FEASIBILITY_TOLERANCE {
        return Err(Error::InfeasibleRecord {
            sum_a,
            threshold: n - 2.0,
            lambda0,
        });
    }
    Ok(SpectrumSummary {
        lambda0: lambda0.max(0.0),
        singles: a.iter().map(|&v| 0.5 * (1.0 - v)).collect(),
    })
}

/// Candidate spectrum for `|a|`.
pub fn closed_form_spectrum(record: &MeasurementRecord) -> Result<SpectrumSummary> {
    closed_form_from_abs(&record.abs_a())
}

/// True iff `λ_0 >= 0`, i.e. `Σ|a_k| >= n - 2`.
pub fn is_feasible(record: &MeasurementRecord) -> bool {
    closed_form_spectrum(record).is_ok()
}

/// Neighboring pairs `(u, v)` of `graph` with `|a_u| + |a_v| < 1`.
pub fn neighbor_pair_violations(
    record: &MeasurementRecord,
    graph: &GraphSpec,
) -> Result<Vec<(usize, usize)>> {
    if graph.n() != record.n() {
        return Err(Error::InvalidRecord(format!(
            "record has {} generators, graph has {} vertices",
            record.n(),
            graph.n()
        )));
    }
    Ok(graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| record.a[u].abs() + record.a[v].abs() < 1.0)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityEstimate {
    pub p_min: f64,
    /// Closed form at `clip(|a| - Δa)`; `None` if that record is infeasible.
    pub p_lower: Option<f64>,
    /// Closed form at `clip(|a| + Δa)`.
    pub p_upper: Option<f64>,
    pub spectrum: SpectrumSummary,
    /// Both shifted records were feasible.
    pub bounds_feasible: bool,
    /// The KKT pair multipliers are nonnegative, so `p_min` is the true
    /// minimum rather than the purity of one compatible state.
    pub certified_optimal: bool,
}

impl PurityEstimate {
    pub fn lambda0(&self) -> f64 {
        self.spectrum.lambda0
    }
}

pub fn min_purity(record: &MeasurementRecord) -> Result<PurityEstimate> {
    let spectrum = closed_form_spectrum(record)?;
    let (lower, upper) = purity_error_bars(record);
    let certified_optimal = spectrum.optimality_margin() >= -FEASIBILITY_TOLERANCE;
    Ok(PurityEstimate {
        p_min: spectrum.purity(),
        p_lower: lower.as_ref().ok().copied(),
        p_upper: upper.as_ref().ok().copied(),
        bounds_feasible: lower.is_ok() && upper.is_ok(),
        certified_optimal,
        spectrum,
    })
}

fn shifted(record: &MeasurementRecord, sign: f64) -> Vec<f64> {
    record
        .a
        .iter()
        .zip(&record.delta_a)
        .map(|(a, d)| (a.abs() + sign * d).clamp(0.0, 1.0))
        .collect()
}

/// `(p_lower, p_upper)`: the closed form evaluated at `|a| - Δa` and
/// `|a| + Δa`, each clipped to `[0, 1]`. Each bound fails independently
/// with [`Error::InfeasibleRecord`].
pub fn purity_error_bars(record: &MeasurementRecord) -> (Result<f64>, Result<f64>) {
    let eval = |a: Vec<f64>| closed_form_from_abs(&a).map(|s| s.purity());
    (eval(shifted(record, -1.0)), eval(shifted(record, 1.0)))
}

/// Full `2^n` candidate coefficients. Requires a sign-normalized record and
/// `n` within the dense cap.
pub fn min_purity_coefficients(record: &MeasurementRecord) -> Result<CoeffVector> {
    let n = record.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    if !record.is_normalized() {
        return Err(Error::InvalidRecord(
            "coefficients need a sign-normalized record".into(),
        ));
    }
    closed_form_from_abs(&record.a)?;
    let mut c = vec![0.0; 1 << n];
    c[0] = 1.0;
    for i in 1usize..1 << n {
        let low = i.trailing_zeros() as usize;
        c[i] = if i.is_power_of_two() {
            record.a[low]
        } else {
            c[i & (i - 1)] + record.a[low] - 1.0
        };
    }
    CoeffVector::new(c)
}

/// Lagrange multipliers for the candidate and the residuals of every KKT
/// condition.
#[derive(Debug, Clone, PartialEq)]
pub struct KktCertificate {
    /// Inequality multipliers, one per eigenvalue.
    pub mu: Vec<f64>,
    /// Equality multipliers: `nu[0]` for normalization, `nu[k + 1]` for
    /// generator `k`.
    pub nu: Vec<f64>,
    /// Candidate eigenvalues.
    pub lambda: Vec<f64>,
    pub stationarity_residual: f64,
    pub min_mu: f64,
    pub complementarity_residual: f64,
    pub min_lambda: f64,
}

impl KktCertificate {
    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }

    /// Checks primal feasibility, dual feasibility, complementarity and
    /// stationarity, reporting the first failure.
    pub fn verify(&self) -> Result<()> {
        let n = self.nu.len() - 1;
        let dim = self.mu.len();
        if let Some((index, &value)) = self
            .lambda
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -KKT_TOLERANCE)
        {
            return Err(Error::CertificateInvalid {
                condition: "primal feasibility (lambda >= 0)",
                index,
                value,
            });
        }
        if let Some((index, &value)) = self
            .mu
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -KKT_TOLERANCE)
        {
            return Err(Error::CertificateInvalid {
                condition: "dual feasibility (mu >= 0)",
                index,
                value,
            });
        }
        if let Some(index) = (0..dim).find(|&j| (self.mu[j] * self.lambda[j]).abs() > KKT_TOLERANCE)
        {
            return Err(Error::CertificateInvalid {
                condition: "complementary slackness (mu * lambda = 0)",
                index,
                value: self.mu[index] * self.lambda[index],
            });
        }
        let residuals = stationarity(&self.lambda, &self.mu, &self.nu, n);
        if let Some((index, &value)) = residuals
            .iter()
            .enumerate()
            .find(|(_, v)| v.abs() > KKT_TOLERANCE)
        {
            return Err(Error::CertificateInvalid {
                condition: "stationarity",
                index,
                value,
            });
        }
        Ok(())
    }
}

/// `(2/2^n) c - (1/2^n) A μ + ν` with `c = A λ` and `ν` padded by zeros
/// outside the constrained indices.
fn stationarity(lambda: &[f64], mu: &[f64], nu: &[f64], n: usize) -> Vec<f64> {
    let dim = lambda.len() as f64;
    let mut c = lambda.to_vec();
    walsh_hadamard_in_place(&mut c);
    let mut a_mu = mu.to_vec();
    walsh_hadamard_in_place(&mut a_mu);
    let mut r: Vec<f64> = c
        .iter()
        .zip(&a_mu)
        .map(|(ci, ami)| (2.0 * ci - ami) / dim)
        .collect();
    r[0] += nu[0];
    for k in 0..n {
        r[1 << k] += nu[k + 1];
    }
    r
}

/// Multipliers `ν_{e_l} = λ_{e_l} - λ_0`, `ν_0 = -2λ_0 - Σ_l ν_{e_l}` and
/// `μ = 2λ + Aν`, with residuals. Does not fail on an invalid certificate;
/// see [`kkt_certificate`].
pub fn build_kkt_certificate(record: &MeasurementRecord) -> Result<KktCertificate> {
    let n = record.n();
    let c = min_purity_coefficients(record)?;
    let lambda = eigenvalues(&c).into_vec();

    let mut nu = vec![0.0; n + 1];
    for k in 0..n {
        nu[k + 1] = lambda[1 << k] - lambda[0];
    }
    nu[0] = -2.0 * lambda[0] - nu[1..].iter().sum::<f64>();

    let mut mu = vec![0.0; lambda.len()];
    mu[0] = nu[0];
    for k in 0..n {
        mu[1 << k] = nu[k + 1];
    }
    walsh_hadamard_in_place(&mut mu);
    for (m, l) in mu.iter_mut().zip(&lambda) {
        *m += 2.0 * l;
    }

    let residuals = stationarity(&lambda, &mu, &nu, n);
    let fold_max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
    Ok(KktCertificate {
        stationarity_residual: fold_max(&mut residuals.iter().map(|v| v.abs())),
        min_mu: mu.iter().copied().fold(f64::INFINITY, f64::min),
        complementarity_residual: fold_max(&mut mu.iter().zip(&lambda).map(|(m, l)| (m * l).abs())),
        min_lambda: lambda.iter().copied().fold(f64::INFINITY, f64::min),
        mu,
        nu,
        lambda,
    })
}

/// Builds and verifies the certificate; [`Error::CertificateInvalid`] names
/// the failing condition and index.
pub fn kkt_certificate(record: &MeasurementRecord) -> Result<KktCertificate> {
    let cert = build_kkt_certificate(record)?;
    cert.verify()?;
    Ok(cert)
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> f64 {
    xlogx_neg(p) + xlogx_neg(1.0 - p)
}

/// Entropy of the least-purity candidate, a lower bound on the maximal
/// entropy compatible with the record.
pub fn entropy_lower_bound(record: &MeasurementRecord) -> Result<f64> {
    Ok(closed_form_spectrum(record)?.entropy())
}

/// Exact maximal entropy `Σ_k h((1 + |a_k|) / 2)`, attained by the product
/// spectrum `λ_j = Π_k (1 + (-1)^{j_k} a_k) / 2`.
pub fn entropy_max(record: &MeasurementRecord) -> f64 {
    record
        .a
        .iter()
        .map(|a| binary_entropy(0.5 * (1.0 + a.abs())))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    /// `None` when the record is infeasible for the closed form.
    pub s_lower: Option<f64>,
    pub s_max: f64,
    pub feasible: bool,
}

pub fn estimate_entropy(record: &MeasurementRecord) -> EntropyEstimate {
    let s_lower = entropy_lower_bound(record).ok();
    EntropyEstimate {
        feasible: s_lower.is_some(),
        s_lower,
        s_max: entropy_max(record),
    }
}
