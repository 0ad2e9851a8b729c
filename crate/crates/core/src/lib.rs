//! Purity and entropy estimation for graph states from stabilizer-generator
//! measurements.
//!
//! Given the measured expectations `a_k = tr(ρ K_k)` of the generators
//! `K_k = X_k Z_{N(k)}` of a graph state, this crate computes the least purity
//! compatible with the data in closed form, a KKT certificate that checks the
//! closed form at runtime, error-bar bounds, and two entropy values: the
//! entropy of the least-purity state (a lower bound) and the exact maximal
//! entropy. The [`oracle`] and [`simulator`] modules provide the independent
//! numeric solvers and noisy-state generators used to validate all of it.
//!
//! # Conventions
//!
//! * Qubit `q` is bit `q` of a computational-basis index (qubit 0 is the least
//!   significant bit). Dense matrices are therefore `P_{n-1} ⊗ … ⊗ P_0`.
//! * Bit `k` of a stabilizer index selects generator `K_k` (0-based), so
//!   index `0b011` is `K_0 K_1`.
//! * Pauli phases use `Y = iXZ`, i.e. `XZ = -iY`.
//! * Entropies use the natural logarithm.

pub mod error;
pub mod estimator;
pub mod graph;
pub mod oracle;
pub mod pauli;
pub mod simulator;
pub mod stabdiag;
pub mod stabilizer;

pub use error::{Error, Result};
pub use estimator::{
    entropy_lower_bound, entropy_max, estimate_entropy, kkt_certificate, min_purity,
    min_purity_coefficients, normalize_signs, purity_error_bars, EntropyEstimate, KktCertificate,
    MeasurementRecord, PurityEstimate,
};
pub use graph::GraphSpec;
pub use pauli::{PauliString, Phase};
pub use simulator::{NoiseParams, ShotPlan};
pub use stabdiag::{CoeffVector, Spectrum};
pub use stabilizer::{DenseMatrix, DEFAULT_DENSE_CAP};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
