use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid measurement record: {0}")]
    InvalidRecord(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n} qubits exceeds the dense realization cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("density matrix has trace {trace}, expected 1")]
    NonUnitTrace { trace: f64 },

    #[error("spectrum entry {index} is {value}, below the clamping floor")]
    NonPhysicalSpectrum { index: usize, value: f64 },

    /// The closed-form candidate has a negative largest eigenvalue,
    /// i.e. `sum(a) < n - 2`.
    #[error("infeasible record: sum(a) = {sum_a} < n - 2 = {threshold} (lambda0 = {lambda0})")]
    InfeasibleRecord {
        sum_a: f64,
        threshold: f64,
        lambda0: f64,
    },

    #[error("KKT certificate invalid: {condition} at index {index} (value {value:e})")]
    CertificateInvalid {
        condition: &'static str,
        index: usize,
        value: f64,
    },

    #[error("constraint set is empty (affine residual stalled at {residual:e})")]
    Infeasible { residual: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}
