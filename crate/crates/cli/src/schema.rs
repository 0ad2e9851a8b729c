//! File formats and report types.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stabpurity::GraphSpec;

/// Measurement input/output file:
/// `{"n", "graph"?, "a", "delta_a", "shots"?, "meta"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    pub a: Vec<f64>,
    /// Missing means zero uncertainty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

/// Reference values written next to a simulated measurement file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub graph: GraphSpec,
    pub gamma_t: f64,
    pub a_exact: Vec<f64>,
    pub exact_purity: f64,
    pub exact_entropy: f64,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktSummary {
    pub valid: bool,
    pub stationarity_residual: f64,
    pub min_mu: f64,
    pub complementarity_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub tool_version: String,
    /// `sha256:<hex>` of the raw input bytes.
    pub input_digest: String,
    pub n: usize,
    /// Sign-normalized expectations.
    pub a: Vec<f64>,
    pub delta_a: Vec<f64>,
    /// Generators redefined as `-K_k`, generator 0 first.
    pub sign_flips: String,
    pub p_min: f64,
    pub p_lower: Option<f64>,
    pub p_upper: Option<f64>,
    pub lambda0: f64,
    pub s_lower: f64,
    pub s_max: f64,
    pub feasible: bool,
    pub bounds_feasible: bool,
    /// The closed-form `p_min` is the true minimum (KKT multipliers
    /// nonnegative). When false, `oracle_p_min` holds the numeric minimum
    /// for small `n`.
    pub certified_optimal: bool,
    pub oracle_p_min: Option<f64>,
    pub kkt: Option<KktSummary>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibleReport {
    pub error: String,
    pub input_digest: String,
    pub n: usize,
    pub sum_a: f64,
    pub threshold: f64,
    pub lambda0: f64,
    /// Still defined without feasibility.
    pub s_max: f64,
    /// Numeric least purity from the QP, for `n` up to the oracle cap.
    pub oracle_p_min: Option<f64>,
    pub hint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub exact_purity: f64,
    pub estimated_purity: f64,
    /// `(exact - estimated) / exact` on the 4-decimal values, as tabulated.
    pub purity_deviation: f64,
    pub purity_deviation_full_precision: f64,
    pub exact_entropy: f64,
    pub estimated_entropy: f64,
    pub entropy_deviation: f64,
    pub entropy_deviation_full_precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub gamma_t: f64,
    pub graph_family: String,
    pub rows: Vec<TableRow>,
    pub tool_version: String,
}

/// A single oracle comparison, serializable for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleInstance {
    /// Closed-form least purity vs the QP.
    Purity { a: Vec<f64> },
    /// Closed-form maximal entropy vs the numeric solve.
    Entropy { a: Vec<f64> },
    /// KKT certificate on the closed form.
    Certificate { a: Vec<f64> },
    /// Dephasing closed form vs the master-equation integrator.
    Integrator { graph: GraphSpec, gamma_t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFailure {
    pub instance: OracleInstance,
    pub deviation: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStatistics {
    /// Records with `λ_0 >= 0` whose pair multipliers are negative.
    pub sampled: usize,
    pub qp_strictly_below: usize,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    pub comparisons: usize,
    pub max_purity_deviation: f64,
    pub max_entropy_deviation: f64,
    pub max_integrator_deviation: f64,
    pub max_kkt_residual: f64,
    pub uncertified_band: BandStatistics,
    pub failures: Vec<OracleFailure>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayResult {
    pub instance: OracleInstance,
    pub deviation: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}
