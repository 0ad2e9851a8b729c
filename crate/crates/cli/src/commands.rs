use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};
use stabpurity::estimator::{
    build_kkt_certificate, estimate_entropy, is_feasible, min_purity, neighbor_pair_violations,
    normalize_signs, sign_string,
};
use stabpurity::oracle::{
    default_steps, master_equation_evolve, max_entropy_numeric, qp_min_purity, DEFAULT_ORACLE_CAP,
};
use stabpurity::simulator::{
    dephased_coefficients, dephased_expectations, exact_entropy_dephased, exact_purity_dephased,
    sample_measurements, RNG_ALGORITHM,
};
use stabpurity::stabdiag::twirl;
use stabpurity::{
    Error, GraphSpec, MeasurementRecord, NoiseParams, ShotPlan, DEFAULT_DENSE_CAP, VERSION,
};

use crate::schema::*;
use crate::CliError;

pub const PURITY_TOLERANCE: f64 = 1e-6;
pub const ENTROPY_TOLERANCE: f64 = 1e-6;
pub const INTEGRATOR_TOLERANCE: f64 = 1e-8;
pub const KKT_TOLERANCE: f64 = stabpurity::estimator::KKT_TOLERANCE;

/// `γt` at which the published comparison tables are reproduced.
pub const TABLE_GAMMA_T: f64 = 0.1;

fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

/// Parses and validates a measurement file into a record.
pub fn parse_measurement(bytes: &[u8]) -> Result<(MeasurementFile, MeasurementRecord), CliError> {
    let file: MeasurementFile = serde_json::from_slice(bytes)
        .map_err(|e| malformed(format!("malformed measurement file: {e}")))?;
    if file.n != file.a.len() {
        return Err(malformed(format!(
            "field `n` is {} but field `a` has {} entries",
            file.n,
            file.a.len()
        )));
    }
    if let Some(g) = &file.graph {
        if g.n() != file.n {
            return Err(malformed(format!(
                "field `graph` has {} vertices but `n` is {}",
                g.n(),
                file.n
            )));
        }
    }
    let delta = file.delta_a.clone().unwrap_or_else(|| vec![0.0; file.n]);
    let mut record = MeasurementRecord::new(file.a.clone(), delta)?;
    if let Some(shots) = &file.shots {
        record = record.with_shots(shots.clone())?;
    }
    Ok((file, record))
}

/// Runs the full estimation pipeline on a measurement file.
pub fn cmd_estimate(input: &[u8]) -> Result<EstimateReport, CliError> {
    let input_digest = digest(input);
    let (file, raw) = parse_measurement(input)?;
    let (record, flips) = normalize_signs(&raw);
    let n = record.n();

    let estimate = match min_purity(&record) {
        Ok(e) => e,
        Err(Error::InfeasibleRecord {
            sum_a,
            threshold,
            lambda0,
        }) => {
            let oracle_p_min = if n <= DEFAULT_ORACLE_CAP {
                qp_min_purity(&record).ok().map(|s| s.objective)
            } else {
                None
            };
            let hint = match oracle_p_min {
                Some(_) => {
                    "the closed form needs sum(a) >= n - 2; oracle_p_min is the numeric minimum"
                }
                None if n <= DEFAULT_ORACLE_CAP => "no state reproduces these expectations",
                None => {
                    "the closed form needs sum(a) >= n - 2; the numeric oracle is limited to n <= 8"
                }
            };
            return Err(CliError::Infeasible(Box::new(InfeasibleReport {
                error: "infeasible_record".into(),
                input_digest,
                n,
                sum_a,
                threshold,
                lambda0,
                s_max: stabpurity::entropy_max(&record),
                oracle_p_min,
                hint: hint.into(),
            })));
        }
        Err(e) => return Err(e.into()),
    };
    let entropy = estimate_entropy(&record);

    let mut warnings = Vec::new();
    if flips.iter().any(|&f| f) {
        warnings.push(format!(
            "negative expectations: generators {} redefined as -K",
            sign_string(&flips)
        ));
    }
    if let Some(g) = &file.graph {
        for (u, v) in neighbor_pair_violations(&record, g)? {
            warnings.push(format!(
                "neighboring generators {u},{v} have a_{u} + a_{v} < 1"
            ));
        }
    }
    if estimate.p_lower.is_none() {
        warnings.push("lower error bar infeasible: sum(a - delta_a) < n - 2".into());
    }
    if estimate.p_upper.is_none() {
        warnings.push("upper error bar infeasible".into());
    }

    let mut oracle_p_min = None;
    if !estimate.certified_optimal {
        warnings.push(format!(
            "closed form not certified optimal (pair multiplier margin {:.3e}); p_min is the \
             purity of a compatible state, not the minimum",
            estimate.spectrum.optimality_margin()
        ));
        if n <= DEFAULT_ORACLE_CAP {
            oracle_p_min = Some(qp_min_purity(&record)?.objective);
        }
    }

    let kkt = if n <= DEFAULT_DENSE_CAP {
        let cert = build_kkt_certificate(&record)?;
        let failure = cert.verify().err().map(|e| e.to_string());
        Some(KktSummary {
            valid: failure.is_none(),
            stationarity_residual: cert.stationarity_residual,
            min_mu: cert.min_mu,
            complementarity_residual: cert.complementarity_residual,
            failure,
        })
    } else {
        None
    };

    Ok(EstimateReport {
        tool_version: VERSION.into(),
        input_digest,
        n,
        a: record.a().to_vec(),
        delta_a: record.delta_a().to_vec(),
        sign_flips: sign_string(&flips),
        p_min: estimate.p_min,
        p_lower: estimate.p_lower,
        p_upper: estimate.p_upper,
        lambda0: estimate.lambda0(),
        s_lower: entropy.s_lower.expect("feasible record has a lower bound"),
        s_max: entropy.s_max,
        feasible: true,
        bounds_feasible: estimate.bounds_feasible,
        certified_optimal: estimate.certified_optimal,
        oracle_p_min,
        kkt,
        warnings,
        meta: file.meta,
    })
}

/// Shot count per generator, or exact expectations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl FromStr for Shots {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exact" {
            return Ok(Shots::Exact);
        }
        match s.parse::<u64>() {
            Ok(0) | Err(_) => Err(format!(
                "shots must be a positive integer or `exact`, got `{s}`"
            )),
            Ok(v) => Ok(Shots::Count(v)),
        }
    }
}

/// Simulates a dephased graph state: measurement file plus reference truth.
pub fn cmd_simulate(
    graph: &GraphSpec,
    graph_label: &str,
    gamma_t: f64,
    shots: Shots,
    seed: u64,
) -> Result<(MeasurementFile, TruthFile), CliError> {
    let noise = NoiseParams::from_gamma_t(gamma_t)?;
    let a_exact = dephased_expectations(graph, &noise);
    let (a, delta_a, shot_list, shots_meta) = match shots {
        Shots::Exact => (a_exact.clone(), vec![0.0; graph.n()], None, json!("exact")),
        Shots::Count(count) => {
            let record = sample_measurements(&a_exact, &ShotPlan::new(count, seed)?)?;
            (
                record.a().to_vec(),
                record.delta_a().to_vec(),
                record.shots().map(<[u64]>::to_vec),
                json!(count),
            )
        }
    };
    let meta = json!({
        "source": "simulate",
        "graph": graph_label,
        "gamma_t": gamma_t,
        "shots": shots_meta,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "tool_version": VERSION,
    });
    let measurement = MeasurementFile {
        n: graph.n(),
        graph: Some(graph.clone()),
        a,
        delta_a: Some(delta_a),
        shots: shot_list,
        meta: Some(meta),
    };
    let truth = TruthFile {
        graph: graph.clone(),
        gamma_t,
        a_exact,
        exact_purity: exact_purity_dephased(graph, &noise),
        exact_entropy: exact_entropy_dephased(graph, &noise),
        tool_version: VERSION.into(),
    };
    Ok((measurement, truth))
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// Exact vs estimated purity and entropy for dephased path graphs,
/// `n = 2, 3, 4`, at `γt = 0.1`.
pub fn cmd_reproduce_tables() -> Result<Tables, CliError> {
    let noise = NoiseParams::from_gamma_t(TABLE_GAMMA_T)?;
    let mut rows = Vec::new();
    for n in 2..=4 {
        let graph = GraphSpec::path(n)?;
        let record = MeasurementRecord::exact(dephased_expectations(&graph, &noise))?;
        let exact_purity = exact_purity_dephased(&graph, &noise);
        let estimated_purity = min_purity(&record)?.p_min;
        let exact_entropy = exact_entropy_dephased(&graph, &noise);
        let estimated_entropy = stabpurity::entropy_lower_bound(&record)?;
        let dev = |exact: f64, est: f64| (exact - est) / exact;
        rows.push(TableRow {
            n,
            exact_purity,
            estimated_purity,
            purity_deviation: dev(round4(exact_purity), round4(estimated_purity)),
            purity_deviation_full_precision: dev(exact_purity, estimated_purity),
            exact_entropy,
            estimated_entropy,
            entropy_deviation: dev(round4(exact_entropy), round4(estimated_entropy)),
            entropy_deviation_full_precision: dev(exact_entropy, estimated_entropy),
        });
    }
    Ok(Tables {
        gamma_t: TABLE_GAMMA_T,
        graph_family: "path".into(),
        rows,
        tool_version: VERSION.into(),
    })
}

/// Fixed-width text rendering of both tables, values rounded to 4 places.
pub fn render_tables(tables: &Tables) -> String {
    let mut out = format!("Purity (gamma*t = {})\n", tables.gamma_t);
    out += "qubits | exact purity | estimated purity | relative deviation\n";
    for r in &tables.rows {
        out += &format!(
            "{:>6} | {:>12.4} | {:>16.4} | {:>18.4}\n",
            r.n, r.exact_purity, r.estimated_purity, r.purity_deviation
        );
    }
    out += &format!("\nEntropy, natural log (gamma*t = {})\n", tables.gamma_t);
    out += "qubits | exact entropy | estimated entropy | relative deviation\n";
    for r in &tables.rows {
        out += &format!(
            "{:>6} | {:>13.4} | {:>17.4} | {:>18.4}\n",
            r.n, r.exact_entropy, r.estimated_entropy, r.entropy_deviation
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCheckConfig {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            n_min: 2,
            n_max: 4,
            seed: 0,
        }
    }
}

/// Uniform `a ∈ [0, 1]^n` with a certified closed form, by rejection.
pub fn sample_certified(rng: &mut ChaCha8Rng, n: usize) -> MeasurementRecord {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let record = MeasurementRecord::exact(a).expect("values lie in [0, 1]");
        if min_purity(&record).is_ok_and(|e| e.certified_optimal) {
            return record;
        }
    }
}

fn tolerance_of(instance: &OracleInstance) -> f64 {
    match instance {
        OracleInstance::Purity { .. } => PURITY_TOLERANCE,
        OracleInstance::Entropy { .. } => ENTROPY_TOLERANCE,
        OracleInstance::Certificate { .. } => KKT_TOLERANCE,
        OracleInstance::Integrator { .. } => INTEGRATOR_TOLERANCE,
    }
}

/// Deviation between a closed form and its oracle for one instance.
pub fn instance_deviation(instance: &OracleInstance) -> Result<f64, CliError> {
    match instance {
        OracleInstance::Purity { a } => {
            let record = MeasurementRecord::exact(a.clone())?;
            let closed = min_purity(&record)?.p_min;
            Ok((closed - qp_min_purity(&record)?.objective).abs())
        }
        OracleInstance::Entropy { a } => {
            let record = MeasurementRecord::exact(a.clone())?;
            Ok((stabpurity::entropy_max(&record) - max_entropy_numeric(&record)?.entropy).abs())
        }
        OracleInstance::Certificate { a } => {
            let cert = build_kkt_certificate(&MeasurementRecord::exact(a.clone())?)?;
            Ok(cert
                .stationarity_residual
                .max(cert.complementarity_residual)
                .max(-cert.min_mu)
                .max(-cert.min_lambda)
                .max(0.0))
        }
        OracleInstance::Integrator { graph, gamma_t } => {
            let noise = NoiseParams::from_gamma_t(*gamma_t)?;
            let rho = master_equation_evolve(graph, 1.0, *gamma_t, default_steps(*gamma_t))?;
            let numeric = twirl(&rho, graph)?;
            let closed = dephased_coefficients(graph, &noise)?;
            Ok(numeric
                .as_slice()
                .iter()
                .zip(closed.as_slice())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max))
        }
    }
}

/// Recomputes the deviation of a serialized instance.
pub fn replay_instance(bytes: &[u8]) -> Result<ReplayResult, CliError> {
    let instance: OracleInstance = match serde_json::from_slice::<OracleFailure>(bytes) {
        Ok(failure) => failure.instance,
        Err(_) => serde_json::from_slice(bytes)
            .map_err(|e| malformed(format!("malformed oracle instance: {e}")))?,
    };
    let deviation = instance_deviation(&instance)?;
    let tolerance = tolerance_of(&instance);
    Ok(ReplayResult {
        instance,
        deviation,
        tolerance,
        within_tolerance: deviation <= tolerance,
    })
}

/// Compares closed forms against the numeric oracles on random certified
/// records and the dephasing closed form against the integrator.
pub fn cmd_oracle_check(config: &OracleCheckConfig) -> Result<OracleSummary, CliError> {
    let OracleCheckConfig {
        trials,
        n_min,
        n_max,
        seed,
    } = *config;
    if n_min < 1 || n_min > n_max || n_max > DEFAULT_ORACLE_CAP {
        return Err(malformed(format!(
            "n range {n_min}-{n_max} must satisfy 1 <= min <= max <= {DEFAULT_ORACLE_CAP}"
        )));
    }
    let mut summary = OracleSummary {
        trials,
        n_min,
        n_max,
        seed,
        comparisons: 0,
        max_purity_deviation: 0.0,
        max_entropy_deviation: 0.0,
        max_integrator_deviation: 0.0,
        max_kkt_residual: 0.0,
        uncertified_band: BandStatistics {
            sampled: 0,
            qp_strictly_below: 0,
            max_gap: 0.0,
        },
        failures: Vec::new(),
        tool_version: VERSION.into(),
    };
    if trials == 0 {
        return Ok(summary);
    }

    let record_check = |instance: OracleInstance, summary: &mut OracleSummary| {
        let deviation = instance_deviation(&instance)?;
        let slot = match instance {
            OracleInstance::Purity { .. } => &mut summary.max_purity_deviation,
            OracleInstance::Entropy { .. } => &mut summary.max_entropy_deviation,
            OracleInstance::Certificate { .. } => &mut summary.max_kkt_residual,
            OracleInstance::Integrator { .. } => &mut summary.max_integrator_deviation,
        };
        *slot = slot.max(deviation);
        summary.comparisons += 1;
        let tolerance = tolerance_of(&instance);
        if deviation.is_nan() || deviation > tolerance {
            summary.failures.push(OracleFailure {
                instance,
                deviation,
                tolerance,
            });
        }
        Ok::<_, CliError>(())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        for n in n_min..=n_max {
            let a = sample_certified(&mut rng, n).a().to_vec();
            record_check(OracleInstance::Purity { a: a.clone() }, &mut summary)?;
            record_check(OracleInstance::Certificate { a: a.clone() }, &mut summary)?;
            let signed: Vec<f64> = a
                .iter()
                .map(|&v| if rng.random::<bool>() { v } else { -v })
                .collect();
            record_check(OracleInstance::Entropy { a: signed }, &mut summary)?;

            // closed form outside its certified region: statistics only
            let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let record = MeasurementRecord::exact(a)?;
            if is_feasible(&record) {
                let est = min_purity(&record)?;
                if !est.certified_optimal {
                    let gap = est.p_min - qp_min_purity(&record)?.objective;
                    let band = &mut summary.uncertified_band;
                    band.sampled += 1;
                    band.qp_strictly_below += usize::from(gap > 1e-9);
                    band.max_gap = band.max_gap.max(gap);
                }
            }
        }
    }
    for n in n_min..=n_max {
        for gamma_t in [0.05, 0.1, 0.5] {
            let graph = GraphSpec::path(n)?;
            record_check(OracleInstance::Integrator { graph, gamma_t }, &mut summary)?;
        }
    }

    if summary.failures.is_empty() {
        Ok(summary)
    } else {
        Err(CliError::ToleranceBreach(Box::new(summary)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shots_parse() {
        assert_eq!("exact".parse::<Shots>(), Ok(Shots::Exact));
        assert_eq!("250".parse::<Shots>(), Ok(Shots::Count(250)));
        assert!("0".parse::<Shots>().is_err());
        assert!("many".parse::<Shots>().is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round4(0.826945), 0.8269);
        assert_eq!(round4(0.38266), 0.3827);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            digest(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn oracle_range_validation() {
        let bad = OracleCheckConfig {
            n_min: 3,
            n_max: 2,
            ..Default::default()
        };
        assert!(matches!(
            cmd_oracle_check(&bad),
            Err(CliError::Malformed(_))
        ));
        let big = OracleCheckConfig {
            n_max: 9,
            ..Default::default()
        };
        assert!(matches!(
            cmd_oracle_check(&big),
            Err(CliError::Malformed(_))
        ));
    }
}
