mod common;

use proptest::prelude::*;
use rand::Rng;
use stabpurity::estimator::{
    binary_entropy, build_kkt_certificate, closed_form_spectrum, entropy_lower_bound, entropy_max,
    kkt_certificate, min_purity, min_purity_coefficients,
};
use stabpurity::oracle::qp_min_purity;
use stabpurity::stabdiag::{eigenvalues, purity};
use stabpurity::MeasurementRecord;

use common::{max_abs_diff, random_certified_record, random_feasible_record, rng};

fn rec(a: &[f64]) -> MeasurementRecord {
    MeasurementRecord::exact(a.to_vec()).unwrap()
}

/// Brute force over all 2^n indices of the closed-form coefficient formula.
fn coefficient_oracle(a: &[f64]) -> Vec<f64> {
    (0usize..1 << a.len())
        .map(|i| {
            (0..a.len())
                .filter(|k| i >> k & 1 == 1)
                .map(|k| a[k] - 1.0)
                .sum::<f64>()
                + 1.0
        })
        .collect()
}

#[test]
fn closed_form_spectrum_matches_transform() {
    let mut r = rng(100);
    for n in 1..=10 {
        for _ in 0..20 {
            let record = random_feasible_record(&mut r, n);
            let c = min_purity_coefficients(&record).unwrap();
            assert!(max_abs_diff(c.as_slice(), &coefficient_oracle(record.a())) <= 1e-12);
            assert_eq!(c.generator_expectations(), record.a());
            let lambda = eigenvalues(&c);
            let summary = closed_form_spectrum(&record).unwrap();
            for (j, &l) in lambda.as_slice().iter().enumerate() {
                let expected = match j.count_ones() {
                    0 => summary.lambda0,
                    1 => summary.singles[j.trailing_zeros() as usize],
                    _ => 0.0,
                };
                assert!(
                    (l - expected).abs() <= 1e-12,
                    "n={n} j={j}: {l} vs {expected}"
                );
            }
            let p = min_purity(&record).unwrap().p_min;
            assert!((p - purity(&c)).abs() <= 1e-12);
            assert!(p >= (0.5f64).powi(n as i32) - 1e-15 && p <= 1.0 + 1e-15);
        }
    }
}

#[test]
fn three_qubit_coefficients_cross_checked_by_qp() {
    let record = rec(&[1.0, 1.0, 0.0]);
    let c = min_purity_coefficients(&record).unwrap();
    let qp = qp_min_purity(&record).unwrap();
    assert!((purity(&c) - qp.objective).abs() <= 1e-6);
}

#[test]
fn two_qubit_point_agrees_with_qp() {
    let record = rec(&[0.9, 0.9]);
    let qp = qp_min_purity(&record).unwrap();
    assert!((min_purity(&record).unwrap().p_min - qp.objective).abs() <= 1e-6);
}

#[test]
fn error_bars_agree_with_qp_at_shifted_inputs() {
    let record = MeasurementRecord::new(vec![0.9, 0.9], vec![0.01, 0.01]).unwrap();
    let est = min_purity(&record).unwrap();
    let lo = qp_min_purity(&rec(&[0.89, 0.89])).unwrap().objective;
    let hi = qp_min_purity(&rec(&[0.91, 0.91])).unwrap().objective;
    assert!((est.p_lower.unwrap() - lo).abs() <= 1e-6);
    assert!((est.p_upper.unwrap() - hi).abs() <= 1e-6);
    assert!((lo - 0.79815).abs() <= 1e-6 && (hi - 0.83215).abs() <= 1e-6);
}

#[test]
fn certificates_valid_on_certified_records() {
    let mut r = rng(200);
    for n in 2..=4 {
        for _ in 0..200 {
            let record = random_certified_record(&mut r, n);
            let cert = kkt_certificate(&record).unwrap_or_else(|e| panic!("{:?}: {e}", record.a()));
            assert!(cert.stationarity_residual <= 1e-9);
            assert!(cert.complementarity_residual <= 1e-9);
            assert!(cert.min_mu >= -1e-9);
        }
    }
}

#[test]
fn certificate_fails_exactly_where_margin_is_negative() {
    let mut r = rng(201);
    for n in 2..=5 {
        for _ in 0..200 {
            let record = random_feasible_record(&mut r, n);
            let est = min_purity(&record).unwrap();
            let cert = build_kkt_certificate(&record).unwrap();
            assert!(cert.stationarity_residual <= 1e-9);
            if est.spectrum.optimality_margin().abs() > 1e-9 {
                assert_eq!(cert.is_valid(), est.certified_optimal, "{:?}", record.a());
            }
        }
    }
}

#[test]
fn uncertified_band_is_strictly_suboptimal() {
    let mut r = rng(202);
    let mut seen = 0;
    while seen < 30 {
        let n = r.random_range(3..=4);
        let record = random_feasible_record(&mut r, n);
        let est = min_purity(&record).unwrap();
        if est.certified_optimal || est.spectrum.optimality_margin() > -1e-3 {
            continue;
        }
        let qp = qp_min_purity(&record).unwrap();
        assert!(qp.objective < est.p_min - 1e-9, "{:?}", record.a());
        seen += 1;
    }
}

#[test]
fn monotone_in_each_expectation_on_grid() {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for &a0 in &grid {
        for &a1 in &grid {
            let base = rec(&[a0, a1, 0.95]);
            let Ok(est) = min_purity(&base) else { continue };
            if !est.certified_optimal {
                continue;
            }
            for k in 0..3 {
                let mut a = base.a().to_vec();
                a[k] = (a[k] + 0.01).min(1.0);
                let bumped = min_purity(&rec(&a)).unwrap();
                assert!(bumped.p_min >= est.p_min - 1e-15, "{a:?}");
            }
        }
    }
}

#[test]
fn bound_ordering_and_equality_cases() {
    let mut r = rng(300);
    for _ in 0..500 {
        let n = r.random_range(2..=6);
        let record = random_feasible_record(&mut r, n);
        let lo = entropy_lower_bound(&record).unwrap();
        let hi = entropy_max(&record);
        assert!(lo >= 0.0 && lo <= hi + 1e-12 && hi <= n as f64 * 2f64.ln() + 1e-12);
        if record.a().iter().any(|&a| a < 1.0 - 1e-6) {
            assert!(lo < hi - 1e-9, "{:?}", record.a());
        }
    }
    assert_eq!(
        entropy_lower_bound(&rec(&[1.0; 4])).unwrap(),
        entropy_max(&rec(&[1.0; 4]))
    );
    let single = rec(&[0.37]);
    assert!((entropy_lower_bound(&single).unwrap() - entropy_max(&single)).abs() < 1e-15);
    assert!((entropy_max(&single) - binary_entropy(0.685)).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn error_bars_sandwich_estimate(
        a in proptest::collection::vec(0.6f64..=1.0, 1..=6),
        d in proptest::collection::vec(0.0f64..0.05, 6),
    ) {
        let delta = d[..a.len()].to_vec();
        let record = MeasurementRecord::new(a, delta).unwrap();
        let est = min_purity(&record).unwrap();
        prop_assume!(est.certified_optimal && est.bounds_feasible);
        // monotone on the certified region, so the shifted evaluations bracket
        let (lo, hi) = (est.p_lower.unwrap(), est.p_upper.unwrap());
        prop_assert!(lo <= est.p_min + 1e-15);
        prop_assert!(est.p_min <= hi + 1e-15);
    }

    #[test]
    fn sign_flips_do_not_change_bounds(a in proptest::collection::vec(-1.0f64..=1.0, 1..=6)) {
        let record = rec(&a);
        let abs: Vec<f64> = a.iter().map(|v| v.abs()).collect();
        let normalized = rec(&abs);
        prop_assert_eq!(entropy_max(&record), entropy_max(&normalized));
        prop_assert_eq!(min_purity(&record).ok(), min_purity(&normalized).ok());
    }
}
