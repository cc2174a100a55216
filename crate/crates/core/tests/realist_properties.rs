use proptest::prelude::*;
use rand::Rng;
use qdist::audit::{run_audit, AuditConfig};
use qdist::metrics::{pair_coefficients, subset_coefficients};
use qdist::oracle::brute_force_metrics;
use qdist::quantum::seeded_rng;
use qdist::realist::{
    equality_audit, max_top_m_identity, optimal_realist_value, random_ensemble, realist_metrics, scheme_value,
    EpistemicEnsemble, ResponseScheme,
};

fn random_scheme(k: usize, size: usize, rng: &mut impl Rng) -> ResponseScheme {
    let mut xi = vec![vec![0.0; size]; k];
    for lambda in 0..size {
        let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        for (row, v) in xi.iter_mut().zip(&w) {
            row[lambda] = v / total;
        }
        // keep the column exactly on the simplex
        let rest: f64 = xi.iter().skip(1).map(|r| r[lambda]).sum();
        xi[0][lambda] = 1.0 - rest;
    }
    ResponseScheme::new(xi).unwrap()
}

#[test]
fn optimal_scheme_beats_random_schemes() {
    let mut rng = seeded_rng(3);
    for _ in 0..500 {
        let n = rng.random_range(2..=5);
        let size = rng.random_range(2..=8);
        let ens = random_ensemble(n, size, &mut rng);
        let coeffs = subset_coefficients(n, rng.random_range(1..n)).unwrap();
        let (best, scheme) = optimal_realist_value(&ens, &coeffs).unwrap();
        assert!((scheme_value(&ens, &coeffs, &scheme).unwrap() - best).abs() <= 1e-14);
        for _ in 0..100 {
            let other = random_scheme(coeffs.outcomes(), size, &mut rng);
            assert!(scheme_value(&ens, &coeffs, &other).unwrap() <= best + 1e-12);
        }
    }
}

#[test]
fn realist_metrics_match_enumeration() {
    let mut rng = seeded_rng(4);
    for _ in 0..200 {
        let n = rng.random_range(2..=4);
        let size = rng.random_range(1..=6);
        let ens = random_ensemble(n, size, &mut rng);
        let report = realist_metrics(&ens).unwrap();
        let (pairs, subsets) = brute_force_metrics(&ens).unwrap();
        for (p, b) in report.pairwise.iter().zip(&pairs) {
            assert!((p.value - b).abs() <= 1e-14);
        }
        for (s, b) in report.subset.iter().zip(&subsets) {
            assert!((s - b).abs() <= 1e-14);
        }
    }
}

#[test]
fn pair_entries_are_optimal_pair_values() {
    let mut rng = seeded_rng(5);
    let ens = random_ensemble(4, 7, &mut rng);
    let report = realist_metrics(&ens).unwrap();
    for p in &report.pairwise {
        let (v, _) = optimal_realist_value(&ens, &pair_coefficients(4, p.i, p.j).unwrap()).unwrap();
        assert!((v - p.value).abs() <= 1e-15);
    }
}

#[test]
fn single_ontic_state_has_zero_residual() {
    let ens = EpistemicEnsemble::from_vectors(vec![vec![1.0]; 3]).unwrap();
    assert_eq!(equality_audit(&ens).unwrap(), 0.0);
}

#[test]
fn default_audit_passes() {
    let summary = run_audit(&AuditConfig::default()).unwrap();
    assert!(summary.passed, "{summary:?}");
    assert!(summary.brute_force_checked > 0);
}

proptest! {
    #[test]
    fn identity_with_ties_and_negatives(
        values in prop::collection::vec((-6i32..=6).prop_map(|v| v as f64 * 0.5), 2..12),
        noise in prop::collection::vec(-1e3f64..1e3, 12),
        use_noise in any::<bool>(),
    ) {
        let values: Vec<f64> = if use_noise {
            values.iter().zip(&noise).map(|(v, e)| v + e).collect()
        } else {
            values
        };
        let (lhs, rhs) = max_top_m_identity(&values).unwrap();
        let scale = 1.0f64.max(values.iter().map(|v| v.abs()).sum::<f64>() * values.len() as f64);
        prop_assert!((lhs - rhs).abs() / scale <= 1e-10);
    }

    #[test]
    fn realist_equality_holds(seed in any::<u64>(), n in 2usize..=6, size in 1usize..=12) {
        let ens = random_ensemble(n, size, &mut seeded_rng(seed));
        prop_assert!(equality_audit(&ens).unwrap() <= 1e-11);
    }
}
