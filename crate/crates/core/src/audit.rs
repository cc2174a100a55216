//! Randomised audit of the realist engine: the pairwise/set equality on
//! random finite ensembles, the pairwise-max/top-m identity, and agreement
//! with the brute-force enumeration oracle.

use std::ops::RangeInclusive;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Result;
use crate::oracle::{brute_force_metrics, MAX_ENUMERATION};
use crate::quantum::seeded_rng;
use crate::realist::{equality_audit, max_top_m_identity, random_ensemble, realist_metrics};

pub const EQUALITY_TOL: f64 = 1e-11;
pub const IDENTITY_RELATIVE_TOL: f64 = 1e-10;
/// Floating-point rounding allowance when comparing with enumeration.
pub const ORACLE_AGREEMENT_TOL: f64 = 1e-14;

#[derive(Clone, Debug, Serialize)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub n_range: RangeInclusive<usize>,
    pub l_range: RangeInclusive<usize>,
    pub identity_len_range: RangeInclusive<usize>,
    pub brute_force: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0,
            n_range: 2..=6,
            l_range: 2..=12,
            identity_len_range: 2..=10,
            brute_force: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditSummary {
    pub samples: usize,
    pub max_equality_residual: f64,
    /// Largest `residual / (1e-12 n)` seen; at most 1 when every ensemble meets its bound.
    pub max_scaled_equality_residual: f64,
    pub identity_max_relative_residual: f64,
    pub brute_force_checked: usize,
    pub brute_force_max_difference: f64,
    pub equality_ok: bool,
    pub identity_ok: bool,
    pub brute_force_ok: bool,
    pub passed: bool,
}

pub fn run_audit(config: &AuditConfig) -> Result<AuditSummary> {
    let mut rng = seeded_rng(config.seed);
    let mut max_eq = 0.0f64;
    let mut max_scaled = 0.0f64;
    let mut max_identity = 0.0f64;
    let mut bf_checked = 0usize;
    let mut bf_diff = 0.0f64;

    for sample in 0..config.samples {
        let n = rng.random_range(config.n_range.clone());
        let size = rng.random_range(config.l_range.clone());
        let ens = random_ensemble(n, size, &mut rng);
        let residual = equality_audit(&ens)?;
        max_eq = max_eq.max(residual);
        max_scaled = max_scaled.max(residual / (1e-12 * n as f64));

        if config.brute_force && size <= MAX_ENUMERATION && crate::metrics::binomial(n, n / 2) <= MAX_ENUMERATION {
            let report = realist_metrics(&ens)?;
            let (pairs, subsets) = brute_force_metrics(&ens)?;
            for (p, b) in report.pairwise.iter().zip(&pairs) {
                bf_diff = bf_diff.max((p.value - b).abs());
            }
            for (s, b) in report.subset.iter().zip(&subsets) {
                bf_diff = bf_diff.max((s - b).abs());
            }
            bf_checked += 1;
        }

        let len = rng.random_range(config.identity_len_range.clone());
        let mut values: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if sample % 2 == 1 {
            // coarse rounding produces ties
            for v in &mut values {
                *v = (*v * 2.0).round() / 2.0;
            }
        }
        let (lhs, rhs) = max_top_m_identity(&values)?;
        let scale = 1.0f64.max(values.iter().map(|v| v.abs()).sum::<f64>() * len as f64);
        max_identity = max_identity.max((lhs - rhs).abs() / scale);
    }

    let equality_ok = max_eq <= EQUALITY_TOL && max_scaled <= 1.0;
    let identity_ok = max_identity <= IDENTITY_RELATIVE_TOL;
    let brute_force_ok = bf_diff <= ORACLE_AGREEMENT_TOL;
    Ok(AuditSummary {
        samples: config.samples,
        max_equality_residual: max_eq,
        max_scaled_equality_residual: max_scaled,
        identity_max_relative_residual: max_identity,
        brute_force_checked: bf_checked,
        brute_force_max_difference: bf_diff,
        equality_ok,
        identity_ok,
        brute_force_ok,
        passed: equality_ok && identity_ok && brute_force_ok,
    })
}
