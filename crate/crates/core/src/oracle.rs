//! Brute-force reference values for the realist engine.
//!
//! Every deterministic response scheme `lambda -> k` is enumerated, so the
//! cost is `K^L`; intended for `L, K <= 6`.

use crate::error::{Error, Result};
use crate::linalg::compensated_sum;
use crate::metrics::{binomial, pair_coefficients, subset_coefficients};
use crate::realist::EpistemicEnsemble;
use crate::sdp::CoefficientTable;

pub const MAX_ENUMERATION: usize = 6;

/// Best value over all deterministic response schemes.
pub fn brute_force_value(ens: &EpistemicEnsemble, coeffs: &CoefficientTable) -> Result<f64> {
    let size = ens.space().size();
    let k = coeffs.outcomes();
    if size > MAX_ENUMERATION || k > MAX_ENUMERATION {
        return Err(Error::InvalidInput(format!(
            "enumeration limited to L, K <= {MAX_ENUMERATION} (got L = {size}, K = {k})"
        )));
    }
    if coeffs.n() != ens.len() {
        return Err(Error::SizeMismatch("table and ensemble sizes differ".into()));
    }
    let mut assignment = vec![0usize; size];
    let mut best = f64::NEG_INFINITY;
    loop {
        let value = compensated_sum((0..size).flat_map(|lambda| {
            let out = assignment[lambda];
            ens.mus()
                .iter()
                .enumerate()
                .map(move |(x, mu)| coeffs.get(out, x) * mu.probs()[lambda])
        }));
        best = best.max(value);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == size {
                return Ok(best);
            }
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Pairwise and subset values by enumeration, in the ordering used by
/// [`crate::metrics::MetricsReport`].
pub fn brute_force_metrics(ens: &EpistemicEnsemble) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = ens.len();
    let mut pairwise = Vec::with_capacity(binomial(n, 2));
    for i in 0..n {
        for j in (i + 1)..n {
            pairwise.push(brute_force_value(ens, &pair_coefficients(n, i, j)?)?);
        }
    }
    let subset = (1..n)
        .map(|m| brute_force_value(ens, &subset_coefficients(n, m)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((pairwise, subset))
}
