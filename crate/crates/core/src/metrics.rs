//! Set and pairwise distinguishability of a preparation set.
//!
//! `subset[m-1]` holds the best average probability of naming an `m`-element
//! subset containing the prepared index; `avg_set` averages it over
//! `m = 1..n-1`. `avg_pairwise` averages the two-state discrimination
//! probability over all pairs, and `deviation = avg_pairwise - avg_set`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{helstrom_pair, PreparationSet};
use crate::sdp::{
    build_measurement_sdp, solve_measurement_sdp, verify_certificate, CertificateReport,
    CoefficientTable, SolverResult,
};

/// Allowed disagreement between the pair SDP and the closed form.
pub const ORACLE_TOL: f64 = 1e-6;
/// Certificate tolerance applied to every solve backing a report.
pub const CERTIFICATE_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: usize,
    pub dim: usize,
    pub pairwise: Vec<PairValue>,
    pub avg_pairwise: f64,
    pub subset: Vec<f64>,
    pub avg_set: f64,
    pub deviation: f64,
    #[serde(skip)]
    pub certificates: Vec<CertificateReport>,
}

impl MetricsReport {
    /// Assembles a report from its primary values; averages and the
    /// deviation are derived here.
    pub fn from_parts(
        n: usize,
        dim: usize,
        pairwise: Vec<PairValue>,
        subset: Vec<f64>,
        certificates: Vec<CertificateReport>,
    ) -> Self {
        let avg_pairwise = mean(pairwise.iter().map(|p| p.value));
        let avg_set = mean(subset.iter().copied());
        Self {
            n,
            dim,
            pairwise,
            avg_pairwise,
            subset,
            avg_set,
            deviation: avg_pairwise - avg_set,
            certificates,
        }
    }

    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.certified)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    crate::linalg::compensated_sum(v.iter().copied()) / v.len() as f64
}

/// All `m`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for x in start..n {
            if n - x < m - current.len() {
                break;
            }
            current.push(x);
            extend(x + 1, n, m, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(0, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn subset_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// `c^x_S = 1/n` if `x` is in the `m`-subset `S`, else 0; outcomes are the
/// subsets in lexicographic order, labelled 1-based (`{1,2}`, ...).
pub fn subset_coefficients(n: usize, m: usize) -> Result<CoefficientTable> {
    if n < 2 || m < 1 || m > n - 1 {
        return Err(Error::BadM { m, max: n.saturating_sub(1) });
    }
    let sets = subsets(n, m);
    let labels = sets.iter().map(|s| subset_label(s)).collect();
    let inv = 1.0 / n as f64;
    let rows = sets
        .iter()
        .map(|s| (0..n).map(|x| if s.contains(&x) { inv } else { 0.0 }).collect())
        .collect();
    CoefficientTable::new(n, labels, rows)
}

/// Two-outcome discrimination of states `i` and `j` inside a set of `n`:
/// `c^i_i = c^j_j = 1/2`, everything else 0.
pub fn pair_coefficients(n: usize, i: usize, j: usize) -> Result<CoefficientTable> {
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidInput(format!("bad pair ({i}, {j}) for n = {n}")));
    }
    let mut rows = vec![vec![0.0; n]; 2];
    rows[0][i] = 0.5;
    rows[1][j] = 0.5;
    CoefficientTable::new(n, vec![(i + 1).to_string(), (j + 1).to_string()], rows)
}

fn certified_solve(
    preps: &PreparationSet,
    coeffs: &CoefficientTable,
    tol: f64,
) -> Result<(SolverResult, CertificateReport)> {
    let sdp = build_measurement_sdp(preps, coeffs)?;
    let res = solve_measurement_sdp(&sdp, tol).require_optimal()?;
    let cert = verify_certificate(&res, &sdp, CERTIFICATE_TOL.max(tol));
    Ok((res, cert))
}

pub fn subset_distinguishability(preps: &PreparationSet, m: usize, tol: f64) -> Result<(f64, SolverResult)> {
    let coeffs = subset_coefficients(preps.len(), m)?;
    let (res, _) = certified_solve(preps, &coeffs, tol)?;
    Ok((res.value, res))
}

pub fn average_set_distinguishability(preps: &PreparationSet, tol: f64) -> Result<f64> {
    let n = preps.len();
    let values = (1..n)
        .map(|m| subset_distinguishability(preps, m, tol).map(|(v, _)| v))
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean(values.into_iter()))
}

/// Closed-form value of the pair together with the certificate of the SDP
/// that cross-checks it.
fn pair_value(preps: &PreparationSet, i: usize, j: usize, tol: f64) -> Result<(f64, CertificateReport)> {
    let closed_form = helstrom_pair(&preps.states()[i], &preps.states()[j])?;
    let pair = preps.pair(i, j);
    let (res, cert) = certified_solve(&pair, &pair_coefficients(2, 0, 1)?, tol)?;
    if (res.value - closed_form).abs() > ORACLE_TOL {
        return Err(Error::OracleMismatch {
            i,
            j,
            sdp: res.value,
            closed_form,
        });
    }
    Ok((closed_form, cert))
}

pub fn average_pairwise_distinguishability(preps: &PreparationSet, tol: f64) -> Result<f64> {
    let n = preps.len();
    let mut values = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(pair_value(preps, i, j, tol)?.0);
        }
    }
    Ok(mean(values.into_iter()))
}

pub fn deviation(preps: &PreparationSet, tol: f64) -> Result<MetricsReport> {
    let n = preps.len();
    let mut certificates = Vec::new();
    let mut pairwise = Vec::with_capacity(binomial(n, 2));
    for i in 0..n {
        for j in (i + 1)..n {
            let (value, cert) = pair_value(preps, i, j, tol)?;
            pairwise.push(PairValue { i, j, value });
            certificates.push(cert);
        }
    }
    let mut subset = Vec::with_capacity(n - 1);
    for m in 1..n {
        let (res, cert) = certified_solve(preps, &subset_coefficients(n, m)?, tol)?;
        subset.push(res.value);
        certificates.push(cert);
    }
    Ok(MetricsReport::from_parts(n, preps.dim(), pairwise, subset, certificates))
}
