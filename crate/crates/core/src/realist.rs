//! Finite ontic-space realist models and classical d-level communication.
//!
//! With positivity and completeness as the only constraints on a response
//! scheme, the best scheme answers, for every ontic state `lambda`, the
//! outcome `k` maximising `sum_x c^x_k mu_x(lambda)`. All values here are
//! evaluated as exact finite sums of pointwise maxima.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::compensated_sum;
use crate::metrics::{MetricsReport, PairValue};
use crate::sdp::CoefficientTable;

const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OnticSpace {
    size: usize,
}

impl OnticSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("ontic space must be non-empty".into()));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpistemicState {
    probs: Vec<f64>,
}

impl EpistemicState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadDistribution("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::BadDistribution(format!("entry {p} is not a probability")));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::BadDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(size: usize, at: usize) -> Self {
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

#[derive(Clone, Debug)]
pub struct EpistemicEnsemble {
    space: OnticSpace,
    mus: Vec<EpistemicState>,
}

impl EpistemicEnsemble {
    pub fn new(mus: Vec<EpistemicState>) -> Result<Self> {
        let first = mus
            .first()
            .ok_or_else(|| Error::InvalidInput("ensemble needs at least one state".into()))?;
        let space = OnticSpace::new(first.probs.len())?;
        for mu in &mus {
            if mu.probs.len() != space.size {
                return Err(Error::DimMismatch {
                    expected: space.size,
                    found: mu.probs.len(),
                });
            }
        }
        Ok(Self { space, mus })
    }

    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(vectors.into_iter().map(EpistemicState::new).collect::<Result<_>>()?)
    }

    pub fn space(&self) -> OnticSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.mus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mus.is_empty()
    }

    pub fn mus(&self) -> &[EpistemicState] {
        &self.mus
    }

    /// `(mu_1(lambda), ..., mu_n(lambda))`.
    pub fn column(&self, lambda: usize) -> Vec<f64> {
        self.mus.iter().map(|mu| mu.probs[lambda]).collect()
    }

    pub fn to_json(&self) -> EnsembleFile {
        EnsembleFile {
            size: self.space.size,
            mus: self.mus.iter().map(|m| m.probs.clone()).collect(),
        }
    }
}

/// On-disk ensemble format: `{"L": L, "mus": [[p_1, ..., p_L], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleFile {
    #[serde(rename = "L")]
    pub size: usize,
    pub mus: Vec<Vec<f64>>,
}

impl EnsembleFile {
    pub fn to_ensemble(&self) -> Result<EpistemicEnsemble> {
        let ens = EpistemicEnsemble::from_vectors(self.mus.clone())?;
        if ens.space.size != self.size {
            return Err(Error::DimMismatch {
                expected: self.size,
                found: ens.space.size,
            });
        }
        Ok(ens)
    }
}

/// `xi[k][lambda]`: probability of outcome `k` given ontic state `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseScheme {
    xi: Vec<Vec<f64>>,
}

impl ResponseScheme {
    pub fn new(xi: Vec<Vec<f64>>) -> Result<Self> {
        let size = xi.first().map(|r| r.len()).unwrap_or(0);
        if size == 0 || xi.iter().any(|r| r.len() != size) {
            return Err(Error::SizeMismatch("ragged response scheme".into()));
        }
        for lambda in 0..size {
            if xi.iter().any(|r| r[lambda] < 0.0) {
                return Err(Error::BadDistribution(format!("negative response at lambda = {lambda}")));
            }
            let total = compensated_sum(xi.iter().map(|r| r[lambda]));
            if (total - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::BadDistribution(format!(
                    "responses at lambda = {lambda} sum to {total}"
                )));
            }
        }
        Ok(Self { xi })
    }

    /// Deterministic scheme answering `outcome[lambda]`.
    pub fn deterministic(outcomes: &[usize], k: usize) -> Self {
        let mut xi = vec![vec![0.0; outcomes.len()]; k];
        for (lambda, &o) in outcomes.iter().enumerate() {
            xi[o][lambda] = 1.0;
        }
        Self { xi }
    }

    pub fn get(&self, k: usize, lambda: usize) -> f64 {
        self.xi[k][lambda]
    }

    pub fn outcomes(&self) -> usize {
        self.xi.len()
    }
}

fn check_sizes(ens: &EpistemicEnsemble, coeffs: &CoefficientTable) -> Result<()> {
    if coeffs.n() != ens.len() {
        return Err(Error::SizeMismatch(format!(
            "coefficient table for n = {} applied to {} epistemic states",
            coeffs.n(),
            ens.len()
        )));
    }
    Ok(())
}

fn outcome_score(coeffs: &CoefficientTable, k: usize, column: &[f64]) -> f64 {
    compensated_sum(column.iter().enumerate().map(|(x, mu)| coeffs.get(k, x) * mu))
}

/// Success metric of a given response scheme: `sum_{x,k,lambda} c^x_k mu_x(lambda) xi(k|lambda)`.
pub fn scheme_value(ens: &EpistemicEnsemble, coeffs: &CoefficientTable, scheme: &ResponseScheme) -> Result<f64> {
    check_sizes(ens, coeffs)?;
    if scheme.outcomes() != coeffs.outcomes() {
        return Err(Error::SizeMismatch("scheme and table outcome counts differ".into()));
    }
    let terms = (0..ens.space.size).flat_map(|lambda| {
        let column = ens.column(lambda);
        (0..coeffs.outcomes())
            .map(move |k| scheme.get(k, lambda) * outcome_score(coeffs, k, &column))
            .collect::<Vec<_>>()
    });
    Ok(compensated_sum(terms))
}

/// `sum_lambda max_k sum_x c^x_k mu_x(lambda)` with the maximising
/// deterministic scheme (ties go to the lowest outcome index).
pub fn optimal_realist_value(ens: &EpistemicEnsemble, coeffs: &CoefficientTable) -> Result<(f64, ResponseScheme)> {
    check_sizes(ens, coeffs)?;
    let mut choices = Vec::with_capacity(ens.space.size);
    let mut maxima = Vec::with_capacity(ens.space.size);
    for lambda in 0..ens.space.size {
        let column = ens.column(lambda);
        let mut best_k = 0;
        let mut best = outcome_score(coeffs, 0, &column);
        for k in 1..coeffs.outcomes() {
            let s = outcome_score(coeffs, k, &column);
            if s > best {
                best = s;
                best_k = k;
            }
        }
        choices.push(best_k);
        maxima.push(best);
    }
    Ok((
        compensated_sum(maxima),
        ResponseScheme::deterministic(&choices, coeffs.outcomes()),
    ))
}

/// Optimal decoding value of a classical `d`-level code: the message is the
/// ontic state and the encodings are the epistemic states.
pub fn classical_channel_value(encodings: &EpistemicEnsemble, coeffs: &CoefficientTable) -> Result<f64> {
    optimal_realist_value(encodings, coeffs).map(|(v, _)| v)
}

/// Sum of the `m` largest entries.
pub fn top_m_sum(values: &[f64], m: usize) -> Result<f64> {
    if m < 1 || m > values.len() {
        return Err(Error::BadM { m, max: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(compensated_sum(sorted[..m].iter().copied()))
}

/// Both sides of `sum_{i<j} max(u_i, u_j) = sum_{m=1}^{n-1} top_m_sum(u, m)`.
pub fn max_top_m_identity(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidInput("identity needs at least two numbers".into()));
    }
    let lhs = compensated_sum(
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| values[i].max(values[j]))),
    );
    let rhs = compensated_sum((1..n).map(|m| top_m_sum(values, m).expect("m in range")));
    Ok((lhs, rhs))
}

/// Metrics of an ensemble computed from pointwise maxima: pair entries are
/// `(1/2) sum_lambda max(mu_i, mu_j)` and `subset[m-1] = (1/n) sum_lambda top_m_sum(mu(lambda), m)`.
pub fn realist_metrics(ens: &EpistemicEnsemble) -> Result<MetricsReport> {
    let n = ens.len();
    if n < 2 {
        return Err(Error::InvalidInput("realist metrics need n >= 2".into()));
    }
    let size = ens.space.size;
    let columns: Vec<Vec<f64>> = (0..size).map(|l| ens.column(l)).collect();
    let mut pairwise = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let value = 0.5 * compensated_sum(columns.iter().map(|c| c[i].max(c[j])));
            pairwise.push(PairValue { i, j, value });
        }
    }
    let subset = (1..n)
        .map(|m| {
            compensated_sum(columns.iter().map(|c| top_m_sum(c, m).expect("m in range"))) / n as f64
        })
        .collect();
    Ok(MetricsReport::from_parts(n, size, pairwise, subset, Vec::new()))
}

/// `|avg_pairwise - avg_set|` of the realist metrics.
pub fn equality_audit(ens: &EpistemicEnsemble) -> Result<f64> {
    let r = realist_metrics(ens)?;
    Ok((r.avg_pairwise - r.avg_set).abs())
}

/// Dirichlet(1, ..., 1) sample on the `size`-simplex.
pub fn dirichlet_state<R: rand::Rng + ?Sized>(size: usize, rng: &mut R) -> EpistemicState {
    let draws: Vec<f64> = (0..size).map(|_| rng.sample(rand_distr::Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut probs: Vec<f64> = draws.iter().map(|v| v / total).collect();
    // absorb rounding so the simplex check holds exactly
    let rest = 1.0 - compensated_sum(probs[1..].iter().copied());
    probs[0] = rest.max(0.0);
    EpistemicState { probs }
}

pub fn random_ensemble<R: rand::Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> EpistemicEnsemble {
    EpistemicEnsemble {
        space: OnticSpace { size },
        mus: (0..n).map(|_| dirichlet_state(size, rng)).collect(),
    }
}
