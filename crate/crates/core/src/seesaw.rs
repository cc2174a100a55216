//! Restarted see-saw search over preparation sets of fixed dimension.
//!
//! The objective is `a * avg_pairwise + b * avg_set`, a weighted sum of
//! measurement-optimised properties, each convex in the states. One
//! see-saw round
//!
//! 1. solves every measurement SDP for the current states (exact value and
//!    optimal measurements);
//! 2. freezes the measurements of the positively weighted terms, which
//!    turns them into linear lower bounds, keeps the negatively weighted
//!    terms exact through their dual `min Tr(Y) s.t. Y >= rho~_k`, and
//!    solves the resulting joint SDP over the `n` density operators;
//! 3. re-evaluates the proposal exactly and accepts it only on an
//!    improvement of at least `improvement_tol`.
//!
//! The state SDP maximises a minorant that touches the objective at the
//! current states, so accepted steps never decrease the exact value, and
//! every reported number is the exact value of an explicit preparation set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, identity, trace_product, ComplexMatrix};
use crate::metrics::{self, binomial, MetricsReport};
use crate::quantum::{
    haar_random_pure_with, helstrom_measurement, helstrom_pair, hs_random_mixed_with, seeded_rng, task_seed,
    DensityOperator, PreparationSet,
};
use crate::sdp::ipm::{IpmOptions, IpmStatus};
use crate::sdp::{build_measurement_sdp, solve_measurement_sdp, CoefficientTable, HermitianLmi};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// maximise `avg_pairwise - avg_set`
    Positive,
    /// maximise `avg_set - avg_pairwise`
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub n: usize,
    pub dim: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub improvement_tol: f64,
    pub solver_tol: f64,
    pub seed: u64,
    pub sign: Sign,
    pub init: Init,
}

impl SeesawConfig {
    pub fn new(n: usize, dim: usize, sign: Sign) -> Self {
        Self {
            n,
            dim,
            restarts: 20,
            max_iters: 100,
            improvement_tol: 1e-7,
            solver_tol: crate::sdp::DEFAULT_TOL,
            seed: 0,
            sign,
            init: Init::Pure,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 || self.dim < 2 {
            return Err(Error::InvalidInput(format!(
                "see-saw needs n >= 3 and dim >= 2 (got n = {}, dim = {})",
                self.n, self.dim
            )));
        }
        if self.dim > 8 {
            return Err(Error::InvalidInput(format!("dim = {} exceeds the supported 8", self.dim)));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidInput("restarts and max_iters must be positive".into()));
        }
        if !(self.improvement_tol > 0.0 && self.solver_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// `pairwise_weight * avg_pairwise + set_weight * avg_set`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub pairwise_weight: f64,
    pub set_weight: f64,
}

impl Objective {
    pub fn deviation(sign: Sign) -> Self {
        match sign {
            Sign::Positive => Self {
                pairwise_weight: 1.0,
                set_weight: -1.0,
            },
            Sign::Negative => Self {
                pairwise_weight: -1.0,
                set_weight: 1.0,
            },
        }
    }

    pub fn of_report(&self, report: &MetricsReport) -> f64 {
        self.pairwise_weight * report.avg_pairwise + self.set_weight * report.avg_set
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub best_preps: PreparationSet,
    /// Exact objective value of `best_preps`, re-evaluated through [`metrics::deviation`].
    pub best_value: f64,
    pub report: MetricsReport,
    /// Best-so-far exact value after every see-saw round, over all restarts.
    pub trace: Vec<f64>,
    pub restarts_used: usize,
    pub failed_restarts: Vec<(usize, String)>,
}

enum TermKind {
    Pair(usize, usize),
    Subset,
}

struct Term {
    weight: f64,
    kind: TermKind,
    coeffs: CoefficientTable,
}

fn objective_terms(n: usize, objective: &Objective) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    if objective.pairwise_weight != 0.0 {
        let w = objective.pairwise_weight / binomial(n, 2) as f64;
        for i in 0..n {
            for j in (i + 1)..n {
                terms.push(Term {
                    weight: w,
                    kind: TermKind::Pair(i, j),
                    coeffs: metrics::pair_coefficients(n, i, j)?,
                });
            }
        }
    }
    if objective.set_weight != 0.0 {
        let w = objective.set_weight / (n - 1) as f64;
        for m in 1..n {
            terms.push(Term {
                weight: w,
                kind: TermKind::Subset,
                coeffs: metrics::subset_coefficients(n, m)?,
            });
        }
    }
    Ok(terms)
}

struct Evaluation {
    value: f64,
    /// Optimal measurement for each term.
    measurements: Vec<Vec<ComplexMatrix>>,
}

fn evaluate(preps: &PreparationSet, terms: &[Term], tol: f64) -> Result<Evaluation> {
    let mut value = 0.0;
    let mut measurements = Vec::with_capacity(terms.len());
    for term in terms {
        match term.kind {
            TermKind::Pair(i, j) => {
                let (a, b) = (&preps.states()[i], &preps.states()[j]);
                value += term.weight * helstrom_pair(a, b)?;
                measurements.push(helstrom_measurement(a, b).to_vec());
            }
            TermKind::Subset => {
                let sdp = build_measurement_sdp(preps, &term.coeffs)?;
                let res = solve_measurement_sdp(&sdp, tol).require_optimal()?;
                value += term.weight * res.value;
                measurements.push(res.povm.elements().to_vec());
            }
        }
    }
    Ok(Evaluation { value, measurements })
}

/// One state update: maximise the linearised positive terms minus the exact
/// (dualised) negative terms over `n` density operators.
fn state_step(dim: usize, n: usize, terms: &[Term], eval: &Evaluation, tol: f64) -> Result<PreparationSet> {
    let traceless = linalg::traceless_basis(dim);
    let full = linalg::hermitian_basis(dim);
    let mixed = identity(dim).unscale(dim as f64);

    // Linear functional of each state from the frozen measurements.
    let mut gradient = vec![linalg::zeros(dim); n];
    for (term, meas) in terms.iter().zip(&eval.measurements) {
        if term.weight > 0.0 {
            for (k, m) in meas.iter().enumerate() {
                for (x, g) in gradient.iter_mut().enumerate() {
                    let c = term.coeffs.get(k, x);
                    if c != 0.0 {
                        *g += m.scale(term.weight * c);
                    }
                }
            }
        }
    }

    let negative: Vec<&Term> = terms.iter().filter(|t| t.weight < 0.0).collect();
    let mut block_dims = vec![dim; n];
    for t in &negative {
        block_dims.extend(std::iter::repeat_n(dim, t.coeffs.outcomes()));
    }
    let mut lmi = HermitianLmi::new(&block_dims);

    let state_vars: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            traceless
                .iter()
                .map(|e| lmi.add_variable(trace_product(e, &gradient[x])))
                .collect()
        })
        .collect();
    for (x, vars) in state_vars.iter().enumerate() {
        lmi.add_constant(x, &mixed);
        for (&v, e) in vars.iter().zip(&traceless) {
            lmi.add_term(v, x, e);
        }
    }

    let mut block = n;
    for t in &negative {
        let dual_vars: Vec<usize> = full
            .iter()
            .map(|e| lmi.add_variable(t.weight * linalg::real_trace(e)))
            .collect();
        for k in 0..t.coeffs.outcomes() {
            for (&v, e) in dual_vars.iter().zip(&full) {
                lmi.add_term(v, block, e);
            }
            for (x, vars) in state_vars.iter().enumerate() {
                let c = t.coeffs.get(k, x);
                if c != 0.0 {
                    lmi.add_constant(block, &mixed.scale(-c));
                    for (&v, e) in vars.iter().zip(&traceless) {
                        lmi.add_term(v, block, &e.scale(-c));
                    }
                }
            }
            block += 1;
        }
    }

    let sol = lmi.solve(&IpmOptions {
        tol: tol * 0.1,
        ..IpmOptions::default()
    });
    if sol.raw.status == IpmStatus::Breakdown {
        return Err(Error::Solver {
            status: crate::sdp::SolverStatus::NumericalTrouble,
            gap: sol.raw.relative_gap,
        });
    }
    let states = state_vars
        .iter()
        .map(|vars| {
            let mut rho = mixed.clone();
            for (&v, e) in vars.iter().zip(&traceless) {
                rho += e.scale(sol.raw.y[v]);
            }
            DensityOperator::project(&rho)
        })
        .collect::<Result<Vec<_>>>()?;
    PreparationSet::new(states)
}

fn initial_states(config: &SeesawConfig, restart: usize) -> PreparationSet {
    let mut rng = seeded_rng(task_seed(config.seed, restart as u64));
    let states = (0..config.n)
        .map(|_| match config.init {
            Init::Pure => haar_random_pure_with(config.dim, &mut rng),
            Init::Mixed => hs_random_mixed_with(config.dim, &mut rng),
        })
        .collect();
    PreparationSet::new(states).expect("n >= 3 states of equal dimension")
}

struct RestartOutcome {
    preps: PreparationSet,
    value: f64,
    rounds: Vec<f64>,
}

fn run_restart(config: &SeesawConfig, terms: &[Term], restart: usize) -> Result<RestartOutcome> {
    let mut preps = initial_states(config, restart);
    let mut eval = evaluate(&preps, terms, config.solver_tol)?;
    let mut rounds = vec![eval.value];
    for _ in 0..config.max_iters {
        let proposal = match state_step(config.dim, config.n, terms, &eval, config.solver_tol) {
            Ok(p) => p,
            Err(_) => break,
        };
        let next = match evaluate(&proposal, terms, config.solver_tol) {
            Ok(e) => e,
            Err(_) => break,
        };
        if next.value >= eval.value + config.improvement_tol {
            preps = proposal;
            eval = next;
            rounds.push(eval.value);
        } else {
            break;
        }
    }
    Ok(RestartOutcome {
        preps,
        value: eval.value,
        rounds,
    })
}

/// Maximises `objective` over preparation sets of `config.n` states in
/// dimension `config.dim`; `config.sign` is ignored.
pub fn maximize(config: &SeesawConfig, objective: &Objective) -> Result<SeesawResult> {
    config.validate()?;
    let terms = objective_terms(config.n, objective)?;
    let mut best: Option<(usize, RestartOutcome)> = None;
    let mut trace = Vec::new();
    let mut failed_restarts = Vec::new();
    let mut restarts_used = 0;
    for restart in 0..config.restarts {
        match run_restart(config, &terms, restart) {
            Ok(outcome) => {
                restarts_used += 1;
                let floor = best.as_ref().map(|(_, b)| b.value).unwrap_or(f64::NEG_INFINITY);
                trace.extend(outcome.rounds.iter().map(|v| v.max(floor)));
                // ties keep the earlier restart
                if outcome.value > floor {
                    best = Some((restart, outcome));
                }
            }
            Err(e) => failed_restarts.push((restart, e.to_string())),
        }
    }
    let (_, outcome) = best.ok_or_else(|| {
        Error::InvalidInput(format!("all {} see-saw restarts failed", config.restarts))
    })?;
    let report = metrics::deviation(&outcome.preps, config.solver_tol)?;
    Ok(SeesawResult {
        best_value: objective.of_report(&report),
        best_preps: outcome.preps,
        report,
        trace,
        restarts_used,
        failed_restarts,
    })
}

/// Largest `avg_pairwise - avg_set` (or its negative) found by the see-saw.
pub fn seesaw_deviation(config: &SeesawConfig) -> Result<SeesawResult> {
    maximize(config, &Objective::deviation(config.sign))
}

/// Which property is rewarded in a frontier scalarisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// maximise `avg_pairwise - kappa * avg_set`
    Pairwise,
    /// maximise `avg_set - kappa * avg_pairwise`
    Set,
}

impl Orientation {
    pub fn objective(self, kappa: f64) -> Objective {
        match self {
            Orientation::Pairwise => Objective {
                pairwise_weight: 1.0,
                set_weight: -kappa,
            },
            Orientation::Set => Objective {
                pairwise_weight: -kappa,
                set_weight: 1.0,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub kappa: f64,
    #[serde(skip)]
    pub orientation: Option<Orientation>,
    pub avg_set: f64,
    pub avg_pairwise: f64,
    pub deviation: f64,
    pub restarts_used: usize,
}

#[derive(Clone, Debug)]
pub struct FrontierSweep {
    pub points: Vec<FrontierPoint>,
    pub failures: Vec<(f64, Orientation, String)>,
}

/// 21 geometrically spaced values in `[0.05, 20]` preceded by 0.
pub fn default_kappa_grid() -> Vec<f64> {
    let (lo, hi) = (0.05f64, 20.0f64);
    let ratio = (hi / lo).powf(1.0 / 20.0);
    std::iter::once(0.0)
        .chain((0..21).map(|i| if i == 10 { 1.0 } else { lo * ratio.powi(i) }))
        .collect()
}

/// Scalarised frontier of the `(avg_set, avg_pairwise)` region: for every
/// kappa both orientations are optimised and the exact metrics of the best
/// set are recorded. Points are sorted by `avg_set`.
pub fn frontier_sweep(n: usize, d: usize, kappa_grid: &[f64], config: &SeesawConfig) -> Result<FrontierSweep> {
    if kappa_grid.is_empty() {
        return Err(Error::InvalidInput("empty kappa grid".into()));
    }
    if let Some(k) = kappa_grid.iter().find(|k| k.is_nan() || **k < 0.0) {
        return Err(Error::InvalidInput(format!("kappa {k} is negative")));
    }
    let config = SeesawConfig {
        n,
        dim: d,
        ..config.clone()
    };
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for &kappa in kappa_grid {
        for orientation in [Orientation::Pairwise, Orientation::Set] {
            match maximize(&config, &orientation.objective(kappa)) {
                Ok(res) => points.push(FrontierPoint {
                    kappa,
                    orientation: Some(orientation),
                    avg_set: res.report.avg_set,
                    avg_pairwise: res.report.avg_pairwise,
                    deviation: res.report.deviation,
                    restarts_used: res.restarts_used,
                }),
                Err(e) => failures.push((kappa, orientation, e.to_string())),
            }
        }
    }
    points.sort_by(|a, b| a.avg_set.total_cmp(&b.avg_set));
    Ok(FrontierSweep { points, failures })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub dim: usize,
    pub deviation_lb: f64,
    pub restarts_used: usize,
}

#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub points: Vec<ScalingPoint>,
    pub failures: Vec<(usize, String)>,
}

/// Dimension used for `n` preparations when none is given: `n - 1`, capped at 4.
pub fn default_scaling_dim(n: usize) -> usize {
    (n - 1).clamp(2, 4)
}

/// Best positive deviation for each `n` in `n_min..=n_max` at dimension `d`.
pub fn deviation_scaling(n_min: usize, n_max: usize, d: usize, config: &SeesawConfig) -> Result<ScalingRun> {
    deviation_scaling_with(n_min, n_max, |_| d, config)
}

pub fn deviation_scaling_with(
    n_min: usize,
    n_max: usize,
    dim_for: impl Fn(usize) -> usize,
    config: &SeesawConfig,
) -> Result<ScalingRun> {
    if !(3 <= n_min && n_min <= n_max && n_max <= 8) {
        return Err(Error::InvalidInput(format!(
            "need 3 <= n_min <= n_max <= 8, got {n_min}..={n_max}"
        )));
    }
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for n in n_min..=n_max {
        let cfg = SeesawConfig {
            n,
            dim: dim_for(n),
            sign: Sign::Positive,
            ..config.clone()
        };
        match seesaw_deviation(&cfg) {
            Ok(res) => points.push(ScalingPoint {
                n,
                dim: cfg.dim,
                deviation_lb: res.best_value,
                restarts_used: res.restarts_used,
            }),
            Err(e) => failures.push((n, e.to_string())),
        }
    }
    Ok(ScalingRun { points, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_grid_contains_zero_and_one() {
        let g = default_kappa_grid();
        assert_eq!(g.len(), 22);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[11], 1.0);
        assert!((g[1] - 0.05).abs() < 1e-15);
        assert!((g[21] - 20.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn restart_seeds_differ() {
        assert_ne!(task_seed(0, 0), task_seed(0, 1));
        assert_eq!(task_seed(5, 3), task_seed(5, 3));
    }

    #[test]
    fn config_validation() {
        assert!(SeesawConfig::new(2, 2, Sign::Positive).validate().is_err());
        assert!(SeesawConfig::new(3, 9, Sign::Positive).validate().is_err());
        let mut c = SeesawConfig::new(3, 2, Sign::Positive);
        c.restarts = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn short_run_is_monotone_and_consistent() {
        let mut c = SeesawConfig::new(3, 2, Sign::Positive);
        c.restarts = 2;
        c.max_iters = 10;
        let res = seesaw_deviation(&c).unwrap();
        assert!(res.trace.windows(2).all(|w| w[1] >= w[0]));
        let last = *res.trace.last().unwrap();
        assert!((last - res.best_value).abs() < 1e-6);
    }
}
