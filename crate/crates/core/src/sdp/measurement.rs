use serde::Serialize;

use super::ipm::{IpmOptions, IpmStatus};
use super::HermitianLmi;
use crate::error::{Error, Result};
use crate::linalg::{self, hermitize, identity, trace_product, ComplexMatrix};
use crate::quantum::{completeness_residual_of, PreparationSet, Povm, SOLVER_TOL};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Coefficients `c^x_k` of a success metric `sum_{x,k} c^x_k p(k|x)`,
/// stored as `c[k][x]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientTable {
    n: usize,
    outcome_labels: Vec<String>,
    c: Vec<Vec<f64>>,
}

impl CoefficientTable {
    pub fn new(n: usize, outcome_labels: Vec<String>, c: Vec<Vec<f64>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("coefficient table needs n >= 2, got {n}")));
        }
        if c.is_empty() {
            return Err(Error::InvalidInput("coefficient table has no outcomes".into()));
        }
        if outcome_labels.len() != c.len() {
            return Err(Error::SizeMismatch(format!(
                "{} labels for {} outcomes",
                outcome_labels.len(),
                c.len()
            )));
        }
        for row in &c {
            if row.len() != n {
                return Err(Error::SizeMismatch(format!("row of length {} for n = {n}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
        }
        Ok(Self { n, outcome_labels, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self) -> usize {
        self.c.len()
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    /// `c^x_k`.
    pub fn get(&self, k: usize, x: usize) -> f64 {
        self.c[k][x]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.c
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            outcome_labels: self.outcome_labels.clone(),
            c: self.c.iter().map(|r| r.iter().map(|v| v * s).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementSdp {
    dim: usize,
    outcome_labels: Vec<String>,
    reduced_operators: Vec<ComplexMatrix>,
}

impl MeasurementSdp {
    /// Builds the problem directly from `rho~_k`.
    pub fn from_reduced(reduced_operators: Vec<ComplexMatrix>, outcome_labels: Vec<String>) -> Result<Self> {
        if reduced_operators.is_empty() || reduced_operators.len() != outcome_labels.len() {
            return Err(Error::SizeMismatch("reduced operators and labels".into()));
        }
        let dim = linalg::ensure_square(&reduced_operators[0])?;
        for r in &reduced_operators {
            if r.nrows() != dim || r.ncols() != dim {
                return Err(Error::DimMismatch { expected: dim, found: r.nrows() });
            }
            let dev = linalg::hermitian_deviation(r);
            if dev > 1e-10 {
                return Err(Error::NotHermitian { max_deviation: dev });
            }
        }
        Ok(Self {
            dim,
            outcome_labels,
            reduced_operators: reduced_operators.iter().map(hermitize).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduced_operators(&self) -> &[ComplexMatrix] {
        &self.reduced_operators
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    /// `sum_k Tr(rho~_k M_k)`.
    pub fn objective(&self, elements: &[ComplexMatrix]) -> f64 {
        self.reduced_operators
            .iter()
            .zip(elements)
            .map(|(r, m)| trace_product(r, m))
            .sum()
    }

    /// Same problem with every `rho~_k` conjugated by `unitary`.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Self {
        Self {
            dim: self.dim,
            outcome_labels: self.outcome_labels.clone(),
            reduced_operators: self
                .reduced_operators
                .iter()
                .map(|r| hermitize(&(unitary * r * unitary.adjoint())))
                .collect(),
        }
    }
}

/// `rho~_k = sum_x c^x_k rho_x`.
pub fn build_measurement_sdp(preps: &PreparationSet, coeffs: &CoefficientTable) -> Result<MeasurementSdp> {
    if coeffs.n() != preps.len() {
        return Err(Error::SizeMismatch(format!(
            "coefficient table for n = {} applied to {} preparations",
            coeffs.n(),
            preps.len()
        )));
    }
    let dim = preps.dim();
    let reduced = coeffs
        .rows()
        .iter()
        .map(|row| {
            let mut acc = linalg::zeros(dim);
            for (cx, rho) in row.iter().zip(preps.states()) {
                if *cx != 0.0 {
                    acc += rho.matrix().scale(*cx);
                }
            }
            acc
        })
        .collect();
    MeasurementSdp::from_reduced(reduced, coeffs.outcome_labels().to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolverStatus {
    Optimal,
    MaxIterations,
    NumericalTrouble,
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub value: f64,
    pub povm: Povm,
    /// Dual operator `Y >= rho~_k`; `Tr(Y)` upper-bounds every achievable value.
    pub dual_operator: ComplexMatrix,
    pub gap: f64,
    pub status: SolverStatus,
    pub iterations: usize,
}

impl SolverResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolverStatus::Optimal
    }

    pub fn require_optimal(self) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::Solver {
                status: self.status,
                gap: self.gap,
            })
        }
    }
}

pub fn solve_measurement_sdp(sdp: &MeasurementSdp, tol: f64) -> SolverResult {
    let tol = tol.max(1e-10);
    let d = sdp.dim;
    let k_count = sdp.reduced_operators.len();
    let labels = sdp.outcome_labels.clone();

    if k_count == 1 {
        let y = sdp.reduced_operators[0].clone();
        let value = linalg::real_trace(&y);
        return SolverResult {
            value,
            povm: Povm::from_parts(vec![identity(d)], labels),
            dual_operator: y,
            gap: 0.0,
            status: SolverStatus::Optimal,
            iterations: 0,
        };
    }

    let basis = linalg::hermitian_basis(d);
    let mut lmi = HermitianLmi::new(&vec![d; k_count]);
    let vars: Vec<usize> = basis
        .iter()
        .map(|e| lmi.add_variable(-linalg::real_trace(e)))
        .collect();
    for (k, r) in sdp.reduced_operators.iter().enumerate() {
        lmi.add_constant(k, &(-r));
        for (&v, e) in vars.iter().zip(&basis) {
            lmi.add_term(v, k, e);
        }
    }
    let options = IpmOptions {
        tol: tol * 0.1,
        ..IpmOptions::default()
    };
    let sol = lmi.solve(&options);

    let mut elements = sol.multipliers;
    let mut status = match sol.raw.status {
        IpmStatus::Converged | IpmStatus::Stalled => SolverStatus::Optimal,
        IpmStatus::MaxIterations => SolverStatus::MaxIterations,
        IpmStatus::Breakdown => SolverStatus::NumericalTrouble,
    };

    let mut residual = identity(d);
    for m in &elements {
        residual -= m;
    }
    if linalg::max_abs_entry(&residual) <= SOLVER_TOL {
        let last = elements.len() - 1;
        elements[last] = hermitize(&(&elements[last] + residual));
    } else if status == SolverStatus::Optimal {
        status = SolverStatus::NumericalTrouble;
    }
    let povm_min = elements
        .iter()
        .map(linalg::min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    if povm_min < -SOLVER_TOL && status == SolverStatus::Optimal {
        status = SolverStatus::NumericalTrouble;
    }

    let mut y = linalg::zeros(d);
    for (coef, e) in sol.raw.y.iter().zip(&basis) {
        y += e.scale(*coef);
    }
    let shift = sdp
        .reduced_operators
        .iter()
        .map(|r| linalg::min_eigenvalue(&(&y - r)))
        .fold(f64::INFINITY, f64::min);
    if shift < 0.0 {
        y += identity(d).scale(-shift);
    }

    let value = sdp.objective(&elements);
    let mut gap = linalg::real_trace(&y) - value;
    if gap < 0.0 && gap > -1e-12 {
        gap = 0.0;
    }
    if status == SolverStatus::Optimal && (gap.is_nan() || gap.abs() > tol) {
        status = SolverStatus::NumericalTrouble;
    }

    SolverResult {
        value,
        povm: Povm::from_parts(elements, labels),
        dual_operator: y,
        gap,
        status,
        iterations: sol.raw.iterations,
    }
}

/// Independent check of a solver result against the problem data.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    /// `min_k lambda_min(Y - rho~_k)`.
    pub dual_min_eigenvalue: f64,
    pub completeness_residual: f64,
    pub povm_min_eigenvalue: f64,
    /// `sum_k Tr(rho~_k M_k)` recomputed from the POVM.
    pub primal_value: f64,
    pub dual_value: f64,
    pub duality_gap: f64,
    pub certified: bool,
}

pub fn verify_certificate(res: &SolverResult, sdp: &MeasurementSdp, tol: f64) -> CertificateReport {
    let elements = res.povm.elements();
    let consistent = elements.len() == sdp.reduced_operators.len()
        && res.dual_operator.nrows() == sdp.dim
        && elements.iter().all(|m| m.nrows() == sdp.dim);
    if !consistent {
        return CertificateReport {
            dual_min_eigenvalue: f64::NEG_INFINITY,
            completeness_residual: f64::INFINITY,
            povm_min_eigenvalue: f64::NEG_INFINITY,
            primal_value: f64::NAN,
            dual_value: f64::NAN,
            duality_gap: f64::INFINITY,
            certified: false,
        };
    }
    let dual_min_eigenvalue = sdp
        .reduced_operators
        .iter()
        .map(|r| linalg::min_eigenvalue(&(&res.dual_operator - r)))
        .fold(f64::INFINITY, f64::min);
    let completeness_residual = completeness_residual_of(elements);
    let povm_min_eigenvalue = elements
        .iter()
        .map(linalg::min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    let primal_value = sdp.objective(elements);
    let dual_value = linalg::real_trace(&res.dual_operator);
    let duality_gap = (dual_value - primal_value).abs();
    let certified = dual_min_eigenvalue >= -tol
        && completeness_residual <= tol
        && povm_min_eigenvalue >= -tol
        && duality_gap <= 10.0 * tol
        && (primal_value - res.value).abs() <= 10.0 * tol;
    CertificateReport {
        dual_min_eigenvalue,
        completeness_residual,
        povm_min_eigenvalue,
        primal_value,
        dual_value,
        duality_gap,
        certified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{basis_states, haar_random_pure, helstrom_pair, trine_states};

    fn helstrom_table() -> CoefficientTable {
        CoefficientTable::new(
            2,
            vec!["0".into(), "1".into()],
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
        )
        .unwrap()
    }

    fn trine_guessing() -> MeasurementSdp {
        let third = 1.0 / 3.0;
        let table = CoefficientTable::new(
            3,
            vec!["0".into(), "1".into(), "2".into()],
            vec![vec![third, 0.0, 0.0], vec![0.0, third, 0.0], vec![0.0, 0.0, third]],
        )
        .unwrap();
        build_measurement_sdp(&trine_states(), &table).unwrap()
    }

    #[test]
    fn reduced_operators_follow_coefficients() {
        let b = basis_states(2, 2);
        let sdp = build_measurement_sdp(&b, &helstrom_table()).unwrap();
        assert!((&sdp.reduced_operators()[0] - b.states()[0].matrix().scale(0.5)).norm() < 1e-15);
        let zero = CoefficientTable::new(2, vec!["a".into()], vec![vec![0.0, 0.0]]).unwrap();
        let sdp = build_measurement_sdp(&b, &zero).unwrap();
        assert_eq!(sdp.reduced_operators()[0].norm(), 0.0);
        let sdp = trine_guessing();
        let t = trine_states();
        for k in 0..3 {
            assert!((&sdp.reduced_operators()[k] - t.states()[k].matrix().unscale(3.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(matches!(
            build_measurement_sdp(&trine_states(), &helstrom_table()),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn single_outcome_is_trivial() {
        let rho = haar_random_pure(3, 1);
        let sdp = MeasurementSdp::from_reduced(vec![rho.matrix().clone()], vec!["only".into()]).unwrap();
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!((res.value - 1.0).abs() < 1e-14);
        assert_eq!(res.povm.elements()[0], identity(3));
        let cert = verify_certificate(&res, &sdp, 1e-12);
        assert!(cert.certified);
        assert_eq!(cert.dual_min_eigenvalue, 0.0);
        assert_eq!(cert.completeness_residual, 0.0);
    }

    #[test]
    fn orthogonal_pair_is_perfectly_distinguishable() {
        let b = basis_states(2, 2);
        let sdp = build_measurement_sdp(&b, &helstrom_table()).unwrap();
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!((res.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn trine_pair_matches_closed_form() {
        let t = trine_states();
        let pair = t.pair(0, 1);
        let sdp = build_measurement_sdp(&pair, &helstrom_table()).unwrap();
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        let expected = (2.0 + 3f64.sqrt()) / 4.0;
        assert!((res.value - expected).abs() < 1e-7);
        assert!((res.value - helstrom_pair(&t.states()[0], &t.states()[1]).unwrap()).abs() < 1e-7);
        assert!(verify_certificate(&res, &sdp, 1e-8).certified);
    }

    #[test]
    fn trine_guessing_value() {
        let sdp = trine_guessing();
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        assert_eq!(res.status, SolverStatus::Optimal);
        assert!((res.value - 2.0 / 3.0).abs() < 1e-8);
        assert!(res.gap >= 0.0 && res.gap <= DEFAULT_TOL);
        assert!(verify_certificate(&res, &sdp, 1e-8).certified);
    }

    #[test]
    fn zero_dual_is_not_certified() {
        let sdp = trine_guessing();
        let mut res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        res.dual_operator = linalg::zeros(2);
        let cert = verify_certificate(&res, &sdp, 1e-8);
        assert!(!cert.certified);
        assert!((cert.dual_min_eigenvalue + 1.0 / 3.0).abs() < 1e-12);
    }
}
