//! Semidefinite programming: the measurement-optimisation problem
//!
//! ```text
//!   max_M  sum_k Tr(rho~_k M_k)   s.t.  M_k >= 0,  sum_k M_k = I
//! ```
//!
//! with `rho~_k = sum_x c^x_k rho_x`, together with its dual
//! `min Tr(Y) s.t. Y >= rho~_k` and an independent certificate check.
//! Complex Hermitian blocks are embedded as real symmetric blocks of twice
//! the size and handed to the dense interior-point solver in [`ipm`].

pub mod ipm;
mod measurement;

pub use measurement::{
    build_measurement_sdp, solve_measurement_sdp, verify_certificate, CertificateReport,
    CoefficientTable, MeasurementSdp, SolverResult, SolverStatus, DEFAULT_TOL,
};

use crate::linalg::{derealify, hermitize, realify, ComplexMatrix};

/// Builder for LMIs whose blocks are complex Hermitian affine expressions
/// `H_j(y) = H_j0 + sum_i y_i H_ij >= 0`.
#[derive(Clone, Debug)]
pub struct HermitianLmi {
    problem: ipm::LmiProblem,
}

impl HermitianLmi {
    pub fn new(block_dims: &[usize]) -> Self {
        Self {
            problem: ipm::LmiProblem::new(block_dims.iter().map(|d| 2 * d).collect()),
        }
    }

    /// New free scalar variable, maximised with weight `objective`.
    pub fn add_variable(&mut self, objective: f64) -> usize {
        self.problem.add_variable(objective)
    }

    pub fn add_objective(&mut self, var: usize, objective: f64) {
        self.problem.add_objective(var, objective);
    }

    pub fn add_constant(&mut self, block: usize, h: &ComplexMatrix) {
        self.problem.add_constant(block, &realify(h));
    }

    pub fn add_term(&mut self, var: usize, block: usize, h: &ComplexMatrix) {
        self.problem.add_slack_term(var, block, &realify(h));
    }

    pub fn solve(&self, options: &ipm::IpmOptions) -> HermitianSolution {
        let raw = ipm::solve(&self.problem, options);
        let multipliers = raw.x.iter().map(|x| hermitize(&derealify(x).scale(2.0))).collect();
        HermitianSolution { raw, multipliers }
    }
}

#[derive(Clone, Debug)]
pub struct HermitianSolution {
    pub raw: ipm::IpmSolution,
    /// Hermitian multiplier `W_j` of each block; `sum_j Tr(H_ij W_j) = -b_i`
    /// at optimality.
    pub multipliers: Vec<ComplexMatrix>,
}
