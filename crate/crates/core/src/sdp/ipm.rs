//! Dense primal-dual interior-point method for block-diagonal real SDPs.
//!
//! The problem is stored in linear-matrix-inequality form
//!
//! ```text
//!   (D)  maximise  b^T y   s.t.  S_j = C_j - sum_i y_i A_ij  >= 0   for every block j
//!   (P)  minimise  sum_j <C_j, X_j>  s.t.  sum_j <A_ij, X_j> = b_i,  X_j >= 0
//! ```
//!
//! and solved with the HKM search direction and a Mehrotra
//! predictor-corrector step from an infeasible start.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::linalg::RealMatrix;

#[derive(Clone, Debug)]
pub struct LmiProblem {
    block_dims: Vec<usize>,
    constant: Vec<RealMatrix>,
    /// Per variable: the blocks it touches and its coefficient matrix there.
    coefficients: Vec<Vec<(usize, RealMatrix)>>,
    objective: Vec<f64>,
}

impl LmiProblem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        let constant = block_dims.iter().map(|&n| RealMatrix::zeros(n, n)).collect();
        Self {
            block_dims,
            constant,
            coefficients: Vec::new(),
            objective: Vec::new(),
        }
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Adds a free variable with objective coefficient `b_i`; returns its index.
    pub fn add_variable(&mut self, objective: f64) -> usize {
        self.objective.push(objective);
        self.coefficients.push(Vec::new());
        self.objective.len() - 1
    }

    /// Adds `m` to the constant term `C_j`.
    pub fn add_constant(&mut self, block: usize, m: &RealMatrix) {
        self.constant[block] += m;
    }

    /// Makes variable `var` contribute `+coefficient * y_var` to block `block`'s
    /// slack, i.e. subtracts it from `A_ij`.
    pub fn add_slack_term(&mut self, var: usize, block: usize, coefficient: &RealMatrix) {
        self.add_coefficient(var, block, &(-coefficient));
    }

    /// Adds `m` to `A_ij`.
    pub fn add_coefficient(&mut self, var: usize, block: usize, m: &RealMatrix) {
        let entry = &mut self.coefficients[var];
        if let Some((_, a)) = entry.iter_mut().find(|(b, _)| *b == block) {
            *a += m;
        } else {
            entry.push((block, m.clone()));
        }
    }

    /// Adds `c` to the objective coefficient `b_i`.
    pub fn add_objective(&mut self, var: usize, c: f64) {
        self.objective[var] += c;
    }

    pub fn slack(&self, y: &[f64]) -> Vec<RealMatrix> {
        let mut s = self.constant.clone();
        for (i, terms) in self.coefficients.iter().enumerate() {
            for (j, a) in terms {
                s[*j] -= a.scale(y[i]);
            }
        }
        s
    }

    fn apply(&self, x: &[RealMatrix]) -> DVector<f64> {
        DVector::from_iterator(
            self.coefficients.len(),
            self.coefficients
                .iter()
                .map(|terms| terms.iter().map(|(j, a)| a.dot(&x[*j])).sum::<f64>()),
        )
    }
}

#[derive(Clone, Debug)]
pub struct IpmOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// Consecutive iterations without progress before giving up.
    pub stall_limit: usize,
    pub step_fraction: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 200,
            stall_limit: 3,
            step_fraction: 0.98,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpmStatus {
    Converged,
    MaxIterations,
    Stalled,
    Breakdown,
}

#[derive(Clone, Debug)]
pub struct IpmSolution {
    pub status: IpmStatus,
    pub y: Vec<f64>,
    pub x: Vec<RealMatrix>,
    pub s: Vec<RealMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
}

impl IpmSolution {
    fn merit(&self) -> f64 {
        self.relative_gap
            .max(self.primal_infeasibility)
            .max(self.dual_infeasibility)
    }
}

struct Iterate {
    x: Vec<RealMatrix>,
    s: Vec<RealMatrix>,
    y: DVector<f64>,
}

fn symmetric(m: RealMatrix) -> RealMatrix {
    (&m + m.transpose()).scale(0.5)
}

fn frobenius(ms: &[RealMatrix]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// Largest `alpha` with `m + alpha * dm` PSD, or `None` if unbounded.
fn max_step(chol: &Cholesky<f64, Dyn>, dm: &RealMatrix) -> Option<f64> {
    let l = chol.l();
    let linv_dm = l.solve_lower_triangular(dm)?;
    let w = l.solve_lower_triangular(&linv_dm.transpose())?;
    let lambda = SymmetricEigen::new(symmetric(w))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if lambda < 0.0 {
        Some(-1.0 / lambda)
    } else {
        None
    }
}

struct Residuals {
    rp: DVector<f64>,
    rd: Vec<RealMatrix>,
    primal_objective: f64,
    dual_objective: f64,
    relative_gap: f64,
    pinf: f64,
    dinf: f64,
    mu: f64,
}

pub fn solve(problem: &LmiProblem, options: &IpmOptions) -> IpmSolution {
    let p = problem.num_variables();
    let dims = &problem.block_dims;
    let total_dim: usize = dims.iter().sum();
    let b = DVector::from_column_slice(&problem.objective);
    let b_norm = b.norm();
    let c_norm = frobenius(&problem.constant);

    let mut a_max: f64 = 0.0;
    for terms in &problem.coefficients {
        a_max = a_max.max(terms.iter().map(|(_, a)| a.norm_squared()).sum::<f64>().sqrt());
    }
    let xi = dims
        .iter()
        .map(|&n| (n as f64).sqrt())
        .fold(10.0f64, f64::max)
        .max(
            problem
                .objective
                .iter()
                .map(|bi| (1.0 + bi.abs()) / (1.0 + a_max))
                .fold(0.0, f64::max)
                * 10.0,
        );
    let eta = 10.0f64.max(c_norm).max(a_max);

    let mut it = Iterate {
        x: dims.iter().map(|&n| RealMatrix::identity(n, n).scale(xi)).collect(),
        s: dims.iter().map(|&n| RealMatrix::identity(n, n).scale(eta)).collect(),
        y: DVector::zeros(p),
    };

    let residuals = |it: &Iterate| -> Residuals {
        let ax = problem.apply(&it.x);
        let rp = &b - ax;
        let mut rd = problem.slack(it.y.as_slice());
        for (r, s) in rd.iter_mut().zip(&it.s) {
            *r -= s;
        }
        let primal_objective: f64 = problem
            .constant
            .iter()
            .zip(&it.x)
            .map(|(c, x)| c.dot(x))
            .sum();
        let dual_objective = b.dot(&it.y);
        let xs: f64 = it.x.iter().zip(&it.s).map(|(x, s)| x.dot(s)).sum();
        Residuals {
            pinf: rp.norm() / (1.0 + b_norm),
            dinf: frobenius(&rd) / (1.0 + c_norm),
            rp,
            rd,
            relative_gap: (primal_objective - dual_objective).abs()
                / (1.0 + primal_objective.abs() + dual_objective.abs()),
            primal_objective,
            dual_objective,
            mu: xs / total_dim as f64,
        }
    };

    let snapshot = |it: &Iterate, r: &Residuals, status: IpmStatus, iterations: usize| IpmSolution {
        status,
        y: it.y.iter().copied().collect(),
        x: it.x.clone(),
        s: it.s.clone(),
        primal_objective: r.primal_objective,
        dual_objective: r.dual_objective,
        relative_gap: r.relative_gap,
        primal_infeasibility: r.pinf,
        dual_infeasibility: r.dinf,
        iterations,
    };

    let mut best: Option<IpmSolution> = None;
    let mut stall = 0usize;

    for iteration in 0..options.max_iterations {
        let r = residuals(&it);
        let current = snapshot(&it, &r, IpmStatus::Converged, iteration);
        let merit = current.merit();
        if merit <= options.tol {
            return current;
        }
        match &best {
            Some(prev) if merit >= prev.merit() * 0.999 => {
                stall += 1;
            }
            _ => {
                stall = 0;
                best = Some(current);
            }
        }
        if stall >= options.stall_limit {
            let mut out = best.expect("best iterate recorded");
            out.status = IpmStatus::Stalled;
            return out;
        }

        match newton_step(problem, &it, &r, options.step_fraction) {
            Some(next) => it = next,
            None => {
                let mut out = best.expect("best iterate recorded");
                out.status = IpmStatus::Breakdown;
                return out;
            }
        }
    }
    let r = residuals(&it);
    let last = snapshot(&it, &r, IpmStatus::MaxIterations, options.max_iterations);
    let mut out = match best {
        Some(prev) if prev.merit() < last.merit() => prev,
        _ => last,
    };
    out.status = IpmStatus::MaxIterations;
    out
}

fn newton_step(problem: &LmiProblem, it: &Iterate, r: &Residuals, step_fraction: f64) -> Option<Iterate> {
    let p = problem.num_variables();
    let nblocks = problem.block_dims.len();

    let x_chol: Vec<Cholesky<f64, Dyn>> = it
        .x
        .iter()
        .map(|x| Cholesky::new(symmetric(x.clone())))
        .collect::<Option<_>>()?;
    let s_chol: Vec<Cholesky<f64, Dyn>> = it
        .s
        .iter()
        .map(|s| Cholesky::new(symmetric(s.clone())))
        .collect::<Option<_>>()?;
    let z: Vec<RealMatrix> = s_chol.iter().map(|c| c.inverse()).collect();

    // Variables touching each block, with their coefficient matrices.
    let mut by_block: Vec<Vec<(usize, &RealMatrix)>> = vec![Vec::new(); nblocks];
    for (i, terms) in problem.coefficients.iter().enumerate() {
        for (j, a) in terms {
            by_block[*j].push((i, a));
        }
    }

    // Schur complement M_ik = sum_j <A_ij, X_j A_kj Z_j>.
    let mut schur = DMatrix::<f64>::zeros(p, p);
    for j in 0..nblocks {
        for &(k, ak) in &by_block[j] {
            let g = &it.x[j] * ak * &z[j];
            for &(i, ai) in &by_block[j] {
                schur[(i, k)] += ai.dot(&g);
            }
        }
    }
    let schur = symmetric(schur);
    let factor = SchurFactor::new(schur)?;

    // Direction for a given complementarity target `rc_z = Rc Z_j` per block.
    let direction = |rc_z: &[RealMatrix]| -> Option<(Vec<RealMatrix>, DVector<f64>, Vec<RealMatrix>)> {
        let mut rhs = r.rp.clone();
        let mut pre: Vec<RealMatrix> = Vec::with_capacity(nblocks);
        for j in 0..nblocks {
            let t = &rc_z[j] - &it.x[j] * &r.rd[j] * &z[j];
            for &(i, ai) in &by_block[j] {
                rhs[i] -= ai.dot(&t);
            }
            pre.push(t);
        }
        let dy = factor.solve(&rhs)?;
        let mut ds = r.rd.clone();
        for (i, terms) in problem.coefficients.iter().enumerate() {
            for (j, a) in terms {
                ds[*j] -= a.scale(dy[i]);
            }
        }
        let dx: Vec<RealMatrix> = (0..nblocks)
            .map(|j| {
                let mut t = pre[j].clone();
                for &(k, ak) in &by_block[j] {
                    t += (&it.x[j] * ak * &z[j]).scale(dy[k]);
                }
                symmetric(t)
            })
            .collect();
        Some((dx, dy, ds))
    };

    let step_lengths = |dx: &[RealMatrix], ds: &[RealMatrix]| -> (f64, f64) {
        let mut ap: f64 = 1.0;
        let mut ad: f64 = 1.0;
        for j in 0..nblocks {
            if let Some(a) = max_step(&x_chol[j], &dx[j]) {
                ap = ap.min(step_fraction * a);
            }
            if let Some(a) = max_step(&s_chol[j], &ds[j]) {
                ad = ad.min(step_fraction * a);
            }
        }
        (ap, ad)
    };

    // Predictor: Rc = -X S, so Rc Z = -X.
    let neg_x: Vec<RealMatrix> = it.x.iter().map(|x| -x).collect();
    let (dx_p, _, ds_p) = direction(&neg_x)?;
    let (ap, ad) = step_lengths(&dx_p, &ds_p);
    let total_dim: usize = problem.block_dims.iter().sum();
    let xs_pred: f64 = (0..nblocks)
        .map(|j| (&it.x[j] + dx_p[j].scale(ap)).dot(&(&it.s[j] + ds_p[j].scale(ad))))
        .sum();
    let mu = r.mu;
    let sigma = ((xs_pred / total_dim as f64) / mu).clamp(0.0, 1.0).powi(3);

    // Corrector: Rc = sigma mu I - X S - dXp dSp.
    let rc_z: Vec<RealMatrix> = (0..nblocks)
        .map(|j| z[j].scale(sigma * mu) - &it.x[j] - &dx_p[j] * &ds_p[j] * &z[j])
        .collect();
    let (dx, dy, ds) = direction(&rc_z)?;
    let (ap, ad) = step_lengths(&dx, &ds);

    let x = it.x.iter().zip(&dx).map(|(x, d)| symmetric(x + d.scale(ap))).collect();
    let s = it.s.iter().zip(&ds).map(|(s, d)| symmetric(s + d.scale(ad))).collect();
    let y = &it.y + dy.scale(ad);
    Some(Iterate { x, s, y })
}

enum SchurFactor {
    Cholesky(Cholesky<f64, Dyn>),
    Lu(nalgebra::LU<f64, Dyn, Dyn>),
}

impl SchurFactor {
    fn new(m: DMatrix<f64>) -> Option<Self> {
        if m.nrows() == 0 {
            return None;
        }
        match Cholesky::new(m.clone()) {
            Some(c) => Some(Self::Cholesky(c)),
            None => {
                let lu = m.lu();
                if lu.is_invertible() {
                    Some(Self::Lu(lu))
                } else {
                    None
                }
            }
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let sol = match self {
            Self::Cholesky(c) => c.solve(rhs),
            Self::Lu(lu) => lu.solve(rhs)?,
        };
        sol.iter().all(|v| v.is_finite()).then_some(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&DVector::from_column_slice(values))
    }

    #[test]
    fn scalar_lp() {
        // maximise y s.t. 2 - y >= 0 and y + 1 >= 0  ->  y = 2
        let mut pr = LmiProblem::new(vec![1, 1]);
        let y = pr.add_variable(1.0);
        pr.add_constant(0, &diag(&[2.0]));
        pr.add_coefficient(y, 0, &diag(&[1.0]));
        pr.add_constant(1, &diag(&[1.0]));
        pr.add_coefficient(y, 1, &diag(&[-1.0]));
        let sol = solve(&pr, &IpmOptions::default());
        assert_eq!(sol.status, IpmStatus::Converged);
        assert!((sol.y[0] - 2.0).abs() < 1e-8);
        assert!((sol.primal_objective - 2.0).abs() < 1e-8);
    }

    #[test]
    fn largest_eigenvalue() {
        // minimise t s.t. t I - A >= 0  ->  t = lambda_max(A)
        let a = RealMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let mut pr = LmiProblem::new(vec![3]);
        let t = pr.add_variable(-1.0);
        pr.add_constant(0, &(-&a));
        pr.add_slack_term(t, 0, &RealMatrix::identity(3, 3));
        let sol = solve(&pr, &IpmOptions::default());
        let expected = SymmetricEigen::new(a).eigenvalues.max();
        assert_eq!(sol.status, IpmStatus::Converged);
        assert!((sol.y[0] - expected).abs() < 1e-8, "{} vs {expected}", sol.y[0]);
        // the primal solution is the top eigenprojector
        assert!((sol.x[0].trace() - 1.0).abs() < 1e-8);
    }
}
