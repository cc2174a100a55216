//! Quantum preparations and measurements.
//!
//! A [`DensityOperator`] is a Hermitian, positive semidefinite, unit-trace
//! matrix; a [`Povm`] is a list of positive semidefinite effects summing to
//! the identity. [`PreparationSet`] groups `n >= 2` states of a common
//! dimension and is the input of every distinguishability computation.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, ensure_square, hermitian_deviation, identity, real_trace, trace_norm, ComplexMatrix,
};

/// Tolerance used for exact constructions.
pub const EXACT_TOL: f64 = 1e-10;
/// Tolerance applied to solver-produced operators.
pub const SOLVER_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        validate_density(matrix, tol)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim).unscale(dim as f64),
        }
    }

    pub fn pure(vector: &DVector<linalg::Complex64>) -> Self {
        Self {
            matrix: linalg::projector(vector),
        }
    }

    /// Nearest density operator in the sense of eigenvalue clipping: the
    /// Hermitian part is taken, negative eigenvalues are zeroed and the
    /// trace is renormalised. Used to clean solver output.
    pub fn project(m: &ComplexMatrix) -> Result<Self> {
        ensure_square(m)?;
        let clipped = linalg::spectral_map(m, |v| v.max(0.0));
        let tr = real_trace(&clipped);
        if tr <= 0.0 {
            return Err(Error::BadTrace { trace: tr });
        }
        Ok(Self {
            matrix: linalg::hermitize(&clipped.unscale(tr)),
        })
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Self {
        Self {
            matrix: linalg::hermitize(&(unitary * &self.matrix * unitary.adjoint())),
        }
    }
}

/// Returns the matrix as a [`DensityOperator`] if it is Hermitian, PSD and
/// of unit trace within `tol`. The matrix is stored unchanged.
pub fn validate_density(m: ComplexMatrix, tol: f64) -> Result<DensityOperator> {
    ensure_square(&m)?;
    let dev = hermitian_deviation(&m);
    if dev > tol {
        return Err(Error::NotHermitian { max_deviation: dev });
    }
    let trace = real_trace(&m);
    let min_eigenvalue = linalg::min_eigenvalue(&m);
    if min_eigenvalue < -tol {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    if (trace - 1.0).abs() > tol {
        return Err(Error::BadTrace { trace });
    }
    Ok(DensityOperator { matrix: m })
}

#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    outcome_labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, outcome_labels: Vec<String>, tol: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidInput("a POVM needs at least one element".into()));
        }
        if elements.len() != outcome_labels.len() {
            return Err(Error::SizeMismatch(format!(
                "{} POVM elements but {} labels",
                elements.len(),
                outcome_labels.len()
            )));
        }
        let dim = ensure_square(&elements[0])?;
        for e in &elements {
            let d = ensure_square(e)?;
            if d != dim {
                return Err(Error::DimMismatch { expected: dim, found: d });
            }
            let dev = hermitian_deviation(e);
            if dev > tol {
                return Err(Error::NotHermitian { max_deviation: dev });
            }
            let min_eigenvalue = linalg::min_eigenvalue(e);
            if min_eigenvalue < -tol {
                return Err(Error::NotPsd { min_eigenvalue });
            }
        }
        let residual = completeness_residual_of(&elements);
        if residual > tol {
            return Err(Error::IncompletePovm { residual });
        }
        Ok(Self {
            elements,
            outcome_labels,
        })
    }

    /// Unchecked constructor for solver output; the caller reports validity
    /// through its own status.
    pub(crate) fn from_parts(elements: Vec<ComplexMatrix>, outcome_labels: Vec<String>) -> Self {
        Self {
            elements,
            outcome_labels,
        }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual_of(&self.elements)
    }

    /// Born-rule probability `Tr(rho M_k)`.
    pub fn probability(&self, rho: &DensityOperator, k: usize) -> f64 {
        linalg::trace_product(rho.matrix(), &self.elements[k])
    }
}

/// Max entry of `|sum_k M_k - I|`.
pub fn completeness_residual_of(elements: &[ComplexMatrix]) -> f64 {
    let dim = elements[0].nrows();
    let mut sum = -identity(dim);
    for e in elements {
        sum += e;
    }
    linalg::max_abs_entry(&sum)
}

#[derive(Clone, Debug)]
pub struct PreparationSet {
    states: Vec<DensityOperator>,
}

impl PreparationSet {
    pub fn new(states: Vec<DensityOperator>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a preparation set needs at least 2 states, got {}",
                states.len()
            )));
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn pair(&self, i: usize, j: usize) -> Self {
        Self {
            states: vec![self.states[i].clone(), self.states[j].clone()],
        }
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            states: order.iter().map(|&i| self.states[i].clone()).collect(),
        }
    }

    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Self {
        Self {
            states: self.states.iter().map(|s| s.conjugate(unitary)).collect(),
        }
    }

    pub fn to_json(&self) -> StatesFile {
        StatesFile::from(self)
    }
}

/// `(I + n . sigma) / 2`.
pub fn bloch_qubit(n: [f64; 3]) -> Result<DensityOperator> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::BlochVectorTooLong { norm });
    }
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + n[2]), 0.0),
            c(0.5 * n[0], -0.5 * n[1]),
            c(0.5 * n[0], 0.5 * n[1]),
            c(0.5 * (1.0 - n[2]), 0.0),
        ],
    );
    Ok(DensityOperator { matrix: m })
}

/// Three pure qubit states on an equilateral triangle of the Bloch sphere's
/// equator, starting at `[1, 0, 0]`.
pub fn trine_states() -> PreparationSet {
    let states = (0..3)
        .map(|x| {
            let angle = 2.0 * PI * x as f64 / 3.0;
            bloch_qubit([angle.cos(), angle.sin(), 0.0]).expect("unit Bloch vector")
        })
        .collect();
    PreparationSet { states }
}

/// Four pure qubit states on the vertices of a regular tetrahedron,
/// `(1,1,1)`, `(1,-1,-1)`, `(-1,1,-1)`, `(-1,-1,1)` over `sqrt 3`.
pub fn tetrahedron_states() -> PreparationSet {
    let s = 1.0 / 3f64.sqrt();
    let vertices = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let states = vertices
        .iter()
        .map(|v| bloch_qubit([v[0] * s, v[1] * s, v[2] * s]).expect("unit Bloch vector"))
        .collect();
    PreparationSet { states }
}

/// `n` copies of the maximally mixed state.
pub fn identical_states(n: usize, dim: usize) -> PreparationSet {
    PreparationSet {
        states: vec![DensityOperator::maximally_mixed(dim); n.max(2)],
    }
}

/// Orthonormal computational-basis states `|0>, ..., |n-1>` in dimension `dim >= n`.
pub fn basis_states(n: usize, dim: usize) -> PreparationSet {
    let states = (0..n)
        .map(|i| {
            let mut m = linalg::zeros(dim);
            m[(i, i)] = c(1.0, 0.0);
            DensityOperator { matrix: m }
        })
        .collect();
    PreparationSet { states }
}

/// Seed of task `index` derived from a base seed: `seed ^ splitmix64(index + 1)`.
pub fn task_seed(seed: u64, index: u64) -> u64 {
    let mut z = index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    seed ^ (z ^ (z >> 31))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> linalg::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Haar-random pure state: a normalised complex Gaussian vector.
pub fn haar_random_pure(d: usize, seed: u64) -> DensityOperator {
    haar_random_pure_with(d, &mut seeded_rng(seed))
}

pub fn haar_random_pure_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let v = DVector::from_fn(d, |_, _| gaussian_complex(rng));
    DensityOperator::pure(&v)
}

/// Hilbert-Schmidt random mixed state `G G^dagger / Tr(G G^dagger)` with
/// `G` a complex Ginibre matrix.
pub fn hs_random_mixed(d: usize, seed: u64) -> DensityOperator {
    hs_random_mixed_with(d, &mut seeded_rng(seed))
}

pub fn hs_random_mixed_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let w = &g * g.adjoint();
    let tr = real_trace(&w);
    DensityOperator {
        matrix: linalg::hermitize(&w.unscale(tr)),
    }
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix with
/// the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Optimal success probability of discriminating two equiprobable states,
/// `1/2 + ||rho_1 - rho_2||_1 / 4`.
pub fn helstrom_pair(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let diff = linalg::hermitize(&(rho1.matrix() - rho2.matrix()));
    Ok(0.5 + 0.25 * trace_norm(&diff)?)
}

/// The two-outcome measurement attaining [`helstrom_pair`]: the projector
/// onto the positive part of `rho_1 - rho_2` and its complement.
pub fn helstrom_measurement(rho1: &DensityOperator, rho2: &DensityOperator) -> [ComplexMatrix; 2] {
    let p = linalg::positive_part_projector(&(rho1.matrix() - rho2.matrix()));
    let q = identity(p.nrows()) - &p;
    [p, q]
}

/// On-disk preparation-set format: `{"dim": d, "states": [[[[re, im], ...], ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StatesFile {
    pub dim: usize,
    pub states: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&PreparationSet> for StatesFile {
    fn from(set: &PreparationSet) -> Self {
        let dim = set.dim();
        let states = set
            .states()
            .iter()
            .map(|s| {
                (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| {
                                let z = s.matrix()[(i, j)];
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        StatesFile { dim, states }
    }
}

impl StatesFile {
    pub fn to_preparation_set(&self, tol: f64) -> Result<PreparationSet> {
        let mut states = Vec::with_capacity(self.states.len());
        for (x, rows) in self.states.iter().enumerate() {
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(Error::InvalidInput(format!(
                    "state {x} is not a {d}x{d} matrix",
                    d = self.dim
                )));
            }
            let m = ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
                let [re, im] = rows[i][j];
                c(re, im)
            });
            states.push(validate_density(m, tol)?);
        }
        PreparationSet::new(states)
    }
}
