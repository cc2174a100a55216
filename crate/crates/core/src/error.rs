use thiserror::Error;

use crate::sdp::SolverStatus;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |m - m^dagger| = {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix does not have unit trace (trace = {trace})")]
    BadTrace { trace: f64 },

    #[error("Bloch vector has norm {norm} > 1")]
    BlochVectorTooLong { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("subset size m = {m} is outside 1..={max}")]
    BadM { m: usize, max: usize },

    #[error("POVM elements do not sum to the identity (residual {residual:e})")]
    IncompletePovm { residual: f64 },

    #[error("invalid probability vector: {0}")]
    BadDistribution(String),

    #[error("SDP value {sdp} disagrees with closed form {closed_form} for pair ({i}, {j})")]
    OracleMismatch {
        i: usize,
        j: usize,
        sdp: f64,
        closed_form: f64,
    },

    #[error("solver finished with status {status:?} (gap {gap:e})")]
    Solver { status: SolverStatus, gap: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
