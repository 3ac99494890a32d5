use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("operators {i} and {j} do not commute: defect {defect:e} exceeds {tol:e}")]
    Commutation {
        i: usize,
        j: usize,
        defect: f64,
        tol: f64,
    },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("function undefined at point {point:?}")]
    Evaluation { point: Vec<f64> },

    #[error("function is not {iota}-increasing: f({lower:?}) > f({upper:?})")]
    Monotonicity {
        iota: usize,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tuple component {index} is not positive")]
    Positivity { index: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("operator is not normal: defect {defect:e} exceeds {tol:e}")]
    Normality { defect: f64, tol: f64 },

    #[error("operator {index} is not a projection")]
    NotProjection { index: usize },

    #[error("{count} atoms exceed the enumeration cap of {cap}")]
    CapExceeded { count: usize, cap: usize },

    #[error("lower set has no generators")]
    EmptyGenerators,

    #[error("total masses differ: {mass1} vs {mass2}")]
    MassMismatch { mass1: f64, mass2: f64 },

    #[error("box corners are not ordered: {a:?} is not below {b:?}")]
    BoxOrder { a: Vec<f64>, b: Vec<f64> },

    #[error("resolution of the identity fails axiom {axiom}: {detail}")]
    Validation { axiom: char, detail: String },

    #[error("index {index} out of range (length {len})")]
    Index { index: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
