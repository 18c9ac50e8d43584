use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("subspace is not separating: rank of [H, iH] is {rank}, expected {expected}")]
    NotSeparating { rank: usize, expected: usize },

    #[error("subspace is not cyclic: rank of [H, iH] is {rank}, expected {expected}")]
    NotCyclic { rank: usize, expected: usize },

    #[error("subspace is not factorial (polariser has a kernel of dimension {kernel_dim})")]
    NotFactorial { kernel_dim: usize },

    #[error("modular operator eigenvalue {eigenvalue:.3e} lies within the guard band {guard:.1e} of 1")]
    Singularity { eigenvalue: f64, guard: f64 },

    #[error("form is not compatible: polariser norm {norm} exceeds 1")]
    Incompatible { norm: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular or numerically singular: {0}")]
    Singular(String),

    #[error("function violates the reality symmetry f(-t) = conj f(t) (defect {defect:.3e})")]
    FunctionSymmetry { defect: f64 },

    #[error("internal consistency check `{name}` failed: residual {residual:.3e} > {tolerance:.1e}")]
    Consistency {
        name: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("dotted constraint violated: |u^(0)| = {zero_mode:.3e} relative to norm {norm:.3e}")]
    DottedConstraint { zero_mode: f64, norm: f64 },

    #[error("packet support leaves the interval: |value| {value:.3e} at x = {x}")]
    Support { x: f64, value: f64 },

    #[error("Fock cutoff {cutoff} too small: remainder {remainder:.3e} > {tolerance:.1e}, need cutoff >= {required}")]
    Cutoff {
        cutoff: usize,
        required: usize,
        remainder: f64,
        tolerance: f64,
    },

    #[error("resolvent compression is ill-conditioned: cond {cond:.3e} > {limit:.1e}; refine the grid or raise m")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("discretization failure: {0}")]
    Discretization(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown quantity `{name}`; available: {available}")]
    UnknownQuantity { name: String, available: String },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: impl ToString, got: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        got: got.to_string(),
    }
}
