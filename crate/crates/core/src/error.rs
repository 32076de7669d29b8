use thiserror::Error;

/// Errors reported by state constructors and transformations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "matrix is not Hermitian: max |a_ij - conj(a_ji)| = {max_asymmetry:.3e} exceeds {tol:.1e}"
    )]
    NotHermitian { max_asymmetry: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace {trace} outside (0, 1]")]
    TraceOutOfRange { trace: f64 },

    #[error("matrix is not unitary: max |(U U†)_ij - δ_ij| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("Bloch vector norm {norm} exceeds the unit ball")]
    OutsideBlochBall { norm: f64 },

    #[error("state vector norm {norm} is not 1")]
    NotNormalized { norm: f64 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
