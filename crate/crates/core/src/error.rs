use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Magnitudes are reported as `f64` regardless of the scalar field so the
/// error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Schur iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("Schur reordering breakdown: eigenvalues {0} and {1} are numerically identical but split by the selection")]
    SwapBreakdown(String, String),
    #[error("matrix is numerically singular (reciprocal condition {rcond:.3e})")]
    Singular { rcond: f64 },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("{what} is not positive definite (smallest eigenvalue {margin:.3e})")]
    NotPositiveDefinite { what: &'static str, margin: f64 },
    #[error("{what} is not positive semidefinite (smallest eigenvalue {margin:.3e})")]
    NotSemidefinite { what: &'static str, margin: f64 },
    #[error("eigenvalue {0} lies on the closed negative real axis")]
    BranchCut(String),
    #[error("spectra overlap (separation {gap:.3e}); the equation has no unique solution")]
    SpectrumOverlap { gap: f64 },
    #[error("selected {got} eigenvalues, expected {expected}")]
    SelectionSize { expected: usize, got: usize },
    #[error("selected invariant subspace is not Lagrangian (isotropy defect {defect:.3e})")]
    NotLagrangian { defect: f64 },
    #[error("W1 block of the Lagrangian basis is singular (reciprocal condition {rcond:.3e})")]
    W1Singular { rcond: f64 },
    #[error("matrix is not asymptotically stable (max real part {max_real:.3e})")]
    Unstable { max_real: f64 },
    #[error("eigenvalue with real part {re:.3e} straddles the imaginary-axis band {tol:.3e}")]
    GapViolation { re: f64, tol: f64 },
    #[error("candidate is not a solution of the Riccati inequality (largest residual eigenvalue {max_eig:.3e})")]
    NotAriSolution { max_eig: f64 },
    #[error("iteration failed to converge: {0}")]
    IterationFailed(String),
    #[error("step t = {t:.3e} exceeds the decoupling bound {bound:.3e}")]
    StepTooLarge { t: f64, bound: f64 },
    #[error("perturbation budget of {0} legs exhausted before reaching a vertex")]
    BudgetExhausted(usize),
    #[error("no admissible freezing direction: {0}")]
    NoFreezingDirection(String),
    #[error("residual {residual:.3e} exceeds the acceptance bound {bound:.3e}")]
    Residual { residual: f64, bound: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
