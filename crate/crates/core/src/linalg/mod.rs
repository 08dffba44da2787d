//! Dense complex linear algebra kernel.

pub mod dense;
pub mod hermitian;
pub mod matrix;
pub mod schur;
pub mod sqrtm;
pub mod sylvester;

pub use dense::{cholesky, inverse, lstsq_min_norm, norm2, orth, orthonormal_complement, rcond, solve, svd, Lu, Svd};
pub use hermitian::{
    definiteness, eigh, hermitian_inv_sqrt, hermitian_sqrt, loewner_leq, Definiteness, DefinitenessVerdict,
    HermitianEigen,
};
pub use matrix::ComplexMatrix;
pub use schur::{eigenvalues, order_schur, order_schur_mask, schur_decompose, SchurForm};
pub use sqrtm::principal_sqrt;
pub use sylvester::{solve_lyapunov, solve_sylvester, solve_sylvester_with, sylvester_residual, SylvesterSolution, SylvesterTol};
