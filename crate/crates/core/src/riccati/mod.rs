//! Riccati solvers and verifiers: extremal solutions, the block-wise
//! construction, inequality checks, the solution parametrization and
//! port-Hamiltonian realizations.

pub mod ari;
pub mod extremal;
pub mod parametrize;
pub mod passivity;
pub mod ph;
pub mod structured_solve;

pub use ari::{ari_residual, ari_residual_with, dual_riccati, AriResidual};
pub use extremal::{solve_extremal, solve_extremal_with, solve_with_selection, ExtremalSolutions};
pub use parametrize::{reduced_hamiltonian, solution_from_selection, solution_from_subspace};
pub use passivity::{
    lmi_matrix, passivity_verdict, passivity_verdict_with, CertificateSource, PassivityCertificate,
    PassivityDiagnostics, PassivityVerdict, SHIFT_LADDER,
};
pub use ph::{ph_realization, ph_realization_with, PHRealization};
pub use structured_solve::{
    solve_structured, solve_structured_with, StructuredSolveReport, StructuredStages, StructuredVerdict,
};
