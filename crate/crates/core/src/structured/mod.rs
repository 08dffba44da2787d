//! Problem construction, condensed forms, Lagrangian subspaces and the
//! imaginary-axis decoupling transform.

pub mod data;
pub mod decouple;
pub mod lagrangian;
pub mod staircase;

pub use data::{
    assemble_hamiltonian, from_state_space, hamiltonian_defect, symplectic_j, HamiltonianMatrix, RiccatiData,
    StateSpace,
};
pub use decouple::{decouple_imaginary, DecoupledForm};
pub use lagrangian::{
    hamiltonian_schur, hamiltonian_schur_with, lagrangian_subspace, lagrangian_subspace_with, HamiltonianSchur,
    LagrangianSubspace, Selection,
};
pub use staircase::{
    controllable_subspace, is_controllable, is_observable, staircase, staircase_with, CondensedForm, StaircaseVariant,
};
