//! Semidefinite perturbations `H(t) = H₀ + tJΔ` of Hamiltonian matrices and
//! the tracking of eigenvalues onto the imaginary axis.

pub mod critical;
pub mod direction;
pub mod jordan;
pub mod reduce;
pub mod region;
pub mod sampling;
pub mod slopes;
pub mod spectrum;
pub mod split;
pub mod vertex;

pub use critical::{boundedness_bound, critical_time, critical_time_with, CriticalOptions, CriticalTime};
pub use direction::{perturbed_hamiltonian, PerturbationDirection, Restriction};
pub use jordan::{
    default_t_grid, fractional_split_verify, log_grid, schur_complement_gammas, BranchDirection, BranchFit,
    FractionalReport, JordanTestCase, SplitCheck,
};
pub use reduce::{remove_unobservable, remove_unobservable_with, UnobservableReduction};
pub use region::{
    agrees_with_closed_form, example2_closed_form, example2_margin, region_membership, region_membership_delta11,
    region_membership_with, Membership, RegionVerdict,
};
pub use slopes::{first_order_slopes, FirstOrderSlopes};
pub use spectrum::{
    inertia_indices, spectrum_snapshot, symmetry_defect, ImaginaryCluster, InertiaIndices, InertiaSign,
    SpectrumSnapshot,
};
pub use split::{split_by_spectrum, SplitMethod, SplitResult};
pub use vertex::{
    vertex_path, vertex_path_with, CoordinateDirections, DirectionSource, PathLeg, PathSample, PerturbationPath,
    ProjectorDirections, SeededDirections, VertexOptions, VertexRecord, WishartDirections,
};
