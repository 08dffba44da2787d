//! Membership of a perturbation in the feasible region: the set of
//! `Δ ≥ 0` for which the ARE of `H + JΔ` keeps a Hermitian solution.

use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::riccati::solve_with_selection;
use crate::scalar::Real;
use crate::structured::{HamiltonianMatrix, Selection};
use crate::tolerance::Tolerances;

use super::direction::{perturbed_hamiltonian, PerturbationDirection};
use super::spectrum::{axis_clusters, spectrum_snapshot, SpectrumSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Boundary => "boundary",
            Self::Exterior => "exterior",
        }
    }

    /// Interior or boundary.
    pub fn is_feasible(self) -> bool {
        self != Self::Exterior
    }
}

#[derive(Clone, Debug)]
pub struct RegionVerdict<T> {
    pub membership: Membership,
    /// `min |Re λ(H + JΔ)|`; `None` when `Δ` was rejected before assembly.
    pub min_abs_re: Option<T>,
    /// Eigenvalues in axis clusters.
    pub axis_count: usize,
    pub snapshot: Option<SpectrumSnapshot<T>>,
    /// Residual of the computed solution, when one was found.
    pub residual: Option<T>,
    /// Why no solution was accepted.
    pub failure: Option<Error>,
}

pub fn region_membership<T: Real>(h: &HamiltonianMatrix<T>, d: &PerturbationDirection<T>) -> RegionVerdict<T> {
    region_membership_with(h, d, &Tolerances::default())
}

pub fn region_membership_with<T: Real>(
    h: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    tol: &Tolerances<T>,
) -> RegionVerdict<T> {
    let exterior = |failure: Error, min_abs_re: Option<T>, axis_count, snapshot| RegionVerdict {
        membership: Membership::Exterior,
        min_abs_re,
        axis_count,
        snapshot,
        residual: None,
        failure: Some(failure),
    };
    let hd = match perturbed_hamiltonian(h, d, T::one()) {
        Ok(hd) => hd,
        Err(e) => return exterior(e, None, 0, None),
    };
    let imag_tol = hd.imag_tol(tol.imag);
    let snapshot = match spectrum_snapshot(&hd, T::one(), imag_tol) {
        Ok(s) => s,
        Err(e) => return exterior(e, None, 0, None),
    };
    let axis_count = axis_clusters(&snapshot.eigenvalues, imag_tol).iter().map(Vec::len).sum();
    let min_abs_re = Some(snapshot.min_abs_re);
    let data = hd.riccati_data_unchecked();
    match solve_with_selection(&data, Selection::LeftHalf, tol) {
        Ok(x) => RegionVerdict {
            membership: if axis_count > 0 { Membership::Boundary } else { Membership::Interior },
            min_abs_re,
            axis_count,
            residual: Some(data.residual(&x).norm_fro()),
            snapshot: Some(snapshot),
            failure: None,
        },
        Err(e) => exterior(e, min_abs_re, axis_count, Some(snapshot)),
    }
}

/// Membership of `Δ = diag(Δ₁₁, 0)`; an indefinite `Δ₁₁` is exterior.
pub fn region_membership_delta11<T: Real>(h: &HamiltonianMatrix<T>, delta11: &ComplexMatrix<T>) -> RegionVerdict<T> {
    let tol = Tolerances::default();
    match PerturbationDirection::delta11_only(delta11.clone()) {
        Ok(d) => region_membership_with(h, &d, &tol),
        Err(e) => RegionVerdict {
            membership: Membership::Exterior,
            min_abs_re: None,
            axis_count: 0,
            snapshot: None,
            residual: None,
            failure: Some(e),
        },
    }
}

/// Signed distance-like margin of `(a, b, c)` to the closed-form region of
/// the reference Example 2 problem:
/// `min(a, 4 − a, b, 9 − b, ab − c², (a − 4)(b − 9) − c²)`.
pub fn example2_margin<T: Real>(a: T, b: T, c: T) -> T {
    let four = T::lit(4.0);
    let nine = T::lit(9.0);
    [a, four - a, b, nine - b, a * b - c * c, (a - four) * (b - nine) - c * c]
        .into_iter()
        .fold(T::infinity(), T::min)
}

/// Closed-form membership; `None` inside the shell `|margin| ≤ shell`.
pub fn example2_closed_form<T: Real>(a: T, b: T, c: T, shell: T) -> Option<Membership> {
    let m = example2_margin(a, b, c);
    if m > shell {
        Some(Membership::Interior)
    } else if m < -shell {
        Some(Membership::Exterior)
    } else {
        None
    }
}

/// Whether a numerical verdict agrees with the closed form (boundary counts
/// as feasible).
pub fn agrees_with_closed_form(numeric: Membership, closed: Membership) -> bool {
    numeric.is_feasible() == closed.is_feasible()
}
