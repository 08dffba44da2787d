//! Removing the part of the state space a perturbation cannot see.

use num_complex::Complex;

use crate::error::Result;
use crate::linalg::{eigenvalues, orthonormal_complement, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::{controllable_subspace, HamiltonianMatrix};
use crate::tolerance::Tolerances;

use super::direction::PerturbationDirection;

/// Result of splitting off the unobservable part of `(F, K + Δ₁₁)`.
///
/// In the basis `U = [U₁ U₂]` (unobservable part first) `F` is block upper
/// triangular, `K` and `Δ₁₁` vanish outside their `(2,2)` blocks, and the
/// eigenvalues of `F₁₁` and `−F₁₁ᴴ` are unaffected by `tJΔ` for every `t`.
#[derive(Clone, Debug)]
pub struct UnobservableReduction<T> {
    pub u: ComplexMatrix<T>,
    /// Order of the unobservable block `F₁₁`.
    pub n_frozen: usize,
    /// `Λ(F₁₁) ∪ Λ(−F₁₁ᴴ)`.
    pub frozen_spectrum: Vec<Complex<T>>,
    /// `[[F₂₂, G₂₂], [−K₂₂, −F₂₂ᴴ]]`.
    pub reduced: HamiltonianMatrix<T>,
    /// `(Δ̃₂₂, Δ̃₄₂, Δ̃₄₄)`, the direction acting on the reduced problem.
    pub reduced_direction: PerturbationDirection<T>,
}

pub fn remove_unobservable<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
) -> Result<UnobservableReduction<T>> {
    remove_unobservable_with(h0, d, &Tolerances::default())
}

pub fn remove_unobservable_with<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    tol: &Tolerances<T>,
) -> Result<UnobservableReduction<T>> {
    let n = h0.n();
    let c = h0.k() + d.delta11();
    // observable subspace of (F, C) = controllable subspace of (Fᴴ, Cᴴ)
    let obs = controllable_subspace(&h0.f().adjoint(), &c, tol.rank);
    let unobs = orthonormal_complement(&obs);
    let n1 = unobs.cols();
    let u = unobs.hstack(&obs);
    let f = &(&u.adjoint() * h0.f()) * &u;
    let g = (&(&u.adjoint() * h0.g()) * &u).hermitian_part();
    let k = (&(&u.adjoint() * h0.k()) * &u).hermitian_part();
    let dt = d.congruence(&u);
    let n2 = n - n1;
    let f11 = f.submatrix(0, 0, n1, n1);
    let mut frozen = eigenvalues(&f11)?;
    let mirrored: Vec<_> = frozen.iter().map(|z| -z.conj()).collect();
    frozen.extend(mirrored);
    let sub = |m: &ComplexMatrix<T>| m.submatrix(n1, n1, n2, n2);
    let reduced = HamiltonianMatrix::from_blocks(sub(&f), sub(&g), sub(&k))?;
    let reduced_direction = PerturbationDirection::new_with(sub(dt.delta11()), sub(dt.delta21()), sub(dt.delta22()), tol)?;
    Ok(UnobservableReduction { u, n_frozen: n1, frozen_spectrum: frozen, reduced, reduced_direction })
}
