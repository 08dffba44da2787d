//! Semidefinite perturbation directions and the perturbed Hamiltonian
//! `H(t) = H₀ + tJΔ`.

use crate::error::{Error, Result};
use crate::linalg::{definiteness, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::HamiltonianMatrix;
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    Full,
    /// Only `Δ₁₁` (the block added to `K`) is nonzero.
    Delta11Only,
}

/// `Δ = [[Δ₁₁, Δ₂₁ᴴ], [Δ₂₁, Δ₂₂]] ≥ 0`.
///
/// Since `JΔ = [[Δ₂₁, Δ₂₂], [−Δ₁₁, −Δ₂₁ᴴ]]`, the perturbed Hamiltonian has
/// blocks `(F + tΔ₂₁, G + tΔ₂₂, K + tΔ₁₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationDirection<T> {
    delta11: ComplexMatrix<T>,
    delta21: ComplexMatrix<T>,
    delta22: ComplexMatrix<T>,
    restriction: Restriction,
}

impl<T: Real> PerturbationDirection<T> {
    pub fn new(delta11: ComplexMatrix<T>, delta21: ComplexMatrix<T>, delta22: ComplexMatrix<T>) -> Result<Self> {
        Self::new_with(delta11, delta21, delta22, &Tolerances::default())
    }

    pub fn new_with(
        delta11: ComplexMatrix<T>,
        delta21: ComplexMatrix<T>,
        delta22: ComplexMatrix<T>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        let n = delta11.rows();
        for (name, m) in [("Δ₁₁", &delta11), ("Δ₂₁", &delta21), ("Δ₂₂", &delta22)] {
            if m.shape() != (n, n) {
                return Err(Error::Dimension(format!("{name} is {:?}, expected ({n}, {n})", m.shape())));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let restriction = if delta21.norm_max() == T::zero() && delta22.norm_max() == T::zero() {
            Restriction::Delta11Only
        } else {
            Restriction::Full
        };
        let d = Self { delta11, delta21, delta22, restriction };
        let v = definiteness(&d.assembled(), tol.psd)?;
        if !v.kind.is_psd() {
            return Err(Error::NotSemidefinite { what: "perturbation Δ", margin: v.margin.as_f64() });
        }
        Ok(Self { delta11: d.delta11.hermitian_part(), delta22: d.delta22.hermitian_part(), ..d })
    }

    /// Direction touching only the `K` block.
    pub fn delta11_only(delta11: ComplexMatrix<T>) -> Result<Self> {
        let n = delta11.rows();
        Self::new(delta11, ComplexMatrix::zeros(n, n), ComplexMatrix::zeros(n, n))
    }

    /// Split an assembled `2n×2n` matrix.
    pub fn from_matrix(delta: &ComplexMatrix<T>) -> Result<Self> {
        if !delta.is_square() || !delta.rows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("Δ is {:?}, expected even square", delta.shape())));
        }
        let n = delta.rows() / 2;
        let h = delta.hermitian_part();
        Self::new(h.submatrix(0, 0, n, n), h.submatrix(n, 0, n, n), h.submatrix(n, n, n, n))
    }

    pub fn zero(n: usize) -> Self {
        let z = ComplexMatrix::zeros(n, n);
        Self { delta11: z.clone(), delta21: z.clone(), delta22: z, restriction: Restriction::Delta11Only }
    }

    pub fn n(&self) -> usize {
        self.delta11.rows()
    }

    pub fn delta11(&self) -> &ComplexMatrix<T> {
        &self.delta11
    }

    pub fn delta21(&self) -> &ComplexMatrix<T> {
        &self.delta21
    }

    pub fn delta22(&self) -> &ComplexMatrix<T> {
        &self.delta22
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    pub fn assembled(&self) -> ComplexMatrix<T> {
        ComplexMatrix::block2x2(&self.delta11, &self.delta21.adjoint(), &self.delta21, &self.delta22)
    }

    pub fn is_zero(&self) -> bool {
        self.assembled().norm_max() == T::zero()
    }

    /// `c·Δ` for `c ≥ 0`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            delta11: self.delta11.scale_real(c),
            delta21: self.delta21.scale_real(c),
            delta22: self.delta22.scale_real(c),
            restriction: self.restriction,
        }
    }

    /// `Δ + Δ'`, which stays semidefinite.
    pub fn sum(&self, other: &Self) -> Self {
        let restriction = if self.restriction == Restriction::Delta11Only && other.restriction == Restriction::Delta11Only {
            Restriction::Delta11Only
        } else {
            Restriction::Full
        };
        Self {
            delta11: &self.delta11 + &other.delta11,
            delta21: &self.delta21 + &other.delta21,
            delta22: &self.delta22 + &other.delta22,
            restriction,
        }
    }

    /// `diag(U, U)ᴴ·Δ·diag(U, U)`.
    pub fn congruence(&self, u: &ComplexMatrix<T>) -> Self {
        let c = |m: &ComplexMatrix<T>| &(&u.adjoint() * m) * u;
        Self {
            delta11: c(&self.delta11).hermitian_part(),
            delta21: c(&self.delta21),
            delta22: c(&self.delta22).hermitian_part(),
            restriction: self.restriction,
        }
    }
}

/// `H₀ + tJΔ`, kept in block form so the Hamiltonian structure is exact.
pub fn perturbed_hamiltonian<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    t: T,
) -> Result<HamiltonianMatrix<T>> {
    if d.n() != h0.n() {
        return Err(Error::Dimension(format!("direction of order {} for Hamiltonian of order {}", d.n(), h0.n())));
    }
    if t < T::zero() {
        return Err(Error::InvalidInput(format!("negative step t = {t}")));
    }
    HamiltonianMatrix::from_blocks(
        h0.f() + &d.delta21.scale_real(t),
        h0.g() + &d.delta22.scale_real(t),
        h0.k() + &d.delta11.scale_real(t),
    )
}
