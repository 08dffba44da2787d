//! Tolerance bundle shared by the solvers.
//!
//! Every threshold is relative: it is multiplied by a problem scale
//! (usually `1 + ‖·‖` of the relevant matrix) at the point of use.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Dead-band `|Re λ| ≤ imag·(1+‖H‖)` classifying eigenvalues as purely imaginary.
    pub imag: T,
    /// Singular values below `rank·max(n,m)·scale` count as zero in staircase rank decisions.
    pub rank: T,
    /// Riccati residuals below `residual·scale` count as zero.
    pub residual: T,
    /// Maximum isotropy defect `‖W₁ᴴW₂ − W₂ᴴW₁‖` of an accepted Lagrangian basis.
    pub lagrangian: T,
    /// Dead-band for Loewner comparisons and ARI acceptance.
    pub loewner: T,
    /// Dead-band for validating semidefinite inputs.
    pub psd: T,
    /// Reciprocal condition below which `W₁` is declared singular.
    pub rcond: T,
}

impl<T: Real> Default for Tolerances<T> {
    /// Double-precision thresholds, or [`Tolerances::single_precision`]
    /// when `T` has a machine epsilon above `1e-10`.
    fn default() -> Self {
        if T::epsilon() > T::lit(1e-10) {
            return Self::single_precision();
        }
        Self {
            imag: T::lit(1e-8),
            rank: T::lit(1e-10),
            residual: T::lit(1e-8),
            lagrangian: T::lit(1e-6),
            loewner: T::lit(1e-8),
            psd: T::lit(1e-10),
            rcond: T::lit(1e-12),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Defaults suited to `f32` arithmetic.
    pub fn single_precision() -> Self {
        Self {
            imag: T::lit(1e-4),
            rank: T::lit(1e-5),
            residual: T::lit(1e-4),
            lagrangian: T::lit(1e-3),
            loewner: T::lit(1e-4),
            psd: T::lit(1e-5),
            rcond: T::lit(1e-6),
        }
    }
}
