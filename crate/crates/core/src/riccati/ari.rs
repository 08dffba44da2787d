//! Riccati inequality checks and the dual operator.

use crate::error::Result;
use crate::linalg::{definiteness, ComplexMatrix, DefinitenessVerdict};
use crate::scalar::Real;
use crate::structured::RiccatiData;
use crate::tolerance::Tolerances;

/// Residual of a candidate for the inequality `FᴴX + XF + XGX + K ≤ 0`.
#[derive(Clone, Debug)]
pub struct AriResidual<T> {
    /// `FᴴX + XF + XGX + K`.
    pub r: ComplexMatrix<T>,
    pub verdict: DefinitenessVerdict<T>,
    /// `Δ_K = −r`; `X` solves the equation with constant term `K + Δ_K`.
    pub delta_k: ComplexMatrix<T>,
    /// Whether `r` is negative (semi)definite within the dead-band.
    pub accepted: bool,
}

pub fn ari_residual<T: Real>(x: &ComplexMatrix<T>, data: &RiccatiData<T>) -> Result<AriResidual<T>> {
    ari_residual_with(x, data, &Tolerances::default())
}

pub fn ari_residual_with<T: Real>(
    x: &ComplexMatrix<T>,
    data: &RiccatiData<T>,
    tol: &Tolerances<T>,
) -> Result<AriResidual<T>> {
    if x.shape() != (data.n(), data.n()) {
        return Err(crate::Error::Dimension(format!("X is {:?}, expected order {}", x.shape(), data.n())));
    }
    let r = data.residual(&x.hermitian_part());
    let verdict = definiteness(&r, tol.loewner)?;
    let accepted = verdict.kind.is_nsd();
    let delta_k = -&r;
    Ok(AriResidual { r, verdict, delta_k, accepted })
}

/// The triple `(Fᴴ, K, G)`: `Y` solves `FY + YFᴴ + YKY + G = 0` exactly when
/// a positive definite `X = Y⁻¹` solves the original equation.
pub fn dual_riccati<T: Real>(data: &RiccatiData<T>) -> RiccatiData<T> {
    RiccatiData::from_parts(data.f().adjoint(), data.k().clone(), data.g().clone())
}
