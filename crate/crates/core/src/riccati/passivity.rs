//! Passivity certificates from the Riccati inequality.

use num_complex::Complex;

use crate::error::Result;
use crate::linalg::{definiteness, eigenvalues, ComplexMatrix, Definiteness, DefinitenessVerdict};
use crate::scalar::Real;
use crate::structured::{assemble_hamiltonian, from_state_space, RiccatiData, Selection, StateSpace};
use crate::tolerance::Tolerances;

use super::extremal::solve_with_selection;
use super::structured_solve::{solve_structured_with, StructuredVerdict};

/// Relative shifts `ε` tried on `K` when the unshifted equation has no
/// positive definite solution.
pub const SHIFT_LADDER: [f64; 4] = [1e-8, 1e-6, 1e-4, 1e-2];

/// `[[AᴴX + XA, XB − Cᴴ], [BᴴX − C, −(D + Dᴴ)]]`; passivity is certified
/// by a positive definite `X` making it negative semidefinite.
pub fn lmi_matrix<T: Real>(ss: &StateSpace<T>, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let ah = ss.a.adjoint();
    let tl = &(&ah * x) + &(x * &ss.a);
    let tr = &(x * &ss.b) - &ss.c.adjoint();
    let br = -ss.feedthrough_sum();
    ComplexMatrix::block2x2(&tl, &tr, &tr.adjoint(), &br).hermitian_part()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    /// `X₋` of the equation itself.
    Minimal,
    /// The block-wise construction for stable `F`.
    Structured,
    /// `X₋` of the equation with `K` shifted by `ε(1+‖K‖)I`.
    Shifted,
}

impl CertificateSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Minimal => "minimal",
            Self::Structured => "structured",
            Self::Shifted => "shifted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PassivityCertificate<T> {
    pub x: ComplexMatrix<T>,
    pub source: CertificateSource,
    /// Relative shift used, zero unless `source` is `Shifted`.
    pub shift: T,
    pub x_verdict: DefinitenessVerdict<T>,
    pub lmi_verdict: DefinitenessVerdict<T>,
}

#[derive(Clone, Debug)]
pub struct PassivityDiagnostics<T> {
    /// Eigenvalues of the Hamiltonian within the imaginary-axis band.
    pub imaginary_spectrum: Vec<Complex<T>>,
    /// Largest real part of `Λ(F)`.
    pub max_real_f: T,
    /// One line per attempt that did not yield a certificate.
    pub attempts: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum PassivityVerdict<T> {
    Passive(PassivityCertificate<T>),
    NotCertified(PassivityDiagnostics<T>),
}

impl<T> PassivityVerdict<T> {
    pub fn is_passive(&self) -> bool {
        matches!(self, Self::Passive(_))
    }

    pub fn certificate(&self) -> Option<&PassivityCertificate<T>> {
        match self {
            Self::Passive(c) => Some(c),
            Self::NotCertified(_) => None,
        }
    }
}

pub fn passivity_verdict<T: Real>(ss: &StateSpace<T>) -> Result<PassivityVerdict<T>> {
    passivity_verdict_with(ss, &Tolerances::default())
}

/// Search for `X > 0` satisfying the LMI: first `X₋`, then the block-wise
/// construction when `F` is stable, then `X₋` of slightly enlarged `K`.
/// Every candidate is accepted only after the LMI itself is evaluated.
pub fn passivity_verdict_with<T: Real>(ss: &StateSpace<T>, tol: &Tolerances<T>) -> Result<PassivityVerdict<T>> {
    let data = from_state_space(ss)?;
    let mut attempts = Vec::new();
    let check = |x: &ComplexMatrix<T>, source: CertificateSource, shift: T, attempts: &mut Vec<String>| -> Result<Option<PassivityCertificate<T>>> {
        let xv = definiteness(x, tol.psd)?;
        if xv.kind != Definiteness::PositiveDefinite {
            attempts.push(format!("{}: X is {} (margin {:.3e})", source.as_str(), xv.kind.as_str(), xv.margin.as_f64()));
            return Ok(None);
        }
        let lv = definiteness(&lmi_matrix(ss, x), tol.loewner)?;
        if !lv.kind.is_nsd() {
            attempts.push(format!("{}: LMI is {} (margin {:.3e})", source.as_str(), lv.kind.as_str(), lv.margin.as_f64()));
            return Ok(None);
        }
        Ok(Some(PassivityCertificate { x: x.clone(), source, shift, x_verdict: xv, lmi_verdict: lv }))
    };

    match solve_with_selection(&data, Selection::LeftHalf, tol) {
        Ok(x) => {
            if let Some(c) = check(&x, CertificateSource::Minimal, T::zero(), &mut attempts)? {
                return Ok(PassivityVerdict::Passive(c));
            }
        }
        Err(e) => attempts.push(format!("minimal: {e}")),
    }

    let max_real_f = eigenvalues(data.f())?.iter().map(|z| z.re).fold(T::neg_infinity(), T::max);
    if max_real_f < T::zero() {
        let rep = solve_structured_with(&data, tol)?;
        match (rep.verdict, rep.x) {
            (StructuredVerdict::Solved, Some(x)) => {
                if let Some(c) = check(&x, CertificateSource::Structured, T::zero(), &mut attempts)? {
                    return Ok(PassivityVerdict::Passive(c));
                }
            }
            (v, _) => attempts.push(format!("structured: {}", v.as_str())),
        }
        // With F stable and K' > 0 every solution of the shifted equation is
        // positive definite and satisfies the inequality for K.
        let kscale = T::one() + data.k().norm_fro();
        for &eps in &SHIFT_LADDER {
            let eps = T::lit(eps);
            let shift = ComplexMatrix::identity(data.n()).scale_real(eps * kscale);
            let shifted = RiccatiData::from_parts(data.f().clone(), data.g().clone(), data.k() + &shift);
            match solve_with_selection(&shifted, Selection::LeftHalf, tol) {
                Ok(x) => {
                    if let Some(c) = check(&x, CertificateSource::Shifted, eps, &mut attempts)? {
                        return Ok(PassivityVerdict::Passive(c));
                    }
                }
                Err(e) => attempts.push(format!("shifted ε = {:.0e}: {e}", eps.as_f64())),
            }
        }
    } else {
        attempts.push(format!("F is not asymptotically stable (max real part {:.3e})", max_real_f.as_f64()));
    }

    let h = assemble_hamiltonian(&data);
    let band = h.imag_tol(tol.imag);
    let imaginary_spectrum = h.eigenvalues()?.into_iter().filter(|z| z.re.abs() <= band).collect();
    Ok(PassivityVerdict::NotCertified(PassivityDiagnostics { imaginary_spectrum, max_real_f, attempts }))
}
