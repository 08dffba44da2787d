//! Sylvester `AX + XB + C = 0` and Lyapunov `AᴴX + XA + C = 0` solvers.

use num_complex::Complex;

use super::dense::{lstsq_min_norm, norm2};
use super::matrix::ComplexMatrix;
use super::schur::schur_decompose;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative separation below which the spectra of `A` and `−B` count as overlapping.
pub const SEP_REL_TOL: f64 = 1e-8;
/// Relative residual below which an overlapping system counts as consistent.
pub const CONSISTENCY_REL_TOL: f64 = 1e-8;
/// Relative singular-value cutoff for the vectorized least-squares fallback.
pub const LSTSQ_REL_CUT: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum SylvesterSolution<T> {
    /// Spectra separated; the solution is unique.
    Unique(ComplexMatrix<T>),
    /// Spectra overlap but the system is solvable; minimum Frobenius-norm solution.
    Consistent { x: ComplexMatrix<T>, residual: T },
    /// No solution; least-squares residual of the minimum-norm candidate.
    Inconsistent { residual: T },
}

impl<T: Real> SylvesterSolution<T> {
    pub fn solution(&self) -> Option<&ComplexMatrix<T>> {
        match self {
            Self::Unique(x) | Self::Consistent { x, .. } => Some(x),
            Self::Inconsistent { .. } => None,
        }
    }

    pub fn into_solution(self) -> Option<ComplexMatrix<T>> {
        match self {
            Self::Unique(x) | Self::Consistent { x, .. } => Some(x),
            Self::Inconsistent { .. } => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, Self::Unique(_))
    }
}

/// Tolerances for [`solve_sylvester_with`].
#[derive(Clone, Copy, Debug)]
pub struct SylvesterTol<T> {
    pub sep_rel: T,
    pub consistency_rel: T,
}

impl<T: Real> Default for SylvesterTol<T> {
    fn default() -> Self {
        Self { sep_rel: T::lit(SEP_REL_TOL), consistency_rel: T::lit(CONSISTENCY_REL_TOL) }
    }
}

/// `‖AX + XB + C‖_F`.
pub fn sylvester_residual<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
    x: &ComplexMatrix<T>,
) -> T {
    (&(&(a * x) + &(x * b)) + c).norm_fro()
}

pub fn solve_sylvester<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
) -> Result<SylvesterSolution<T>> {
    solve_sylvester_with(a, b, c, SylvesterTol::default())
}

pub fn solve_sylvester_with<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
    tol: SylvesterTol<T>,
) -> Result<SylvesterSolution<T>> {
    a.ensure_square()?;
    b.ensure_square()?;
    let (m, k) = (a.rows(), b.rows());
    if c.shape() != (m, k) {
        return Err(Error::Dimension(format!("C is {:?}, expected ({m}, {k})", c.shape())));
    }
    if m == 0 || k == 0 {
        return Ok(SylvesterSolution::Unique(ComplexMatrix::zeros(m, k)));
    }
    let sa = schur_decompose(a)?;
    let sb = schur_decompose(b)?;
    let sep_tol = tol.sep_rel * (a.norm_fro() + b.norm_fro());
    let gap = sa
        .eigenvalues()
        .iter()
        .flat_map(|&la| sb.eigenvalues().into_iter().map(move |lb| (la + lb).norm()))
        .fold(T::infinity(), T::min);
    if gap > sep_tol {
        let (ta, tb) = (&sa.t, &sb.t);
        let ct = &(&sa.q.adjoint() * c) * &sb.q;
        let mut y = ComplexMatrix::zeros(m, k);
        for j in 0..k {
            let mut rhs: Vec<Complex<T>> = (0..m).map(|i| -ct[(i, j)]).collect();
            for p in 0..j {
                let tpj = tb[(p, j)];
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= y[(i, p)] * tpj;
                }
            }
            let shift = tb[(j, j)];
            for i in (0..m).rev() {
                let mut s = rhs[i];
                for q in i + 1..m {
                    s -= ta[(i, q)] * y[(q, j)];
                }
                y[(i, j)] = s / (ta[(i, i)] + shift);
            }
        }
        let x = &(&sa.q * &y) * &sb.q.adjoint();
        return Ok(SylvesterSolution::Unique(x));
    }
    // vec(AX + XB) = (I ⊗ A + Bᵀ ⊗ I)·vec(X)
    let kron = &ComplexMatrix::identity(k).kron(a) + &b.transpose().kron(&ComplexMatrix::identity(m));
    let rhs = ComplexMatrix::column_vector(&c.vec()).scale_real(-T::one());
    let cut = T::lit(LSTSQ_REL_CUT) * T::lit((m * k) as f64);
    let ls = lstsq_min_norm(&kron, &rhs, cut)?;
    let x = ComplexMatrix::unvec(ls.x.data(), m, k);
    let threshold = tol.consistency_rel * (norm2(&kron) * x.norm_fro() + c.norm_fro());
    if ls.residual <= threshold {
        Ok(SylvesterSolution::Consistent { x, residual: ls.residual })
    } else {
        Ok(SylvesterSolution::Inconsistent { residual: ls.residual })
    }
}

/// Solve `AᴴX + XA + C = 0` for Hermitian `C`; requires `Λ(A) ∩ Λ(−Aᴴ) = ∅`.
pub fn solve_lyapunov<T: Real>(a: &ComplexMatrix<T>, c: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_square()?;
    if c.shape() != a.shape() {
        return Err(Error::Dimension(format!("C is {:?}, A is {:?}", c.shape(), a.shape())));
    }
    let scale = T::one() + c.norm_fro();
    let defect = c.hermitian_defect();
    if defect > T::lit(1e-8) * scale {
        return Err(Error::NotHermitian { defect: defect.as_f64() });
    }
    let ah = a.adjoint();
    match solve_sylvester(&ah, a, &c.hermitian_part())? {
        SylvesterSolution::Unique(x) => Ok(x.hermitian_part()),
        _ => {
            let ev = schur_decompose(a)?.eigenvalues();
            let gap = ev
                .iter()
                .flat_map(|&x| ev.iter().map(move |&y| (x.conj() + y).norm()))
                .fold(T::infinity(), T::min);
            Err(Error::SpectrumOverlap { gap: gap.as_f64() })
        }
    }
}
