//! Principal matrix square root by the Schur method.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use super::schur::schur_decompose;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Principal square root: `S² = A` with every eigenvalue of `S` in the open
/// right half plane. Fails if `A` has an eigenvalue on the closed negative
/// real axis.
pub fn principal_sqrt<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_square()?;
    let n = a.rows();
    let s = schur_decompose(a)?;
    let t = &s.t;
    let cut = T::lit(n.max(1) as f64) * T::epsilon() * a.norm_fro().max(T::min_positive_value());
    let mut r = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let l = t[(i, i)];
        if l.im.abs() <= cut && l.re <= cut {
            return Err(Error::BranchCut(format!("{l}")));
        }
        r[(i, i)] = l.sqrt();
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s_ij = t[(i, j)];
            for k in i + 1..j {
                s_ij -= r[(i, k)] * r[(k, j)];
            }
            let den: Complex<T> = r[(i, i)] + r[(j, j)];
            r[(i, j)] = if den.is_zero() { Complex::zero() } else { s_ij / den };
        }
    }
    Ok(&(&s.q * &r) * &s.q.adjoint())
}
