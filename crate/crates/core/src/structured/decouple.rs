//! Splitting off the purely imaginary part of a closed-loop Hamiltonian.

use crate::error::{Error, Result};
use crate::linalg::{inverse, order_schur_mask, schur_decompose, solve_sylvester, ComplexMatrix, SylvesterSolution};
use crate::scalar::Real;

/// Eigenvalues with `imag_tol < |Re λ| ≤ GAP_FACTOR·imag_tol` are too close
/// to the axis band to be classified reliably.
pub const GAP_FACTOR: f64 = 10.0;

/// Block-diagonalizing transform of `[[F_c, G], [0, −F_cᴴ]]` with `F_c = F + GX₀`.
///
/// With `S = diag(M, M⁻ᴴ)·[[I, N], [0, I]]`, `N = [[0, Z₁₂], [Z₁₂ᴴ, 0]]`,
/// `S⁻¹·[[F_c, G], [0, −F_cᴴ]]·S` equals
/// `[[diag(T₁, T₂), diag(G₁₁, G₂₂)], [0, −diag(T₁, T₂)ᴴ]]`.
#[derive(Clone, Debug)]
pub struct DecoupledForm<T> {
    pub m: ComplexMatrix<T>,
    pub m_inv: ComplexMatrix<T>,
    pub z12: ComplexMatrix<T>,
    pub t1: ComplexMatrix<T>,
    pub g11: ComplexMatrix<T>,
    pub t2: ComplexMatrix<T>,
    pub g22: ComplexMatrix<T>,
    pub s: ComplexMatrix<T>,
}

impl<T: Real> DecoupledForm<T> {
    /// Size of the non-imaginary block `T₁`.
    pub fn n1(&self) -> usize {
        self.t1.rows()
    }

    /// Size of the imaginary block `T₂`.
    pub fn n2(&self) -> usize {
        self.t2.rows()
    }

    /// `S⁻¹·[[F_c, G], [0, −F_cᴴ]]·S`.
    pub fn transformed(&self, f_closed: &ComplexMatrix<T>, g: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let n = f_closed.rows();
        let hc = ComplexMatrix::block2x2(f_closed, g, &ComplexMatrix::zeros(n, n), &-f_closed.adjoint());
        Ok(&(&inverse(&self.s)? * &hc) * &self.s)
    }

    /// Expected block-diagonal target in the ordering `(1, 2 | 1', 2')`.
    pub fn target(&self) -> ComplexMatrix<T> {
        let a = ComplexMatrix::block_diag(&[&self.t1, &self.t2]);
        let gd = ComplexMatrix::block_diag(&[&self.g11, &self.g22]);
        let z = ComplexMatrix::zeros(a.rows(), a.rows());
        ComplexMatrix::block2x2(&a, &gd, &z, &-a.adjoint())
    }
}

pub fn decouple_imaginary<T: Real>(
    f_closed: &ComplexMatrix<T>,
    g: &ComplexMatrix<T>,
    imag_tol: T,
) -> Result<DecoupledForm<T>> {
    f_closed.ensure_square()?;
    let n = f_closed.rows();
    if g.shape() != (n, n) {
        return Err(Error::Dimension(format!("G is {:?}, expected ({n}, {n})", g.shape())));
    }
    let schur = schur_decompose(f_closed)?;
    let ev = schur.eigenvalues();
    let band = T::lit(GAP_FACTOR) * imag_tol;
    if let Some(z) = ev.iter().find(|z| z.re.abs() > imag_tol && z.re.abs() <= band) {
        return Err(Error::GapViolation { re: z.re.as_f64(), tol: imag_tol.as_f64() });
    }
    let mask: Vec<bool> = ev.iter().map(|z| z.re.abs() > imag_tol).collect();
    let n1 = mask.iter().filter(|&&b| b).count();
    let n2 = n - n1;
    let ord = order_schur_mask(&schur, &mask)?;
    let t = &ord.t;
    let t1 = t.submatrix(0, 0, n1, n1);
    let t2 = t.submatrix(n1, n1, n2, n2);
    let t12 = t.submatrix(0, n1, n1, n2);
    // T₁R − RT₂ + T₁₂ = 0 block-diagonalizes T
    let r = match solve_sylvester(&t1, &-&t2, &t12)? {
        SylvesterSolution::Unique(r) => r,
        _ => return Err(Error::SpectrumOverlap { gap: 0.0 }),
    };
    let mut shear = ComplexMatrix::identity(n);
    shear.set_submatrix(0, n1, &r);
    let mut shear_inv = ComplexMatrix::identity(n);
    shear_inv.set_submatrix(0, n1, &-&r);
    let m = &ord.q * &shear;
    let m_inv = &shear_inv * &ord.q.adjoint();
    let gh = &(&m_inv * g) * &m_inv.adjoint();
    let g11 = gh.submatrix(0, 0, n1, n1).hermitian_part();
    let g22 = gh.submatrix(n1, n1, n2, n2).hermitian_part();
    let g21 = gh.submatrix(n1, 0, n2, n1);
    // T₁Z + ZT₂ᴴ + G₂₁ᴴ = 0
    let z12 = match solve_sylvester(&t1, &t2.adjoint(), &g21.adjoint())? {
        SylvesterSolution::Unique(z) => z,
        _ => return Err(Error::SpectrumOverlap { gap: 0.0 }),
    };
    let mut nmat = ComplexMatrix::zeros(n, n);
    nmat.set_submatrix(0, n1, &z12);
    nmat.set_submatrix(n1, 0, &z12.adjoint());
    let lift = ComplexMatrix::block2x2(
        &ComplexMatrix::identity(n),
        &nmat,
        &ComplexMatrix::zeros(n, n),
        &ComplexMatrix::identity(n),
    );
    let s = &ComplexMatrix::block_diag(&[&m, &m_inv.adjoint()]) * &lift;
    Ok(DecoupledForm { m, m_inv, z12, t1, g11, t2, g22, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{definiteness, eigenvalues};
    use crate::scalar::cplx;

    type M = ComplexMatrix<f64>;

    #[test]
    fn no_imaginary_part_gives_empty_t2() {
        let fc = M::from_real_rows(&[[-1.0, 2.0], [0.0, -3.0]]);
        let d = decouple_imaginary(&fc, &M::identity(2), 1e-8).unwrap();
        assert_eq!((d.n1(), d.n2()), (2, 0));
        assert_eq!(d.z12.shape(), (2, 0));
    }

    #[test]
    fn diagonal_two_by_two_case() {
        let fc = M::from_real_diagonal(&[-1.0, 0.0]);
        let g = M::from_real_rows(&[[1.0, 0.5], [0.5, 1.0]]);
        let d = decouple_imaginary(&fc, &g, 1e-8).unwrap();
        assert!((d.t1[(0, 0)] - cplx(-1.0, 0.0)).norm() < 1e-14);
        assert!(d.t2[(0, 0)].norm() < 1e-14);
        // −Z + 0 + g₂₁ = 0 in the Schur basis, which is the identity here up to phase
        let g21 = (&(&d.m_inv * &g) * &d.m_inv.adjoint())[(1, 0)];
        assert!((d.z12[(0, 0)] - g21.conj()).norm() < 1e-14);
        let err = (&d.transformed(&fc, &g).unwrap() - &d.target()).norm_fro();
        assert!(err < 1e-12);
    }

    #[test]
    fn mixed_spectrum_blocks_match_construction() {
        // spectrum {−1, 2, ±i} scrambled by a non-normal similarity
        let base = M::new(
            4,
            4,
            vec![
                cplx(-1.0, 0.0), cplx(0.3, 0.0), cplx(0.1, 0.0), cplx(0.0, 0.2),
                cplx(0.0, 0.0), cplx(2.0, 0.0), cplx(0.5, 0.0), cplx(0.0, 0.0),
                cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 1.0), cplx(0.4, 0.0),
                cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, -1.0),
            ],
        )
        .unwrap();
        let p = M::from_fn(4, 4, |i, j| cplx(if i == j { 1.0 } else { 0.1 * (i + 2 * j) as f64 / 4.0 }, 0.0));
        let fc = &(&p * &base) * &inverse(&p).unwrap();
        let b = M::from_fn(4, 4, |i, j| cplx((i as f64 - j as f64) * 0.2, 0.1 * (i * j) as f64));
        let g = &b * &b.adjoint();
        let d = decouple_imaginary(&fc, &g, 1e-8).unwrap();
        assert_eq!((d.n1(), d.n2()), (2, 2));
        let mut e2 = eigenvalues(&d.t2).unwrap();
        e2.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((e2[0] - cplx(0.0, -1.0)).norm() < 1e-10 && (e2[1] - cplx(0.0, 1.0)).norm() < 1e-10);
        let scale = 1.0 + fc.norm_fro() + g.norm_fro();
        assert!((&d.transformed(&fc, &g).unwrap() - &d.target()).norm_fro() < 1e-8 * scale);
        assert!(definiteness(&d.g22, 1e-10).unwrap().kind.is_psd());
    }

    #[test]
    fn straddling_eigenvalue_is_rejected() {
        let fc = M::from_real_diagonal(&[-1.0, 5e-8]);
        assert!(matches!(decouple_imaginary(&fc, &M::identity(2), 1e-8), Err(Error::GapViolation { .. })));
    }
}
