//! Seeded random matrices for constructed test problems and direction sources.

use num_complex::Complex;
use rand::Rng;

use crate::linalg::{norm2, orth, ComplexMatrix};
use crate::scalar::Real;

/// Entries with real and imaginary parts uniform on `[−1, 1]`.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
    })
}

/// `BBᴴ` with `B` of size `n × rank`, scaled to unit spectral norm.
pub fn random_wishart<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix<T> {
    let b = random_matrix::<T, R>(rng, n, rank);
    let w = (&b * &b.adjoint()).hermitian_part();
    let s = norm2(&w);
    if s > T::zero() {
        w.scale_real(T::one() / s)
    } else {
        w
    }
}

/// Random unitary from the orthonormalized columns of a random matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    loop {
        let q = orth(&random_matrix::<T, R>(rng, n, n), T::lit(1e-8));
        if q.cols() == n {
            return q;
        }
    }
}

/// Hermitian matrix with spectral norm `norm`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, norm: T) -> ComplexMatrix<T> {
    let a = random_matrix::<T, R>(rng, n, n).hermitian_part();
    let s = norm2(&a);
    if s > T::zero() {
        a.scale_real(norm / s)
    } else {
        a
    }
}

/// Symplectic `diag(U, U)·[[I, 0], [E, I]]` with unitary `U` and Hermitian
/// `‖E‖₂ = shear`; its condition number is `((shear + √(shear² + 4))/2)²`.
pub fn random_symplectic<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, shear: T) -> ComplexMatrix<T> {
    let u = random_unitary::<T, R>(rng, n);
    let e = random_hermitian::<T, R>(rng, n, shear);
    let i = ComplexMatrix::identity(n);
    let lower = ComplexMatrix::block2x2(&i, &ComplexMatrix::zeros(n, n), &e, &i);
    &ComplexMatrix::block_diag(&[&u, &u]) * &lower
}
