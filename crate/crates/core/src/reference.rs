//! Small reference problems with known answers.

use num_complex::Complex;

use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::structured::{HamiltonianMatrix, RiccatiData};

fn m<T: Real, const C: usize>(rows: &[[f64; C]]) -> ComplexMatrix<T> {
    let r: Vec<Vec<T>> = rows.iter().map(|row| row.iter().map(|&x| T::lit(x)).collect()).collect();
    ComplexMatrix::from_real_rows(&r)
}

/// 3×3 triple whose condensed-form solution stalls: the stage Sylvester
/// equation is inconsistent, so no positive-definite solution exists.
pub fn example1<T: Real>() -> RiccatiData<T> {
    RiccatiData::new(
        m(&[[-2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [1.0, 1.0, -1.0]]),
        m(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        m(&[[3.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]]),
    )
    .expect("valid reference data")
}

/// Candidate ARI solution for [`example1`]; its residual has eigenvalues `{−1, 0, 0}`.
pub fn example1_candidate<T: Real>() -> ComplexMatrix<T> {
    m(&[[3.0, 1.0, -1.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]])
}

/// `F = [[−3, −1], [−1, −5]]`, `G = I`, `K = [[6, 8], [8, 17]]`; `Λ(H) = {±2, ±3}`,
/// `X₋ = [[1, 1], [1, 2]]`, `X₊ = [[5, 1], [1, 8]]`.
pub fn example2<T: Real>() -> RiccatiData<T> {
    RiccatiData::new(m(&[[-3.0, -1.0], [-1.0, -5.0]]), ComplexMatrix::identity(2), m(&[[6.0, 8.0], [8.0, 17.0]]))
        .expect("valid reference data")
}

pub fn example2_hamiltonian<T: Real>() -> HamiltonianMatrix<T> {
    HamiltonianMatrix::from_riccati(&example2())
}

/// `Δ₁₁ = [[a, c], [c, b]]`, the perturbation of `K` in the region study.
pub fn example2_delta11<T: Real>(a: T, b: T, c: T) -> ComplexMatrix<T> {
    let z = |x: T| Complex::new(x, T::zero());
    ComplexMatrix::new(2, 2, vec![z(a), z(c), z(c), z(b)]).expect("2×2")
}

/// `λ² = ½(13 − a − b ± √((a − b + 5)² + 4c²))` for `H + J·diag(Δ₁₁, 0)`.
pub fn example2_lambda_squared<T: Real>(a: T, b: T, c: T) -> [T; 2] {
    let half = T::lit(0.5);
    let s = T::lit(13.0) - a - b;
    let r = ((a - b + T::lit(5.0)).powi(2) + T::lit(4.0) * c * c).sqrt();
    [half * (s - r), half * (s + r)]
}

/// The unique solution at the vertex `(a, b, c) = (4, 9, 0)`.
pub fn example2_vertex_solution<T: Real>() -> ComplexMatrix<T> {
    m(&[[3.0, 1.0], [1.0, 5.0]])
}
