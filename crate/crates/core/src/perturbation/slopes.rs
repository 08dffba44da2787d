//! First-order motion of a semisimple imaginary eigenvalue under `tJΔ`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::HamiltonianMatrix;

use super::direction::PerturbationDirection;
use super::spectrum::{inertia_indices, InertiaSign};

/// Slopes `δ` with `λ(t) = iα + iδt + o(t)`.
#[derive(Clone, Debug)]
pub struct FirstOrderSlopes<T> {
    pub alpha: T,
    /// Ascending; one per eigenvalue in the cluster.
    pub slopes: Vec<T>,
    pub inertia: InertiaSign,
    /// Eigenvalues of `W = i·VᴴJV`.
    pub w_eigenvalues: Vec<T>,
}

impl<T: Real> FirstOrderSlopes<T> {
    pub fn multiplicity(&self) -> usize {
        self.slopes.len()
    }

    /// Predicted eigenvalues `iα + iδt`.
    pub fn predicted(&self, t: T) -> Vec<Complex<T>> {
        self.slopes.iter().map(|&d| Complex::new(T::zero(), self.alpha + d * t)).collect()
    }
}

/// Eigenvalues of the pencil `δW + VᴴΔV = 0` for the cluster within `eps`
/// of `iα`. Requires `W` definite, i.e. `iα` semisimple with one-signed
/// inertia; for `W < 0` and `Δ ≥ 0` every slope is nonnegative.
pub fn first_order_slopes<T: Real>(
    h: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    alpha: T,
    eps: T,
) -> Result<FirstOrderSlopes<T>> {
    if d.n() != h.n() {
        return Err(Error::Dimension(format!("direction of order {} for Hamiltonian of order {}", d.n(), h.n())));
    }
    let ii = inertia_indices(h, alpha, eps)?;
    if ii.multiplicity == 0 {
        return Err(Error::InvalidInput(format!("no eigenvalue within {} of i·{}", eps, alpha)));
    }
    let sign = ii.sign();
    let sigma = match sign {
        InertiaSign::Plus => T::one(),
        InertiaSign::Minus => -T::one(),
        InertiaSign::Mixed => {
            return Err(Error::InvalidInput(format!(
                "W has inertia (+{}, −{}, 0:{}); the eigenvalue is not semisimple with definite inertia",
                ii.plus, ii.minus, ii.zero
            )))
        }
    };
    // σW = QΛQᴴ with Λ > 0, so δ = −σ·eig(Λ^{-1/2}QᴴMQΛ^{-1/2})
    let v = &ii.basis;
    let m = (&(&v.adjoint() * &d.assembled()) * v).hermitian_part();
    let we = eigh(&ii.w)?;
    let k = we.values.len();
    let scale: Vec<T> = we.values.iter().map(|&l| T::one() / (sigma * l).sqrt()).collect();
    let qmq = &(&we.vectors.adjoint() * &m) * &we.vectors;
    let reduced = ComplexMatrix::from_fn(k, k, |i, j| qmq[(i, j)] * scale[i] * scale[j]);
    let mut slopes: Vec<T> = eigh(&reduced)?.values.into_iter().map(|l| -sigma * l).collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(FirstOrderSlopes { alpha, slopes, inertia: sign, w_eigenvalues: ii.w_eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn scalar_oscillator_slope_is_half_the_weight() {
        let h = HamiltonianMatrix::from_blocks(M::zeros(1, 1), M::identity(1), M::identity(1)).unwrap();
        let d = PerturbationDirection::delta11_only(M::from_real_rows(&[[3.0]])).unwrap();
        let s = first_order_slopes(&h, &d, 1.0, 1e-6).unwrap();
        assert_eq!(s.inertia, InertiaSign::Minus);
        assert_eq!(s.multiplicity(), 1);
        assert!((s.slopes[0] - 1.5).abs() < 1e-12);
        // mirrored eigenvalue −i moves the other way
        let s = first_order_slopes(&h, &d, -1.0, 1e-6).unwrap();
        assert_eq!(s.inertia, InertiaSign::Plus);
        assert!((s.slopes[0] + 1.5).abs() < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_slopes_are_generalized_eigenvalues() {
        // three uncoupled oscillators at frequency 2: g·k = 4
        let g = [1.0, 2.0, 4.0];
        let k = [4.0, 2.0, 1.0];
        let h = HamiltonianMatrix::from_blocks(M::zeros(3, 3), M::from_real_diagonal(&g), M::from_real_diagonal(&k))
            .unwrap();
        let dd = M::from_real_diagonal(&[1.0, 0.5, 0.0]);
        let d = PerturbationDirection::delta11_only(dd).unwrap();
        let s = first_order_slopes(&h, &d, 2.0, 1e-6).unwrap();
        // ω² = g(k + td) ⇒ dω/dt = g·d/(2ω)
        let mut want = vec![1.0 * 1.0 / 4.0, 2.0 * 0.5 / 4.0, 0.0];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in s.slopes.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{:?} vs {want:?}", s.slopes);
        }
        assert!(s.slopes.iter().all(|&x| x >= -1e-12));
    }

    #[test]
    fn defective_eigenvalue_is_rejected() {
        let h = HamiltonianMatrix::from_blocks(M::zeros(1, 1), M::identity(1), M::zeros(1, 1)).unwrap();
        let d = PerturbationDirection::delta11_only(M::identity(1)).unwrap();
        assert!(matches!(first_order_slopes(&h, &d, 0.0, 1e-6), Err(Error::InvalidInput(_))));
    }
}
