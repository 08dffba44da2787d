//! Hermitian eigensolver and semidefinite-order tests.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Eigendecomposition `A = V·diag(values)·Vᴴ`, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

/// Cyclic complex Jacobi on the Hermitian part of `a`.
pub fn eigh<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    a.ensure_square()?;
    let n = a.rows();
    let mut h = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = h.norm_fro();
    let eps = T::epsilon();
    for _ in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += h[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= eps * scale || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = h[(p, q)];
                let g = apq.norm();
                if g <= eps * eps * scale {
                    continue;
                }
                // phase on q makes the pivot real
                let ph = apq / g;
                for k in 0..n {
                    h[(k, q)] *= ph.conj();
                    v[(k, q)] *= ph.conj();
                }
                for k in 0..n {
                    h[(q, k)] *= ph;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let tau = (aqq - app) / (g + g);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (xp, xq) = (h[(k, p)], h[(k, q)]);
                    h[(k, p)] = xp * c - xq * s;
                    h[(k, q)] = xp * s + xq * c;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * c - vq * s;
                    v[(k, q)] = vp * s + vq * c;
                }
                for k in 0..n {
                    let (xp, xq) = (h[(p, k)], h[(q, k)]);
                    h[(p, k)] = xp * c - xq * s;
                    h[(q, k)] = xp * s + xq * c;
                }
                h[(p, q)] = Complex::new(T::zero(), T::zero());
                h[(q, p)] = Complex::new(T::zero(), T::zero());
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.partial_cmp(&h[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Reconstruct `V·diag(f(λ))·Vᴴ`.
pub fn spectral_map<T: Real>(e: &HermitianEigen<T>, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
    let n = e.values.len();
    let d: Vec<_> = e.values.iter().map(|&l| creal(f(l))).collect();
    let mut vd = e.vectors.clone();
    for i in 0..n {
        for k in 0..n {
            vd[(i, k)] *= d[k];
        }
    }
    (&vd * &e.vectors.adjoint()).hermitian_part()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    /// Every eigenvalue lies in the dead-band; both semidefinite kinds apply.
    Zero,
    Indefinite,
    NegativeSemidefinite,
    NegativeDefinite,
}

impl Definiteness {
    pub fn is_psd(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::PositiveSemidefinite | Self::Zero)
    }

    pub fn is_nsd(self) -> bool {
        matches!(self, Self::NegativeDefinite | Self::NegativeSemidefinite | Self::Zero)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PositiveDefinite => "positive-definite",
            Self::PositiveSemidefinite => "positive-semidefinite",
            Self::Zero => "zero",
            Self::Indefinite => "indefinite",
            Self::NegativeSemidefinite => "negative-semidefinite",
            Self::NegativeDefinite => "negative-definite",
        }
    }
}

/// Classification of a Hermitian matrix.
///
/// `margin` is the smallest eigenvalue for positive kinds and for
/// indefinite matrices, and the largest eigenvalue for negative kinds.
#[derive(Clone, Debug, PartialEq)]
pub struct DefinitenessVerdict<T> {
    pub kind: Definiteness,
    pub margin: T,
    pub eigenvalues: Vec<T>,
}

/// Classify `a` with a dead-band of `tol·(1+‖a‖)` around zero.
pub fn definiteness<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<DefinitenessVerdict<T>> {
    a.ensure_square()?;
    let scale = T::one() + a.norm_fro();
    let defect = a.hermitian_defect();
    if defect > tol * scale {
        return Err(Error::NotHermitian { defect: defect.as_f64() });
    }
    let e = eigh(a)?;
    Ok(classify(e.values, tol * scale))
}

pub(crate) fn classify<T: Real>(values: Vec<T>, band: T) -> DefinitenessVerdict<T> {
    let pos = values.iter().any(|&l| l > band);
    let neg = values.iter().any(|&l| l < -band);
    let zero = values.iter().any(|&l| l.abs() <= band);
    let lmin = values.first().copied().unwrap_or_else(T::zero);
    let lmax = values.last().copied().unwrap_or_else(T::zero);
    let (kind, margin) = match (pos, neg, zero) {
        (_, false, false) => (Definiteness::PositiveDefinite, lmin),
        (false, false, true) => (Definiteness::Zero, lmin),
        (true, false, true) => (Definiteness::PositiveSemidefinite, lmin),
        (false, true, false) => (Definiteness::NegativeDefinite, lmax),
        (false, true, true) => (Definiteness::NegativeSemidefinite, lmax),
        (true, true, _) => (Definiteness::Indefinite, lmin),
    };
    DefinitenessVerdict { kind, margin, eigenvalues: values }
}

/// `x ≤ y` in the Loewner order, with dead-band `tol·(1+‖y−x‖)`.
pub fn loewner_leq<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    if x.shape() != y.shape() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", x.shape(), y.shape())));
    }
    let d = (y - x).hermitian_part();
    Ok(definiteness(&d, tol)?.kind.is_psd())
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn hermitian_sqrt<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let e = eigh(a)?;
    let band = tol * (T::one() + a.norm_fro());
    if let Some(&l) = e.values.first() {
        if l < -band {
            return Err(Error::NotSemidefinite { what: "square-root argument", margin: l.as_f64() });
        }
    }
    Ok(spectral_map(&e, |l| l.max(T::zero()).sqrt()))
}

/// Inverse principal square root of a Hermitian positive-definite matrix.
pub fn hermitian_inv_sqrt<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let e = eigh(a)?;
    if let Some(&l) = e.values.first() {
        if l <= T::zero() {
            return Err(Error::NotPositiveDefinite { what: "inverse square-root argument", margin: l.as_f64() });
        }
    }
    Ok(spectral_map(&e, |l| T::one() / l.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use proptest::prelude::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn eigh_of_complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = M::new(2, 2, vec![cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(2.0, 0.0)]).unwrap();
        let e = eigh(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        let rec = spectral_map(&e, |l| l);
        assert!(rec.approx_eq(&a, 1e-14));
    }

    #[test]
    fn verdicts_on_reference_matrices() {
        let k = M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]);
        assert_eq!(definiteness(&k, 1e-12).unwrap().kind, Definiteness::PositiveDefinite);
        let r = M::from_real_diagonal(&[-1.0, 0.0, 0.0]);
        let v = definiteness(&r, 1e-12).unwrap();
        assert_eq!(v.kind, Definiteness::NegativeSemidefinite);
        assert_eq!(v.margin, 0.0);
        let z = definiteness(&M::zeros(3, 3), 1e-12).unwrap();
        assert_eq!((z.kind, z.margin), (Definiteness::Zero, 0.0));
        let ind = M::from_real_diagonal(&[-1.0, 2.0]);
        assert_eq!(definiteness(&ind, 1e-12).unwrap().kind, Definiteness::Indefinite);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = M::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(definiteness(&a, 1e-12), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn loewner_on_extremal_pair() {
        let xm = M::from_real_rows(&[[1.0, 1.0], [1.0, 2.0]]);
        let xp = M::from_real_rows(&[[5.0, 1.0], [1.0, 8.0]]);
        let x = M::from_real_rows(&[[3.0, 1.0], [1.0, 5.0]]);
        assert!(loewner_leq(&xm, &xp, 1e-12).unwrap());
        assert!(loewner_leq(&xm, &x, 1e-12).unwrap());
        assert!(loewner_leq(&x, &xp, 1e-12).unwrap());
        assert!(!loewner_leq(&xp, &xm, 1e-12).unwrap());
    }

    #[test]
    fn sqrt_and_inverse_sqrt() {
        let a = M::from_real_rows(&[[5.0, 1.0], [1.0, 8.0]]);
        let s = hermitian_sqrt(&a, 1e-12).unwrap();
        assert!((&s * &s).approx_eq(&a, 1e-12));
        let si = hermitian_inv_sqrt(&a).unwrap();
        assert!((&s * &si).approx_eq(&M::identity(2), 1e-12));
    }

    fn hermitian(n: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let r = M::from_fn(n, n, |i, j| cplx(v[i * n + j].0, v[i * n + j].1));
            r.hermitian_part()
        })
    }

    proptest! {
        #[test]
        fn eigh_reconstructs(a in hermitian(5)) {
            let e = eigh(&a).unwrap();
            let v = &e.vectors;
            prop_assert!((&(&v.adjoint() * v) - &M::identity(5)).norm_fro() < 1e-12);
            prop_assert!(spectral_map(&e, |l| l).approx_eq(&a, 1e-12));
        }

        #[test]
        fn loewner_is_reflexive_and_transitive(a in hermitian(3), b in hermitian(3), c in hermitian(3)) {
            prop_assert!(loewner_leq(&a, &a, 1e-10).unwrap());
            // a ≤ a + bbᴴ ≤ a + bbᴴ + ccᴴ
            let y = &a + &(&b * &b.adjoint());
            let z = &y + &(&c * &c.adjoint());
            prop_assert!(loewner_leq(&a, &y, 1e-10).unwrap());
            prop_assert!(loewner_leq(&y, &z, 1e-10).unwrap());
            prop_assert!(loewner_leq(&a, &z, 1e-10).unwrap());
        }
    }
}
