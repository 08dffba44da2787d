use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, loewner_leq, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::{assemble_hamiltonian, lagrangian_subspace_with, RiccatiData, Selection};
use crate::tolerance::Tolerances;

/// Minimal and maximal solutions with their closed-loop spectra.
#[derive(Clone, Debug)]
pub struct ExtremalSolutions<T> {
    pub x_minus: ComplexMatrix<T>,
    pub x_plus: ComplexMatrix<T>,
    /// `Λ(F + GX₋)`.
    pub closed_loop_minus: Vec<Complex<T>>,
    /// `Λ(F + GX₊)`.
    pub closed_loop_plus: Vec<Complex<T>>,
    pub residual_minus: T,
    pub residual_plus: T,
    /// Whether `X₋ ≤ X₊` held within the Loewner dead-band.
    pub loewner_ordered: bool,
}

/// Solve the ARE through the Lagrangian subspace picked by `sel` and
/// verify the residual.
pub fn solve_with_selection<T: Real>(
    data: &RiccatiData<T>,
    sel: Selection<'_, T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    let h = assemble_hamiltonian(data);
    let sub = lagrangian_subspace_with(&h, sel, tol)?;
    let x = sub.solution(tol.rcond)?;
    check_residual(data, &x, tol)?;
    Ok(x)
}

pub(crate) fn check_residual<T: Real>(data: &RiccatiData<T>, x: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<T> {
    let r = data.residual(x).norm_fro();
    let bound = tol.residual * data.residual_scale(x);
    if r > bound {
        return Err(Error::Residual { residual: r.as_f64(), bound: bound.as_f64() });
    }
    Ok(r)
}

pub fn solve_extremal<T: Real>(data: &RiccatiData<T>) -> Result<ExtremalSolutions<T>> {
    solve_extremal_with(data, &Tolerances::default())
}

pub fn solve_extremal_with<T: Real>(data: &RiccatiData<T>, tol: &Tolerances<T>) -> Result<ExtremalSolutions<T>> {
    let x_minus = solve_with_selection(data, Selection::LeftHalf, tol)?;
    let x_plus = solve_with_selection(data, Selection::RightHalf, tol)?;
    let closed_loop_minus = eigenvalues(&data.closed_loop(&x_minus))?;
    let closed_loop_plus = eigenvalues(&data.closed_loop(&x_plus))?;
    let residual_minus = data.residual(&x_minus).norm_fro();
    let residual_plus = data.residual(&x_plus).norm_fro();
    let loewner_ordered = loewner_leq(&x_minus, &x_plus, tol.loewner)?;
    Ok(ExtremalSolutions {
        x_minus,
        x_plus,
        closed_loop_minus,
        closed_loop_plus,
        residual_minus,
        residual_plus,
        loewner_ordered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn example2(k: M) -> RiccatiData<f64> {
        RiccatiData::new(M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]), M::identity(2), k).unwrap()
    }

    #[test]
    fn example2_extremal_pair() {
        let e = solve_extremal(&example2(M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]))).unwrap();
        assert!(e.x_minus.approx_eq(&M::from_real_rows(&[[1.0, 1.0], [1.0, 2.0]]), 1e-10));
        assert!(e.x_plus.approx_eq(&M::from_real_rows(&[[5.0, 1.0], [1.0, 8.0]]), 1e-10));
        assert!(e.closed_loop_minus.iter().all(|z| z.re < 0.0));
        assert!(e.closed_loop_plus.iter().all(|z| z.re > 0.0));
        assert!(e.loewner_ordered);
    }

    #[test]
    fn vertex_has_unique_solution() {
        // K + diag(4, 9)
        let e = solve_extremal(&example2(M::from_real_rows(&[[10.0, 8.0], [8.0, 26.0]]))).unwrap();
        let x = M::from_real_rows(&[[3.0, 1.0], [1.0, 5.0]]);
        assert!(e.x_minus.approx_eq(&x, 1e-6), "{:?}", e.x_minus);
        assert!(e.x_plus.approx_eq(&x, 1e-6), "{:?}", e.x_plus);
    }

    #[test]
    fn zero_k_with_stable_f_gives_zero_minimal_solution() {
        let d = RiccatiData::new(
            M::from_real_rows(&[[-1.0, 3.0], [0.0, -2.0]]),
            M::from_real_rows(&[[2.0, 1.0], [1.0, 1.0]]),
            M::zeros(2, 2),
        )
        .unwrap();
        let x = solve_with_selection(&d, Selection::LeftHalf, &Tolerances::default()).unwrap();
        assert!(x.norm_fro() < 1e-12);
    }
}
