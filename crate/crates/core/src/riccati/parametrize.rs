//! Solutions obtained from Lagrangian subspaces of the decoupled
//! closed-loop Hamiltonian.

use crate::error::{Error, Result};
use crate::linalg::{inverse, rcond, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::{
    decouple_imaginary, lagrangian_subspace_with, DecoupledForm, HamiltonianMatrix, RiccatiData, Selection,
};
use crate::tolerance::Tolerances;

/// `[[T₁, G₁₁], [0, −T₁ᴴ]]`, the Hamiltonian whose Lagrangian invariant
/// subspaces parametrize all solutions around `X₀`.
pub fn reduced_hamiltonian<T: Real>(dec: &DecoupledForm<T>) -> Result<HamiltonianMatrix<T>> {
    let n1 = dec.n1();
    HamiltonianMatrix::from_blocks(dec.t1.clone(), dec.g11.clone(), ComplexMatrix::zeros(n1, n1))
}

/// `X = X₀ + M⁻ᴴ·diag(U₂₁U₁₁⁻¹, 0)·M⁻¹`.
pub fn solution_from_subspace<T: Real>(
    x0: &ComplexMatrix<T>,
    dec: &DecoupledForm<T>,
    u11: &ComplexMatrix<T>,
    u21: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let n = x0.rows();
    let n1 = dec.n1();
    if u11.shape() != (n1, n1) || u21.shape() != (n1, n1) || dec.m.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "U₁₁ {:?}, U₂₁ {:?} against T₁ of order {n1} and X₀ of order {n}",
            u11.shape(),
            u21.shape()
        )));
    }
    let mut y = ComplexMatrix::zeros(n, n);
    if n1 > 0 {
        let rc = rcond(u11)?;
        if rc <= T::lit(1e-12) {
            return Err(Error::Singular { rcond: rc.as_f64() });
        }
        y.set_submatrix(0, 0, &(u21 * &inverse(u11)?).hermitian_part());
    }
    Ok((x0 + &(&(&dec.m_inv.adjoint() * &y) * &dec.m_inv)).hermitian_part())
}

/// Decouple around the solution `x0` and build the solution belonging to
/// the Lagrangian subspace `sel` of the reduced Hamiltonian.
pub fn solution_from_selection<T: Real>(
    data: &RiccatiData<T>,
    x0: &ComplexMatrix<T>,
    sel: Selection<'_, T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    let fc = data.closed_loop(x0);
    let scale = T::one() + fc.norm_fro() + data.g().norm_fro();
    let dec = decouple_imaginary(&fc, data.g(), tol.imag * scale)?;
    let n1 = dec.n1();
    let x = if n1 == 0 {
        x0.clone()
    } else {
        let h = reduced_hamiltonian(&dec)?;
        let sub = lagrangian_subspace_with(&h, sel, tol)?;
        solution_from_subspace(x0, &dec, &sub.w1, &sub.w2)?
    };
    super::extremal::check_residual(data, &x, tol)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riccati::solve_extremal;

    type M = ComplexMatrix<f64>;

    fn example2() -> RiccatiData<f64> {
        RiccatiData::new(
            M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]),
            M::identity(2),
            M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]),
        )
        .unwrap()
    }

    #[test]
    fn trivial_subspace_returns_base_solution() {
        let d = example2();
        let x0 = solve_extremal(&d).unwrap().x_minus;
        let fc = d.closed_loop(&x0);
        let dec = decouple_imaginary(&fc, d.g(), 1e-8).unwrap();
        let x = solution_from_subspace(&x0, &dec, &M::identity(2), &M::zeros(2, 2)).unwrap();
        assert!(x.approx_eq(&x0, 1e-14));
    }

    #[test]
    fn anti_stable_selection_recovers_maximal_solution() {
        let d = example2();
        let e = solve_extremal(&d).unwrap();
        let tol = Tolerances::default();
        let x = solution_from_selection(&d, &e.x_minus, Selection::RightHalf, &tol).unwrap();
        assert!(x.approx_eq(&e.x_plus, 1e-9), "{x:?}");
        // stable selection keeps X₋
        let x = solution_from_selection(&d, &e.x_minus, Selection::LeftHalf, &tol).unwrap();
        assert!(x.approx_eq(&e.x_minus, 1e-9));
    }

    #[test]
    fn increment_from_minimal_solution_is_semidefinite() {
        let d = example2();
        let e = solve_extremal(&d).unwrap();
        let fc = d.closed_loop(&e.x_minus);
        let dec = decouple_imaginary(&fc, d.g(), 1e-8).unwrap();
        let h = reduced_hamiltonian(&dec).unwrap();
        let sub = lagrangian_subspace_with(&h, Selection::RightHalf, &Tolerances::default()).unwrap();
        let y = (&sub.w2 * &inverse(&sub.w1).unwrap()).hermitian_part();
        assert!(crate::linalg::definiteness(&y, 1e-10).unwrap().kind.is_psd());
    }

    #[test]
    fn purely_imaginary_closed_loop_gives_unique_solution() {
        // F = [[0, 1], [−1, 0]], G = K = 0: closed loop has spectrum ±i
        let d = RiccatiData::new(M::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]), M::zeros(2, 2), M::zeros(2, 2)).unwrap();
        let dec = decouple_imaginary(d.f(), d.g(), 1e-8).unwrap();
        assert_eq!(dec.n1(), 0);
        let x = solution_from_selection(&d, &M::zeros(2, 2), Selection::LeftHalf, &Tolerances::default()).unwrap();
        assert_eq!(x.norm_fro(), 0.0);
    }
}
