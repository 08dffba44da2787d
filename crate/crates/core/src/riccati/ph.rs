//! Port-Hamiltonian realization from a positive definite storage matrix.

use crate::error::{Error, Result};
use crate::linalg::{definiteness, hermitian_inv_sqrt, hermitian_sqrt, ComplexMatrix, Definiteness, DefinitenessVerdict};
use crate::scalar::Real;
use crate::structured::{from_state_space, StateSpace};
use crate::tolerance::Tolerances;

use super::ari::ari_residual_with;

/// `ẋ = (J − R)x + (B̂ − P̂)u`, `y = (B̂ + P̂)ᴴx + (S + N)u` in the
/// coordinates `X^½x`.
#[derive(Clone, Debug)]
pub struct PHRealization<T> {
    pub j: ComplexMatrix<T>,
    pub r: ComplexMatrix<T>,
    pub b_hat: ComplexMatrix<T>,
    pub p_hat: ComplexMatrix<T>,
    pub s: ComplexMatrix<T>,
    pub n_skew: ComplexMatrix<T>,
    /// `[[R, P̂], [P̂ᴴ, S]]`.
    pub w: ComplexMatrix<T>,
    /// `X^½`.
    pub x_sqrt: ComplexMatrix<T>,
    /// `X^-½`.
    pub x_inv_sqrt: ComplexMatrix<T>,
    pub w_verdict: DefinitenessVerdict<T>,
}

impl<T: Real> PHRealization<T> {
    /// Largest entrywise deviation of `(J − R, B̂ − P̂, B̂ + P̂, S + N)` from
    /// `(X^½AX^-½, X^½B, X^-½Cᴴ, D)`.
    pub fn reconstruction_error(&self, ss: &StateSpace<T>) -> Result<T> {
        let xi = &self.x_inv_sqrt;
        let a_hat = &(&self.x_sqrt * &ss.a) * xi;
        let e1 = (&self.j - &self.r).max_abs_diff(&a_hat);
        let e2 = (&self.b_hat - &self.p_hat).max_abs_diff(&(&self.x_sqrt * &ss.b));
        let e3 = (&self.b_hat + &self.p_hat).max_abs_diff(&(xi * &ss.c.adjoint()));
        let e4 = (&self.s + &self.n_skew).max_abs_diff(&ss.d);
        Ok(e1.max(e2).max(e3).max(e4))
    }
}

pub fn ph_realization<T: Real>(ss: &StateSpace<T>, x: &ComplexMatrix<T>) -> Result<PHRealization<T>> {
    ph_realization_with(ss, x, &Tolerances::default())
}

pub fn ph_realization_with<T: Real>(
    ss: &StateSpace<T>,
    x: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<PHRealization<T>> {
    let x = x.hermitian_part();
    let xv = definiteness(&x, tol.psd)?;
    if xv.kind != Definiteness::PositiveDefinite {
        return Err(Error::NotPositiveDefinite { what: "storage matrix X", margin: xv.margin.as_f64() });
    }
    let data = from_state_space(ss)?;
    let ari = ari_residual_with(&x, &data, tol)?;
    if !ari.accepted {
        let max_eig = ari.verdict.eigenvalues.last().copied().unwrap_or_else(T::zero);
        return Err(Error::NotAriSolution { max_eig: max_eig.as_f64() });
    }
    let xs = hermitian_sqrt(&x, tol.psd)?;
    let xis = hermitian_inv_sqrt(&x)?;
    let a_hat = &(&xs * &ss.a) * &xis;
    let j = a_hat.skew_part();
    let r = -a_hat.hermitian_part();
    let half = T::lit(0.5);
    let xb = &xs * &ss.b;
    let xc = &xis * &ss.c.adjoint();
    let b_hat = (&xb + &xc).scale_real(half);
    let p_hat = (&xc - &xb).scale_real(half);
    let s = ss.d.hermitian_part();
    let n_skew = ss.d.skew_part();
    let w = ComplexMatrix::block2x2(&r, &p_hat, &p_hat.adjoint(), &s).hermitian_part();
    let w_verdict = definiteness(&w, tol.loewner)?;
    if !w_verdict.kind.is_psd() {
        return Err(Error::NotSemidefinite { what: "dissipation matrix W", margin: w_verdict.margin.as_f64() });
    }
    Ok(PHRealization { j, r, b_hat, p_hat, s, n_skew, w, x_sqrt: xs, x_inv_sqrt: xis, w_verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riccati::solve_extremal;

    type M = ComplexMatrix<f64>;

    #[test]
    fn trivially_dissipative_system() {
        let ss = StateSpace::new(M::identity(2).scale_real(-1.0), M::zeros(2, 1), M::zeros(1, 2), M::identity(1)).unwrap();
        let ph = ph_realization(&ss, &M::identity(2)).unwrap();
        assert_eq!(ph.j.norm_fro(), 0.0);
        assert!(ph.r.approx_eq(&M::identity(2), 0.0));
        assert_eq!(ph.b_hat.norm_fro() + ph.p_hat.norm_fro() + ph.n_skew.norm_fro(), 0.0);
        assert!(ph.s.approx_eq(&M::identity(1), 0.0));
    }

    /// A realization of the Example 2 triple with `D + Dᴴ = 2I`:
    /// `G = BBᴴ/2 = I`, `K = CᴴC/2`, `F = A − BC/2`.
    fn example2_system() -> StateSpace<f64> {
        let k = M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]);
        let lc = crate::linalg::cholesky(&k).unwrap();
        let c = lc.adjoint().scale_real(2f64.sqrt());
        let b = M::identity(2).scale_real(2f64.sqrt());
        let f = M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]);
        let a = &f + &(&b * &c).scale_real(0.5);
        StateSpace::new(a, b, c, M::from_real_rows(&[[1.0, 0.5], [-0.5, 1.0]])).unwrap()
    }

    #[test]
    fn example2_realization_has_semidefinite_w() {
        let ss = example2_system();
        let d = from_state_space(&ss).unwrap();
        assert!(d.k().approx_eq(&M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]), 1e-12));
        assert!(d.g().approx_eq(&M::identity(2), 1e-12));
        let x = solve_extremal(&d).unwrap().x_minus;
        let ph = ph_realization(&ss, &x).unwrap();
        assert!(ph.w_verdict.kind.is_psd());
        assert_eq!((&ph.j + &ph.j.adjoint()).norm_max(), 0.0);
        assert_eq!((&ph.n_skew + &ph.n_skew.adjoint()).norm_max(), 0.0);
        assert!(ph.reconstruction_error(&ss).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_or_non_solution() {
        let ss = example2_system();
        assert!(matches!(
            ph_realization(&ss, &M::from_real_diagonal(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(ph_realization(&ss, &M::identity(2).scale_real(0.01)), Err(Error::NotAriSolution { .. })));
    }
}
