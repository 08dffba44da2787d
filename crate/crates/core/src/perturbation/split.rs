//! Structured block decoupling of `H(t)` into two smaller Hamiltonians.
//!
//! With `F = diag(F₁₁, F₂₂)`, `G = diag(G₁₁, G₂₂)`, `K = diag(K₁₁, K₂₂)` at
//! `t = 0`, the permuted matrix `P̃ᴴH(t)P̃ = [[A₁₁, A₁₂], [A₂₁, A₂₂]]` (state
//! order `1, 1′, 2, 2′`) is block diagonalized by the symplectic
//! `S = [[I, X], [Y, I]]·diag(S₁⁻¹, S₂⁻¹)` where `Y` solves
//! `A₂₂Y − YA₁₁ − YA₁₂Y + A₂₁ = 0`, `X = J₁YᴴJ₂`, `S₁² = I − XY` and
//! `S₂² = I − YX`.

use crate::error::{Error, Result};
use crate::linalg::{
    inverse, norm2, order_schur_mask, principal_sqrt, schur_decompose, solve_sylvester, svd, ComplexMatrix,
    SylvesterSolution,
};
use crate::scalar::Real;
use crate::structured::{hamiltonian_defect, symplectic_j, HamiltonianMatrix};

use super::direction::{perturbed_hamiltonian, PerturbationDirection};

const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMethod {
    Trivial,
    Newton,
    OrderedSchur,
}

#[derive(Clone, Debug)]
pub struct SplitResult<T> {
    /// `H̃₁(t)`, Hamiltonian of order `2n₁`.
    pub h1: ComplexMatrix<T>,
    /// `H̃₂(t)`, Hamiltonian of order `2n₂`.
    pub h2: ComplexMatrix<T>,
    pub y: ComplexMatrix<T>,
    pub s1: ComplexMatrix<T>,
    pub s2: ComplexMatrix<T>,
    /// Residual of the quadratic equation for `Y`.
    pub riccati_residual: T,
    /// `‖off-diagonal blocks of S⁻¹H̃S‖_F`.
    pub decoupling_residual: T,
    /// Separation of the diagonal blocks `A₁₁`, `A₂₂` (smallest singular
    /// value of the Sylvester operator).
    pub separation: T,
    /// `2‖A₂₁‖₂/sep`, the a-priori bound on `‖Y‖₂`.
    pub y_bound: T,
    pub method: SplitMethod,
    pub iterations: usize,
}

impl<T: Real> SplitResult<T> {
    /// Hamiltonian defects of the two blocks.
    pub fn structure_defects(&self) -> (T, T) {
        (hamiltonian_defect(&self.h1), hamiltonian_defect(&self.h2))
    }
}

/// State permutation `(1, 1′, 2, 2′)` for a split after `n1` states.
fn permutation(n: usize, n1: usize) -> Vec<usize> {
    let n2 = n - n1;
    let mut p = Vec::with_capacity(2 * n);
    p.extend(0..n1);
    p.extend(n..n + n1);
    p.extend(n1..n);
    p.extend(n + n1..n + n1 + n2);
    p
}

fn sylvester_separation<T: Real>(a11: &ComplexMatrix<T>, a22: &ComplexMatrix<T>) -> T {
    // Y ↦ A₂₂Y − YA₁₁ as a dense operator on vec(Y)
    let m = a22.rows();
    let k = a11.rows();
    if m == 0 || k == 0 {
        return T::infinity();
    }
    let op = &ComplexMatrix::identity(k).kron(a22) - &a11.transpose().kron(&ComplexMatrix::identity(m));
    svd(&op).min_singular()
}

fn riccati_residual<T: Real>(
    a11: &ComplexMatrix<T>,
    a12: &ComplexMatrix<T>,
    a21: &ComplexMatrix<T>,
    a22: &ComplexMatrix<T>,
    y: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    &(&(&(a22 * y) - &(y * a11)) - &(&(y * a12) * y)) + a21
}

/// Decouple `H₀ + tJΔ` into the Hamiltonians carrying the spectra of the
/// first `n1` and the last `n − n1` states of the block-diagonal `H₀`.
pub fn split_by_spectrum<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    t: T,
    n1: usize,
) -> Result<SplitResult<T>> {
    let n = h0.n();
    if n1 > n {
        return Err(Error::Dimension(format!("split index {n1} exceeds order {n}")));
    }
    let n2 = n - n1;
    let off = |m: &ComplexMatrix<T>| m.submatrix(0, n1, n1, n2).norm_fro() + m.submatrix(n1, 0, n2, n1).norm_fro();
    let scale = T::one() + h0.norm_fro();
    let block_tol = T::lit(1e-12) * scale;
    if off(h0.f()) + off(h0.g()) + off(h0.k()) > block_tol {
        return Err(Error::InvalidInput("H₀ is not block diagonal for the requested split".into()));
    }
    let ht = perturbed_hamiltonian(h0, d, t)?.to_matrix();
    let p = permutation(n, n1);
    let hp = ht.select(&p, &p);
    let m1 = 2 * n1;
    let m2 = 2 * n2;
    let a11 = hp.submatrix(0, 0, m1, m1);
    let a12 = hp.submatrix(0, m1, m1, m2);
    let a21 = hp.submatrix(m1, 0, m2, m1);
    let a22 = hp.submatrix(m1, m1, m2, m2);

    let sep = sylvester_separation(&a11, &a22);
    let n12 = norm2(&a12);
    let n21 = norm2(&a21);
    let coupling = T::lit(2.0) * (n12 * n21).sqrt();
    if coupling >= sep {
        // the coupling scales linearly in t, so this is the admissible step
        let bound = if coupling > T::zero() { t * sep / coupling } else { T::infinity() };
        return Err(Error::StepTooLarge { t: t.as_f64(), bound: bound.as_f64() });
    }
    let y_bound = if sep.is_finite() { T::lit(2.0) * n21 / sep } else { T::zero() };

    let (y, method, iterations) = if n21 == T::zero() && n12 == T::zero() {
        (ComplexMatrix::zeros(m2, m1), SplitMethod::Trivial, 0)
    } else {
        match newton(&a11, &a12, &a21, &a22, scale) {
            Ok((y, it)) => (y, SplitMethod::Newton, it),
            Err(_) => (schur_graph(&hp, &a11, m1)?, SplitMethod::OrderedSchur, 0),
        }
    };
    let riccati_res = riccati_residual(&a11, &a12, &a21, &a22, &y).norm_fro();

    let j1 = symplectic_j::<T>(n1);
    let j2 = symplectic_j::<T>(n2);
    let x = &(&j1 * &y.adjoint()) * &j2;
    let i1 = ComplexMatrix::identity(m1);
    let i2 = ComplexMatrix::identity(m2);
    let s1 = if m1 == 0 { i1.clone() } else { principal_sqrt(&(&i1 - &(&x * &y)))? };
    let s2 = if m2 == 0 { i2.clone() } else { principal_sqrt(&(&i2 - &(&y * &x)))? };
    let s1_inv = inverse(&s1)?;
    let s2_inv = inverse(&s2)?;
    let big = ComplexMatrix::block2x2(&i1, &x, &y, &i2);
    let s = &big * &ComplexMatrix::block_diag(&[&s1_inv, &s2_inv]);
    let dec = &(&inverse(&s)? * &hp) * &s;
    let decoupling_residual = dec.submatrix(0, m1, m1, m2).norm_fro() + dec.submatrix(m1, 0, m2, m1).norm_fro();
    Ok(SplitResult {
        h1: dec.submatrix(0, 0, m1, m1),
        h2: dec.submatrix(m1, m1, m2, m2),
        y,
        s1,
        s2,
        riccati_residual: riccati_res,
        decoupling_residual,
        separation: sep,
        y_bound,
        method,
        iterations,
    })
}

fn newton<T: Real>(
    a11: &ComplexMatrix<T>,
    a12: &ComplexMatrix<T>,
    a21: &ComplexMatrix<T>,
    a22: &ComplexMatrix<T>,
    scale: T,
) -> Result<(ComplexMatrix<T>, usize)> {
    let mut y = ComplexMatrix::zeros(a22.rows(), a11.rows());
    let tol = T::lit(64.0) * T::epsilon() * scale;
    let mut prev = T::infinity();
    for it in 0..NEWTON_MAX_ITER {
        let r = riccati_residual(a11, a12, a21, a22, &y);
        let rn = r.norm_fro();
        if rn <= tol * (T::one() + y.norm_fro()) {
            return Ok((y, it));
        }
        if rn > prev && it > 2 {
            return Err(Error::IterationFailed(format!("residual grew to {:.3e}", rn.as_f64())));
        }
        prev = rn;
        // (A₂₂ − YA₁₂)E − E(A₁₁ + A₁₂Y) = −R
        let a = a22 - &(&y * a12);
        let b = -(a11 + &(a12 * &y));
        let e = match solve_sylvester(&a, &b, &r)? {
            SylvesterSolution::Unique(e) => e,
            _ => return Err(Error::IterationFailed("singular Newton step".into())),
        };
        y = &y + &e;
    }
    Err(Error::IterationFailed(format!("no convergence in {NEWTON_MAX_ITER} Newton steps")))
}

/// `Y = U₂U₁⁻¹` from the invariant subspace nearest to `Λ(A₁₁)`.
fn schur_graph<T: Real>(hp: &ComplexMatrix<T>, a11: &ComplexMatrix<T>, m1: usize) -> Result<ComplexMatrix<T>> {
    let schur = schur_decompose(hp)?;
    let ev = schur.eigenvalues();
    let target = crate::linalg::eigenvalues(a11)?;
    // greedy nearest assignment of m1 eigenvalues
    let mut mask = vec![false; ev.len()];
    for z in &target {
        if let Some(i) = (0..ev.len())
            .filter(|&i| !mask[i])
            .min_by(|&a, &b| (ev[a] - z).norm().partial_cmp(&(ev[b] - z).norm()).unwrap_or(std::cmp::Ordering::Equal))
        {
            mask[i] = true;
        }
    }
    let ord = order_schur_mask(&schur, &mask)?;
    let u = ord.leading_basis(m1);
    let u1 = u.submatrix(0, 0, m1, m1);
    let u2 = u.submatrix(m1, 0, hp.rows() - m1, m1);
    Ok(&u2 * &inverse(&u1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;
    use num_complex::Complex;

    type M = ComplexMatrix<f64>;

    /// Example 2 in the coordinates of its minimal solution: `F + GX₋ = diag(−2, −3)`.
    fn decoupled_example2() -> HamiltonianMatrix<f64> {
        HamiltonianMatrix::from_blocks(M::from_real_diagonal(&[-2.0, -3.0]), M::identity(2), M::zeros(2, 2)).unwrap()
    }

    fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn zero_step_returns_diagonal_blocks() {
        let h = decoupled_example2();
        let d = PerturbationDirection::delta11_only(M::from_real_rows(&[[1.0, 0.5], [0.5, 2.0]])).unwrap();
        let r = split_by_spectrum(&h, &d, 0.0, 1).unwrap();
        assert_eq!(r.method, SplitMethod::Trivial);
        assert_eq!(r.y.norm_fro(), 0.0);
        assert!(r.s1.approx_eq(&M::identity(2), 0.0) && r.s2.approx_eq(&M::identity(2), 0.0));
        assert!(r.h1.approx_eq(&M::from_real_rows(&[[-2.0, 1.0], [0.0, 2.0]]), 0.0));
    }

    #[test]
    fn example2_blocks_follow_closed_form() {
        let (a, b, c) = (1.0, 2.0, 0.7);
        let t = 1e-4;
        let d = PerturbationDirection::delta11_only(M::from_real_rows(&[[a, c], [c, b]])).unwrap();
        let r = split_by_spectrum(&decoupled_example2(), &d, t, 1).unwrap();
        let (ta, tb, tc) = (t * a, t * b, t * c);
        let disc = ((ta - tb + 5.0f64).powi(2) + 4.0 * tc * tc).sqrt();
        let small = (0.5 * (13.0 - ta - tb - disc)).sqrt();
        let large = (0.5 * (13.0 - ta - tb + disc)).sqrt();
        let e1 = sorted(eigenvalues(&r.h1).unwrap());
        let e2 = sorted(eigenvalues(&r.h2).unwrap());
        assert!((e1[0].re + small).abs() < 1e-8 && (e1[1].re - small).abs() < 1e-8, "{e1:?}");
        assert!((e2[0].re + large).abs() < 1e-8 && (e2[1].re - large).abs() < 1e-8, "{e2:?}");
        let (d1, d2) = r.structure_defects();
        assert!(d1 < 1e-12 && d2 < 1e-12);
        assert!(r.y.norm_fro() <= r.y_bound * 2f64.sqrt() * 2.0);
        assert!(r.decoupling_residual < 1e-12);
    }

    #[test]
    fn excessive_step_is_rejected() {
        let d = PerturbationDirection::delta11_only(M::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]])).unwrap();
        assert!(matches!(
            split_by_spectrum(&decoupled_example2(), &d, 1e3, 1),
            Err(Error::StepTooLarge { .. })
        ));
    }
}
