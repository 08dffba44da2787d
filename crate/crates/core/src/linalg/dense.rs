//! LU, Cholesky, triangular solves and a one-sided Jacobi SVD.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
    anorm: T,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        a.ensure_square()?;
        let n = a.rows();
        let anorm = a.norm_one();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().partial_cmp(&lu[(j, k)].norm()).unwrap())
                .unwrap();
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[(k, k)];
            if pivot.is_zero() {
                continue;
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, perm, anorm })
    }

    fn has_zero_pivot(&self) -> bool {
        self.lu.diagonal().iter().any(|d| d.is_zero())
    }

    /// Solve `A·X = B`. Fails only on an exactly zero pivot; use [`Lu::rcond`]
    /// to judge numerical singularity.
    pub fn solve(&self, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::Dimension(format!("rhs has {} rows, expected {}", b.rows(), n)));
        }
        if self.has_zero_pivot() {
            return Err(Error::Singular { rcond: 0.0 });
        }
        let mut x = ComplexMatrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for c in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix<T>> {
        self.solve(&ComplexMatrix::identity(self.lu.rows()))
    }

    /// Reciprocal 1-norm condition number, `1/(‖A‖₁‖A⁻¹‖₁)`; zero when singular.
    pub fn rcond(&self) -> T {
        if self.lu.rows() == 0 {
            return T::one();
        }
        match self.inverse() {
            Ok(inv) => {
                let d = self.anorm * inv.norm_one();
                if d.is_finite() && d > T::zero() {
                    T::one() / d
                } else {
                    T::zero()
                }
            }
            Err(_) => T::zero(),
        }
    }

    pub fn determinant(&self) -> Complex<T> {
        let n = self.lu.rows();
        let mut det = Complex::one();
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        // parity of the permutation
        let mut seen = vec![false; n];
        let mut odd = false;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        if odd {
            -det
        } else {
            det
        }
    }
}

/// Reciprocal condition below which a matrix is treated as singular.
pub fn default_rcond_floor<T: Real>() -> T {
    T::epsilon() * T::lit(100.0)
}

/// Solve `A·X = B`, rejecting numerically singular `A`.
pub fn solve<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let lu = Lu::new(a)?;
    let rc = lu.rcond();
    if rc <= default_rcond_floor() {
        return Err(Error::Singular { rcond: rc.as_f64() });
    }
    lu.solve(b)
}

pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

pub fn rcond<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    Ok(Lu::new(a)?.rcond())
}

/// Lower Cholesky factor `L` with `A = L·Lᴴ`.
pub fn cholesky<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_square()?;
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= T::zero() {
            return Err(Error::NotPositiveDefinite { what: "Cholesky input", margin: d.as_f64() });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex::new(djj, T::zero());
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solve `L·X = B` for lower-triangular `L`.
pub fn solve_lower<T: Real>(l: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Solve `U·X = B` for upper-triangular `U`.
pub fn solve_upper<T: Real>(u: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = u.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= u[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / u[(i, i)];
        }
    }
    x
}

/// Thin singular value decomposition `A = U·diag(s)·Vᴴ`, `s` descending.
///
/// `u` is `m×p` and `v` is `n×p` with `p = min(m, n)`. Columns of `u` that
/// belong to zero singular values are completed to an orthonormal set.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Numerical rank with absolute cutoff `tol`.
    pub fn rank(&self, tol: T) -> usize {
        self.s.iter().filter(|&&x| x > tol).count()
    }

    pub fn max_singular(&self) -> T {
        self.s.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min_singular(&self) -> T {
        self.s.last().copied().unwrap_or_else(T::zero)
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (m, n) = a.shape();
    // columns stored contiguously for the Hestenes sweeps
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Complex::one() } else { Complex::zero() }).collect())
        .collect();
    let eps = T::epsilon();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase.conj());
                rotate(&mut vcols, p, q, c, s, phase.conj());
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let s: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let smax = s.first().copied().unwrap_or_else(T::zero);
    let floor = smax * eps * T::lit(m.max(1) as f64);
    let mut u = ComplexMatrix::zeros(m, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut filled = 0;
    for (k, &j) in order.iter().enumerate() {
        v.set_column(k, &vcols[j]);
        if norms[j] > floor && norms[j] > T::zero() {
            let inv = T::one() / norms[j];
            let col: Vec<_> = cols[j].iter().map(|&z| z * inv).collect();
            u.set_column(k, &col);
            filled = k + 1;
        }
    }
    if filled < n {
        let basis = u.submatrix(0, 0, m, filled);
        let comp = orthonormal_complement(&basis);
        for k in filled..n {
            u.set_column(k, &comp.column(k - filled));
        }
    }
    Svd { u, s, v }
}

fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

fn dot<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    x.iter().zip(y).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
}

// (x_p, x_q) <- (c·x_p − s·φ·x_q, s·x_p + c·φ·x_q)
fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], p: usize, q: usize, c: T, s: T, phi: Complex<T>) {
    let (lo, hi) = cols.split_at_mut(q);
    let (xp, xq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phi;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `q`.
pub fn orthonormal_complement<T: Real>(q: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let m = q.rows();
    let want = m - q.cols().min(m);
    let mut basis: Vec<Vec<Complex<T>>> = (0..q.cols()).map(|j| q.column(j)).collect();
    let mut out = Vec::with_capacity(want);
    while out.len() < want {
        // pick the coordinate vector with the largest residual
        let mut best: Option<(T, Vec<Complex<T>>)> = None;
        for i in 0..m {
            let mut e = vec![Complex::zero(); m];
            e[i] = Complex::one();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &e);
                    for (x, y) in e.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let nrm = norm_sqr(&e).sqrt();
            if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
                best = Some((nrm, e));
            }
        }
        let (nrm, mut e) = best.expect("nonempty candidate set");
        let inv = T::one() / nrm;
        e.iter_mut().for_each(|z| *z *= inv);
        basis.push(e.clone());
        out.push(e);
    }
    let mut c = ComplexMatrix::zeros(m, want);
    for (j, col) in out.iter().enumerate() {
        c.set_column(j, col);
    }
    c
}

/// Orthonormal basis for the range of `a`, keeping singular values above `tol`.
pub fn orth<T: Real>(a: &ComplexMatrix<T>, tol: T) -> ComplexMatrix<T> {
    if a.cols() == 0 {
        return ComplexMatrix::zeros(a.rows(), 0);
    }
    let d = svd(a);
    let r = d.rank(tol);
    d.u.submatrix(0, 0, a.rows(), r)
}

/// Spectral norm.
pub fn norm2<T: Real>(a: &ComplexMatrix<T>) -> T {
    if a.is_empty() {
        return T::zero();
    }
    svd(a).max_singular()
}

/// Result of a minimum-norm least-squares solve.
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    pub x: ComplexMatrix<T>,
    pub residual: T,
    pub rank: usize,
}

/// Minimum-norm least-squares solution of `A·X ≈ B` via the SVD, with
/// singular values below `rel_cut·σ_max` treated as zero.
pub fn lstsq_min_norm<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    rel_cut: T,
) -> Result<LeastSquares<T>> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("lstsq: A has {} rows, B has {}", a.rows(), b.rows())));
    }
    let d = svd(a);
    let cut = rel_cut * d.max_singular();
    let r = d.rank(cut);
    let ur = d.u.submatrix(0, 0, a.rows(), r);
    let vr = d.v.submatrix(0, 0, a.cols(), r);
    let mut coef = &ur.adjoint() * b;
    for i in 0..r {
        let inv = T::one() / d.s[i];
        for j in 0..coef.cols() {
            coef[(i, j)] *= inv;
        }
    }
    let x = &vr * &coef;
    let residual = (&(a * &x) - b).norm_fro();
    Ok(LeastSquares { x, residual, rank: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random(rng: &mut ChaCha8Rng, m: usize, n: usize) -> M {
        M::from_fn(m, n, |_, _| cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn lu_solves_and_detects_singularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random(&mut rng, 5, 5);
        let b = random(&mut rng, 5, 2);
        let x = solve(&a, &b).unwrap();
        assert!((&(&a * &x) - &b).norm_fro() < 1e-12);
        let s = M::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(solve(&s, &M::identity(2)), Err(Error::Singular { .. })));
    }

    #[test]
    fn determinant_matches_2x2_formula() {
        let a = M::from_real_rows(&[[0.0, 2.0], [3.0, 1.0]]);
        let d = Lu::new(&a).unwrap().determinant();
        assert!((d - cplx(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cholesky_roundtrip_and_rejection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = random(&mut rng, 4, 4);
        let a = &(&r * &r.adjoint()) + &M::identity(4);
        let l = cholesky(&a).unwrap();
        assert!((&(&l * &l.adjoint()) - &a).norm_fro() < 1e-12);
        assert!(cholesky(&M::from_real_diagonal(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn svd_reconstructs_wide_and_tall() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(5, 3), (3, 5), (4, 4)] {
            let a = random(&mut rng, m, n);
            let d = svd(&a);
            let p = m.min(n);
            let s = M::from_real_diagonal(&d.s);
            let rec = &(&d.u * &s) * &d.v.adjoint();
            assert!((&rec - &a).norm_fro() < 1e-12, "{m}x{n}");
            assert!((&(&d.u.adjoint() * &d.u) - &M::identity(p)).norm_fro() < 1e-12);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_of_rank_deficient_completes_basis() {
        let a = M::from_real_rows(&[[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]]);
        let d = svd(&a);
        assert!((d.s[0] - 2.0).abs() < 1e-14);
        assert!(d.s[1].abs() < 1e-14);
        assert!((&(&d.u.adjoint() * &d.u) - &M::identity(2)).norm_fro() < 1e-12);
    }

    #[test]
    fn min_norm_lstsq_on_consistent_underdetermined() {
        // x + y = 2 has minimum-norm solution (1, 1)
        let a = M::from_real_rows(&[[1.0, 1.0]]);
        let b = M::from_real_rows(&[[2.0]]);
        let ls = lstsq_min_norm(&a, &b, 1e-12).unwrap();
        assert!((ls.x[(0, 0)].re - 1.0).abs() < 1e-14 && (ls.x[(1, 0)].re - 1.0).abs() < 1e-14);
        assert!(ls.residual < 1e-14);
    }

    #[test]
    fn complement_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = orth(&random(&mut rng, 5, 2), 1e-12);
        let c = orthonormal_complement(&q);
        let full = q.hstack(&c);
        assert!((&(&full.adjoint() * &full) - &M::identity(5)).norm_fro() < 1e-12);
    }
}
