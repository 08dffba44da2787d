//! Complex Schur decomposition and reordering.
//!
//! Householder reduction to Hessenberg form followed by single-shift QR
//! with Wilkinson shifts. Reordering swaps adjacent diagonal entries with
//! Givens rotations.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `A = Q·T·Qᴴ` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct SchurForm<T> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
}

impl<T: Real> SchurForm<T> {
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        self.t.diagonal()
    }

    pub fn order(&self) -> usize {
        self.t.rows()
    }

    /// `‖QTQᴴ − a‖_F`.
    pub fn factorization_error(&self, a: &ComplexMatrix<T>) -> T {
        (&(&(&self.q * &self.t) * &self.q.adjoint()) - a).norm_fro()
    }

    /// `‖QᴴQ − I‖_F`.
    pub fn orthogonality_error(&self) -> T {
        (&(&self.q.adjoint() * &self.q) - &ComplexMatrix::identity(self.order())).norm_fro()
    }

    /// First `k` Schur vectors: an orthonormal basis of the invariant
    /// subspace for the leading `k` eigenvalues.
    pub fn leading_basis(&self, k: usize) -> ComplexMatrix<T> {
        self.q.submatrix(0, 0, self.order(), k)
    }
}

/// Sweep budget factor: at most `SWEEP_FACTOR·n` QR iterations in total.
pub const SWEEP_FACTOR: usize = 40;

/// Givens pair `(c, s)` with `[c s; −s̄ c]·[x; y] = [r; 0]`, `c` real.
pub(crate) fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), Complex::zero());
    }
    if ax == T::zero() {
        return (T::zero(), Complex::one());
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

// rows (i, i+1), columns c0..
fn rot_rows<T: Real>(m: &mut ComplexMatrix<T>, i: usize, c: T, s: Complex<T>, c0: usize) {
    for j in c0..m.cols() {
        let a = m[(i, j)];
        let b = m[(i + 1, j)];
        m[(i, j)] = a * c + s * b;
        m[(i + 1, j)] = b * c - s.conj() * a;
    }
}

// columns (j, j+1), rows 0..r1
fn rot_cols<T: Real>(m: &mut ComplexMatrix<T>, j: usize, c: T, s: Complex<T>, r1: usize) {
    for i in 0..r1 {
        let a = m[(i, j)];
        let b = m[(i, j + 1)];
        m[(i, j)] = a * c + s.conj() * b;
        m[(i, j + 1)] = b * c - s * a;
    }
}

fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let phase = if x[0].norm() == T::zero() { Complex::one() } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = T::lit(2.0) / vnorm2;
        // H <- P H, P = I − β v vᴴ acting on rows k+1..n
        for j in 0..n {
            let mut s = Complex::zero();
            for (idx, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + idx, j)];
            }
            s *= beta;
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= *vi * s;
            }
        }
        // H <- H P and Q <- Q P
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = Complex::zero();
                for (idx, vi) in v.iter().enumerate() {
                    s += m[(i, k + 1 + idx)] * vi;
                }
                s *= beta;
                for (idx, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + idx)] -= s * vi.conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    (h, q)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let half = T::lit(0.5);
    let tr = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let l1 = tr + disc;
    let l2 = tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur_decompose<T: Real>(a: &ComplexMatrix<T>) -> Result<SchurForm<T>> {
    a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SchurForm { q: ComplexMatrix::zeros(0, 0), t: ComplexMatrix::zeros(0, 0) });
    }
    let (mut h, mut q) = hessenberg(a);
    let eps = T::epsilon();
    let anorm = h.norm_fro();
    let smallnum = T::min_positive_value() * T::lit(n as f64) / eps;
    let budget = SWEEP_FACTOR * n.max(1);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        // locate the start of the trailing unreduced block
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == T::zero() {
                diag = anorm;
            }
            if sub <= eps * diag || sub <= smallnum {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > budget {
            return Err(Error::NoConvergence(budget));
        }
        let shift = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex::new(T::lit(0.75) * h[(hi, hi - 1)].norm(), T::zero())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        // implicit single-shift sweep over rows l..=hi
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - shift, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let c0 = if k == l { l } else { k - 1 };
            rot_rows(&mut h, k, c, s, c0);
            let r1 = (k + 3).min(hi + 1);
            rot_cols(&mut h, k, c, s, r1);
            rot_cols(&mut q, k, c, s, n);
            if k > l {
                h[(k + 1, k - 1)] = Complex::zero();
            }
        }
    }
    h.zero_strictly_lower();
    Ok(SchurForm { q, t: h })
}

/// Eigenvalues via the Schur form.
pub fn eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    Ok(schur_decompose(a)?.eigenvalues())
}

/// Swap diagonal entries `j` and `j+1` in place.
fn swap_adjacent<T: Real>(t: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>, j: usize) {
    let n = t.rows();
    let t11 = t[(j, j)];
    let t22 = t[(j + 1, j + 1)];
    let (c, s) = givens(t[(j, j + 1)], t22 - t11);
    rot_rows(t, j, c, s, j);
    rot_cols(t, j, c, s, j + 2);
    rot_cols(q, j, c, s, n);
    t[(j, j)] = t22;
    t[(j + 1, j + 1)] = t11;
    t[(j + 1, j)] = Complex::zero();
}

/// Move the eigenvalues flagged in `mask` (indexed by position on the
/// diagonal of `s.t`) to the leading block, preserving relative order.
pub fn order_schur_mask<T: Real>(s: &SchurForm<T>, mask: &[bool]) -> Result<SchurForm<T>> {
    let n = s.order();
    if mask.len() != n {
        return Err(Error::Dimension(format!("mask of length {} for order {}", mask.len(), n)));
    }
    let mut t = s.t.clone();
    let mut q = s.q.clone();
    let mut flags = mask.to_vec();
    let scale = t.norm_fro().max(T::min_positive_value());
    let tie = T::lit(8.0) * T::epsilon() * scale;
    let mut dest = 0;
    for i in 0..n {
        if !flags[i] {
            continue;
        }
        let mut j = i;
        while j > dest {
            let a = t[(j - 1, j - 1)];
            let b = t[(j, j)];
            if (a - b).norm() <= tie && t[(j - 1, j)].norm() > tie {
                return Err(Error::SwapBreakdown(format!("{a}"), format!("{b}")));
            }
            swap_adjacent(&mut t, &mut q, j - 1);
            flags.swap(j - 1, j);
            j -= 1;
        }
        dest += 1;
    }
    t.zero_strictly_lower();
    Ok(SchurForm { q, t })
}

/// Reorder so that eigenvalues satisfying `select` lead.
pub fn order_schur<T: Real>(s: &SchurForm<T>, select: impl Fn(Complex<T>) -> bool) -> Result<SchurForm<T>> {
    let mask: Vec<bool> = s.eigenvalues().into_iter().map(select).collect();
    order_schur_mask(s, &mask)
}
