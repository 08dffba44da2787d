//! Lagrangian invariant subspaces and the Hamiltonian Schur form.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{order_schur_mask, rcond, schur_decompose, solve, ComplexMatrix, SchurForm};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

use super::data::{symplectic_j, HamiltonianMatrix};

/// Which `n` eigenvalues of the `2n×2n` Hamiltonian span the subspace.
pub enum Selection<'a, T> {
    /// Open left half plane; imaginary-axis clusters contribute half their members.
    LeftHalf,
    /// Open right half plane; imaginary-axis clusters contribute half their members.
    RightHalf,
    /// Arbitrary predicate on eigenvalues.
    Predicate(&'a dyn Fn(Complex<T>) -> bool),
    /// Explicit eigenvalue list, matched to the computed spectrum by nearest distance.
    Chosen(Vec<Complex<T>>),
}

/// `H·[W₁; W₂] = [W₁; W₂]·T₁₁` with orthonormal, isotropic columns.
#[derive(Clone, Debug)]
pub struct LagrangianSubspace<T> {
    pub w1: ComplexMatrix<T>,
    pub w2: ComplexMatrix<T>,
    pub t11: ComplexMatrix<T>,
    pub selected_spectrum: Vec<Complex<T>>,
    /// `‖W₁ᴴW₂ − W₂ᴴW₁‖_F`.
    pub isotropy_defect: T,
}

impl<T: Real> LagrangianSubspace<T> {
    /// Reciprocal condition number of `W₁`.
    pub fn w1_rcond(&self) -> T {
        rcond(&self.w1).unwrap_or_else(|_| T::zero())
    }

    /// `X = W₂W₁⁻¹`, symmetrized.
    pub fn solution(&self, rcond_floor: T) -> Result<ComplexMatrix<T>> {
        let rc = self.w1_rcond();
        if rc <= rcond_floor {
            return Err(Error::W1Singular { rcond: rc.as_f64() });
        }
        // X W₁ = W₂  ⇔  W₁ᴴ Xᴴ = W₂ᴴ
        let xh = solve(&self.w1.adjoint(), &self.w2.adjoint())?;
        Ok(xh.adjoint().hermitian_part())
    }

    /// `‖H·W − W·T₁₁‖_F`.
    pub fn invariance_error(&self, h: &HamiltonianMatrix<T>) -> T {
        let w = self.w1.vstack(&self.w2);
        (&(&h.to_matrix() * &w) - &(&w * &self.t11)).norm_fro()
    }
}

fn isotropy<T: Real>(q: &ComplexMatrix<T>, n: usize) -> T {
    let w1 = q.submatrix(0, 0, n, n);
    let w2 = q.submatrix(n, 0, n, n);
    (&(&w1.adjoint() * &w2) - &(&w2.adjoint() * &w1)).norm_fro()
}

const MAX_CLUSTER_CANDIDATES: usize = 256;

/// Group indices of axis eigenvalues whose imaginary parts chain within `gap`.
fn axis_clusters<T: Real>(ev: &[Complex<T>], axis: &[usize], gap: T) -> Vec<Vec<usize>> {
    let mut idx = axis.to_vec();
    idx.sort_by(|&a, &b| ev[a].im.partial_cmp(&ev[b].im).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(c) if ev[i].im - ev[*c.last().unwrap()].im <= gap => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Candidate masks, most plausible first.
fn candidate_masks<T: Real>(ev: &[Complex<T>], sel: &Selection<'_, T>, imag_tol: T, n: usize) -> Vec<Vec<bool>> {
    let left = match sel {
        Selection::LeftHalf => true,
        Selection::RightHalf => false,
        Selection::Predicate(p) => return vec![ev.iter().map(|&z| p(z)).collect()],
        Selection::Chosen(list) => {
            let mut mask = vec![false; ev.len()];
            for z in list {
                let best = (0..ev.len())
                    .filter(|&i| !mask[i])
                    .min_by(|&a, &b| (ev[a] - z).norm().partial_cmp(&(ev[b] - z).norm()).unwrap());
                if let Some(i) = best {
                    mask[i] = true;
                }
            }
            return vec![mask];
        }
    };
    let mut base = vec![false; ev.len()];
    let mut axis = Vec::new();
    for (i, z) in ev.iter().enumerate() {
        if z.re.abs() <= imag_tol {
            axis.push(i);
        } else {
            base[i] = (z.re < T::zero()) == left;
        }
    }
    if axis.is_empty() {
        return vec![base];
    }
    let gap = imag_tol.sqrt().max(imag_tol * T::lit(1e3));
    let clusters = axis_clusters(ev, &axis, gap);
    let need_total = n.saturating_sub(base.iter().filter(|&&b| b).count());
    // half of each cluster, alternating rounding for odd sizes
    let mut take: Vec<usize> = Vec::new();
    let mut up = true;
    for c in &clusters {
        let h = if c.len() % 2 == 0 {
            c.len() / 2
        } else {
            up = !up;
            c.len() / 2 + usize::from(!up)
        };
        take.push(h);
    }
    let assigned: usize = take.iter().sum();
    if assigned != need_total {
        // fall back to a global split of the axis eigenvalues
        let mut all = axis.clone();
        all.sort_by(|&a, &b| order_key(ev[a], left).partial_cmp(&order_key(ev[b], left)).unwrap());
        let mut m = base.clone();
        for &i in all.iter().take(need_total) {
            m[i] = true;
        }
        return vec![m];
    }
    // per-cluster ordered candidate lists
    let per: Vec<Vec<Vec<usize>>> = clusters
        .iter()
        .zip(&take)
        .map(|(c, &h)| {
            let mut sorted = c.clone();
            sorted.sort_by(|&a, &b| order_key(ev[a], left).partial_cmp(&order_key(ev[b], left)).unwrap());
            combinations(sorted.len(), h)
                .into_iter()
                .map(|comb| comb.into_iter().map(|j| sorted[j]).collect())
                .collect()
        })
        .collect();
    let mut masks = Vec::new();
    let mut counters = vec![0usize; per.len()];
    loop {
        let mut m = base.clone();
        for (ci, &k) in counters.iter().enumerate() {
            for &i in &per[ci][k] {
                m[i] = true;
            }
        }
        masks.push(m);
        if masks.len() >= MAX_CLUSTER_CANDIDATES {
            break;
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == per.len() {
                return masks;
            }
            counters[d] += 1;
            if counters[d] < per[d].len() {
                break;
            }
            counters[d] = 0;
            d += 1;
        }
    }
    masks
}

fn order_key<T: Real>(z: Complex<T>, left: bool) -> T {
    if left {
        z.re + z.im * T::lit(1e-3)
    } else {
        -z.re + z.im * T::lit(1e-3)
    }
}

pub fn lagrangian_subspace<T: Real>(h: &HamiltonianMatrix<T>, sel: Selection<'_, T>) -> Result<LagrangianSubspace<T>> {
    lagrangian_subspace_with(h, sel, &Tolerances::default())
}

pub fn lagrangian_subspace_with<T: Real>(
    h: &HamiltonianMatrix<T>,
    sel: Selection<'_, T>,
    tol: &Tolerances<T>,
) -> Result<LagrangianSubspace<T>> {
    let n = h.n();
    let hm = h.to_matrix();
    let schur = schur_decompose(&hm)?;
    lagrangian_from_schur(&schur, n, sel, h.imag_tol(tol.imag), tol.lagrangian)
}

pub(crate) fn lagrangian_from_schur<T: Real>(
    schur: &SchurForm<T>,
    n: usize,
    sel: Selection<'_, T>,
    imag_tol: T,
    iso_tol: T,
) -> Result<LagrangianSubspace<T>> {
    let ev = schur.eigenvalues();
    let masks = candidate_masks(&ev, &sel, imag_tol, n);
    let mut best: Option<(T, SchurForm<T>)> = None;
    let mut last_err = None;
    for mask in masks {
        let got = mask.iter().filter(|&&b| b).count();
        if got != n {
            last_err = Some(Error::SelectionSize { expected: n, got });
            continue;
        }
        let ordered = match order_schur_mask(schur, &mask) {
            Ok(o) => o,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let d = isotropy(&ordered.q, n);
        let better = best.as_ref().is_none_or(|(bd, _)| d < *bd);
        if better {
            best = Some((d, ordered));
        }
        if d <= iso_tol {
            break;
        }
    }
    let (defect, ordered) = match best {
        Some(b) => b,
        None => return Err(last_err.unwrap_or(Error::SelectionSize { expected: n, got: 0 })),
    };
    if defect > iso_tol {
        return Err(Error::NotLagrangian { defect: defect.as_f64() });
    }
    Ok(LagrangianSubspace {
        w1: ordered.q.submatrix(0, 0, n, n),
        w2: ordered.q.submatrix(n, 0, n, n),
        t11: ordered.t.submatrix(0, 0, n, n),
        selected_spectrum: ordered.t.diagonal()[..n].to_vec(),
        isotropy_defect: defect,
    })
}

/// Unitary symplectic `Q = [[W₁, −W₂], [W₂, W₁]]` and `T = QᴴHQ`.
#[derive(Clone, Debug)]
pub struct HamiltonianSchur<T> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
    pub subspace: LagrangianSubspace<T>,
}

impl<T: Real> HamiltonianSchur<T> {
    /// `‖QᴴQ − I‖_F`.
    pub fn unitarity_error(&self) -> T {
        (&(&self.q.adjoint() * &self.q) - &ComplexMatrix::identity(self.q.rows())).norm_fro()
    }

    /// `‖QᴴJQ − J‖_F`.
    pub fn symplecticity_error(&self) -> T {
        let j = symplectic_j::<T>(self.q.rows() / 2);
        (&(&(&self.q.adjoint() * &j) * &self.q) - &j).norm_fro()
    }

    /// Frobenius norm of the lower-left block of `T`.
    pub fn lower_left_norm(&self) -> T {
        let n = self.q.rows() / 2;
        self.t.submatrix(n, 0, n, n).norm_fro()
    }

    pub fn t11(&self) -> ComplexMatrix<T> {
        let n = self.q.rows() / 2;
        self.t.submatrix(0, 0, n, n)
    }
}

pub fn hamiltonian_schur<T: Real>(h: &HamiltonianMatrix<T>, sel: Selection<'_, T>) -> Result<HamiltonianSchur<T>> {
    hamiltonian_schur_with(h, sel, &Tolerances::default())
}

pub fn hamiltonian_schur_with<T: Real>(
    h: &HamiltonianMatrix<T>,
    sel: Selection<'_, T>,
    tol: &Tolerances<T>,
) -> Result<HamiltonianSchur<T>> {
    let sub = lagrangian_subspace_with(h, sel, tol)?;
    let q = ComplexMatrix::block2x2(&sub.w1, &-&sub.w2, &sub.w2, &sub.w1);
    let t = &(&q.adjoint() * &h.to_matrix()) * &q;
    Ok(HamiltonianSchur { q, t, subspace: sub })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structured::data::RiccatiData;

    type M = ComplexMatrix<f64>;

    fn example2() -> HamiltonianMatrix<f64> {
        HamiltonianMatrix::from_blocks(
            M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]),
            M::identity(2),
            M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]),
        )
        .unwrap()
    }

    #[test]
    fn extremal_solutions_of_example2() {
        let h = example2();
        let xm = lagrangian_subspace(&h, Selection::LeftHalf).unwrap().solution(1e-12).unwrap();
        let xp = lagrangian_subspace(&h, Selection::RightHalf).unwrap().solution(1e-12).unwrap();
        assert!(xm.approx_eq(&M::from_real_rows(&[[1.0, 1.0], [1.0, 2.0]]), 1e-10));
        assert!(xp.approx_eq(&M::from_real_rows(&[[5.0, 1.0], [1.0, 8.0]]), 1e-10));
    }

    #[test]
    fn block_diagonal_trivial_case() {
        let h = HamiltonianMatrix::from_blocks(M::from_real_diagonal(&[-1.0, -2.0]), M::zeros(2, 2), M::zeros(2, 2)).unwrap();
        let s = lagrangian_subspace(&h, Selection::LeftHalf).unwrap();
        assert!(s.w2.norm_fro() < 1e-14);
        assert_eq!(s.solution(1e-12).unwrap().norm_fro(), 0.0);
        let hs = hamiltonian_schur(&HamiltonianMatrix::from_blocks(-M::identity(2), M::zeros(2, 2), M::zeros(2, 2)).unwrap(), Selection::LeftHalf)
            .unwrap();
        assert!(hs.t11().approx_eq(&-M::identity(2), 1e-14));
    }

    #[test]
    fn hamiltonian_schur_is_symplectic() {
        let hs = hamiltonian_schur(&example2(), Selection::LeftHalf).unwrap();
        assert!(hs.unitarity_error() < 1e-10);
        assert!(hs.symplecticity_error() < 1e-10);
        assert!(hs.lower_left_norm() < 1e-8 * example2().norm_fro());
        let mut ev: Vec<f64> = hs.t11().diagonal().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] + 3.0).abs() < 1e-10 && (ev[1] + 2.0).abs() < 1e-10);
    }

    #[test]
    fn j_has_no_lagrangian_subspace() {
        // H = J: F = 0, G = I, K = I; eigenvalues ±i, each eigenspace J-definite
        let h = HamiltonianMatrix::from_blocks(M::zeros(2, 2), M::identity(2), M::identity(2)).unwrap();
        assert!(matches!(lagrangian_subspace(&h, Selection::LeftHalf), Err(Error::NotLagrangian { .. })));
        assert!(matches!(hamiltonian_schur(&h, Selection::RightHalf), Err(Error::NotLagrangian { .. })));
    }

    #[test]
    fn wrong_count_is_a_selection_error() {
        let pred = |z: Complex<f64>| z.re < -2.5;
        let r = lagrangian_subspace(&example2(), Selection::Predicate(&pred));
        assert!(matches!(r, Err(Error::SelectionSize { expected: 2, got: 1 })));
    }

    #[test]
    fn mixed_selection_is_not_lagrangian() {
        // {−2, 2} is closed under λ ↦ −λ̄ pairing only trivially; isotropy fails
        let chosen = vec![Complex::new(-2.0, 0.0), Complex::new(2.0, 0.0)];
        let r = lagrangian_subspace(&example2(), Selection::Chosen(chosen));
        assert!(matches!(r, Err(Error::NotLagrangian { .. })));
        let ok = vec![Complex::new(-2.0, 0.0), Complex::new(3.0, 0.0)];
        let x = lagrangian_subspace(&example2(), Selection::Chosen(ok)).unwrap().solution(1e-12).unwrap();
        let d = RiccatiData::new(example2().f().clone(), M::identity(2), example2().k().clone()).unwrap();
        assert!(d.residual(&x).norm_fro() < 1e-9);
    }
}
