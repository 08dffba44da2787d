//! Spectral snapshots of Hamiltonians and structure inertia.

use num_complex::Complex;

use crate::error::Result;
use crate::linalg::{eigh, order_schur_mask, schur_decompose, ComplexMatrix, SchurForm};
use crate::scalar::Real;
use crate::structured::{symplectic_j, HamiltonianMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InertiaSign {
    Plus,
    Minus,
    Mixed,
}

impl InertiaSign {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Plus => "+1",
            Self::Minus => "-1",
            Self::Mixed => "mixed",
        }
    }
}

/// Signs of `i·VᴴJV` on an invariant subspace.
#[derive(Clone, Debug)]
pub struct InertiaIndices<T> {
    pub multiplicity: usize,
    pub plus: usize,
    pub minus: usize,
    /// Eigenvalues of `i·VᴴJV` inside the dead-band; nonzero for defective clusters.
    pub zero: usize,
    /// Orthonormal basis `V` of the invariant subspace.
    pub basis: ComplexMatrix<T>,
    /// `i·VᴴJV`.
    pub w: ComplexMatrix<T>,
    pub w_eigenvalues: Vec<T>,
    pub eigenvalues: Vec<Complex<T>>,
}

impl<T: Real> InertiaIndices<T> {
    pub fn sign(&self) -> InertiaSign {
        if self.multiplicity > 0 && self.minus == self.multiplicity {
            InertiaSign::Minus
        } else if self.multiplicity > 0 && self.plus == self.multiplicity {
            InertiaSign::Plus
        } else {
            InertiaSign::Mixed
        }
    }
}

/// A group of eigenvalues on the imaginary axis.
#[derive(Clone, Debug)]
pub struct ImaginaryCluster<T> {
    /// Mean imaginary part.
    pub center: T,
    pub eigenvalues: Vec<Complex<T>>,
    pub multiplicity: usize,
    pub inertia: InertiaSign,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Debug)]
pub struct SpectrumSnapshot<T> {
    pub t: T,
    pub eigenvalues: Vec<Complex<T>>,
    pub imaginary_groups: Vec<ImaginaryCluster<T>>,
    /// `max_λ min_μ |μ + λ̄|`.
    pub symmetry_defect: T,
    /// `min |Re λ|`.
    pub min_abs_re: T,
}

impl<T: Real> SpectrumSnapshot<T> {
    pub fn imaginary_count(&self) -> usize {
        self.imaginary_groups.iter().map(|c| c.multiplicity).sum()
    }
}

/// Basis of the invariant subspace of `a` for the eigenvalues flagged in
/// `mask` (indexed like `schur.eigenvalues()`).
pub(crate) fn invariant_basis<T: Real>(schur: &SchurForm<T>, mask: &[bool]) -> Result<ComplexMatrix<T>> {
    let k = mask.iter().filter(|&&b| b).count();
    Ok(order_schur_mask(schur, mask)?.leading_basis(k))
}

/// `max_λ min_μ |μ + λ̄|` over the spectrum.
pub fn symmetry_defect<T: Real>(ev: &[Complex<T>]) -> T {
    ev.iter()
        .map(|l| {
            let m = -l.conj();
            ev.iter().map(|mu| (*mu - m).norm()).fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max)
}

fn inertia_of_basis<T: Real>(basis: ComplexMatrix<T>, eigenvalues: Vec<Complex<T>>, rel: T) -> Result<InertiaIndices<T>> {
    let n = basis.rows() / 2;
    let w = (&(&basis.adjoint() * &symplectic_j::<T>(n)) * &basis).scale(Complex::i()).hermitian_part();
    let e = eigh(&w)?;
    // W has norm of order one for an orthonormal basis
    let band = rel * (T::one() + w.norm_fro());
    let plus = e.values.iter().filter(|&&l| l > band).count();
    let minus = e.values.iter().filter(|&&l| l < -band).count();
    let zero = e.values.len() - plus - minus;
    Ok(InertiaIndices { multiplicity: basis.cols(), plus, minus, zero, basis, w, w_eigenvalues: e.values, eigenvalues })
}

/// Structure inertia of the eigenvalues within `eps` of `iα`.
pub fn inertia_indices<T: Real>(h: &HamiltonianMatrix<T>, alpha: T, eps: T) -> Result<InertiaIndices<T>> {
    let schur = schur_decompose(&h.to_matrix())?;
    inertia_indices_from_schur(&schur, alpha, eps, T::lit(1e-8))
}

pub(crate) fn inertia_indices_from_schur<T: Real>(
    schur: &SchurForm<T>,
    alpha: T,
    eps: T,
    rel: T,
) -> Result<InertiaIndices<T>> {
    let ev = schur.eigenvalues();
    let target = Complex::new(T::zero(), alpha);
    let mask: Vec<bool> = ev.iter().map(|&z| (z - target).norm() <= eps).collect();
    let selected: Vec<_> = ev.iter().zip(&mask).filter(|(_, &m)| m).map(|(&z, _)| z).collect();
    let basis = invariant_basis(schur, &mask)?;
    inertia_of_basis(basis, selected, rel)
}

/// Inertia of the subspace belonging to an arbitrary eigenvalue subset.
pub(crate) fn inertia_of_mask<T: Real>(schur: &SchurForm<T>, mask: &[bool], rel: T) -> Result<InertiaIndices<T>> {
    let ev = schur.eigenvalues();
    let selected: Vec<_> = ev.iter().zip(mask).filter(|(_, &m)| m).map(|(&z, _)| z).collect();
    let basis = invariant_basis(schur, mask)?;
    inertia_of_basis(basis, selected, rel)
}

/// Group axis eigenvalues (`|Re λ| ≤ imag_tol`) whose imaginary parts
/// chain within `gap`. Returns index lists.
pub(crate) fn axis_groups<T: Real>(ev: &[Complex<T>], imag_tol: T, gap: T) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..ev.len()).filter(|&i| ev[i].re.abs() <= imag_tol).collect();
    idx.sort_by(|&a, &b| ev[a].im.partial_cmp(&ev[b].im).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(c) if ev[i].im - ev[*c.last().expect("nonempty")].im <= gap => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Clustering gap used for axis eigenvalues: defective clusters split by
/// roughly `√imag_tol`, so anything closer is treated as one group.
pub(crate) fn cluster_gap<T: Real>(imag_tol: T) -> T {
    imag_tol.sqrt().max(imag_tol * T::lit(1e3))
}

/// Eigenvalues near the axis grouped by chaining within the cluster gap;
/// a group counts when one member lies inside the axis band. Collisions
/// spread by `O(√ε)`, so members of one defective cluster can straddle the
/// band edge.
pub(crate) fn axis_clusters<T: Real>(ev: &[Complex<T>], imag_tol: T) -> Vec<Vec<usize>> {
    let gap = cluster_gap(imag_tol);
    let near: Vec<usize> = (0..ev.len()).filter(|&i| ev[i].re.abs() <= gap).collect();
    let mut label: Vec<Option<usize>> = vec![None; ev.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &near {
        if label[i].is_some() {
            continue;
        }
        let id = groups.len();
        let mut stack = vec![i];
        let mut members = Vec::new();
        label[i] = Some(id);
        while let Some(a) = stack.pop() {
            members.push(a);
            for &b in &near {
                if label[b].is_none() && (ev[a] - ev[b]).norm() <= gap {
                    label[b] = Some(id);
                    stack.push(b);
                }
            }
        }
        groups.push(members);
    }
    groups.retain(|g| g.iter().any(|&i| ev[i].re.abs() <= imag_tol));
    groups
}

/// Eigenvalues, imaginary clusters with inertia, and the symmetry defect.
pub fn spectrum_snapshot<T: Real>(h: &HamiltonianMatrix<T>, t: T, imag_tol: T) -> Result<SpectrumSnapshot<T>> {
    let schur = schur_decompose(&h.to_matrix())?;
    let ev = schur.eigenvalues();
    let mut groups = Vec::new();
    for g in axis_groups(&ev, imag_tol, cluster_gap(imag_tol)) {
        let mut mask = vec![false; ev.len()];
        for &i in &g {
            mask[i] = true;
        }
        let ii = inertia_of_mask(&schur, &mask, T::lit(1e-8))?;
        let center = g.iter().map(|&i| ev[i].im).fold(T::zero(), |a, b| a + b) / T::lit(g.len() as f64);
        groups.push(ImaginaryCluster {
            center,
            eigenvalues: g.iter().map(|&i| ev[i]).collect(),
            multiplicity: g.len(),
            inertia: ii.sign(),
            plus: ii.plus,
            minus: ii.minus,
        });
    }
    let min_abs_re = ev.iter().map(|z| z.re.abs()).fold(T::infinity(), T::min);
    Ok(SpectrumSnapshot { t, symmetry_defect: symmetry_defect(&ev), eigenvalues: ev, imaginary_groups: groups, min_abs_re })
}
