//! Constructed Hamiltonians with imaginary Jordan blocks and verification of
//! the fractional splitting `λ = i(α ± (tγ)^{1/(2ρ)}) + O(t^{1/ρ})`.
//!
//! The unscrambled case is `H₁(0) = [[F₁₁, G₁₁], [0, −F₁₁ᴴ]]` with
//! `F₁₁ = iαI + diag(N̂_ρ)`, where `N̂_ρ` has `ρ×ρ` blocks of size `s_ρ` and
//! identities on the block superdiagonal, and `G₁₁ = diag(G_ρ)` carries
//! `I_{s_ρ}` in the last diagonal block of each group. Every group yields
//! `s_ρ` Jordan blocks of size `2ρ` at `iα`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, eigh, inverse, schur_decompose, svd, ComplexMatrix};
use crate::scalar::Real;
use crate::structured::HamiltonianMatrix;

use super::direction::{perturbed_hamiltonian, PerturbationDirection};
use super::sampling::{random_symplectic, random_wishart};
use super::spectrum::{inertia_of_mask, InertiaSign};

/// Upper limit on the condition number of the scrambling transform.
pub const MAX_SCRAMBLE_COND: f64 = 10.0;

/// Relative axis band used to decide whether a branch lies on `iα + iℝ`.
const AXIS_REL: f64 = 1e-3;

/// `W` eigenvalues of near-defective branches scale like `|λ − iα|^{2ρ−1}`,
/// so the inertia band must sit far below the default.
const INERTIA_REL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct JordanTestCase<T> {
    /// `(ρ, s_ρ)` with distinct `ρ`, ascending.
    pub sizes: Vec<(usize, usize)>,
    pub alpha: T,
    /// Symplectic scramble `S`; the case Hamiltonian is `S⁻¹H₁(0)S`.
    pub scramble: ComplexMatrix<T>,
    pub scramble_cond: T,
    /// `H₁(0)` before scrambling.
    pub base: HamiltonianMatrix<T>,
    /// `S⁻¹H₁(0)S`.
    pub h0: HamiltonianMatrix<T>,
    /// `Δ₁₁` in unscrambled coordinates.
    pub delta11: ComplexMatrix<T>,
    pub expected_gammas: Vec<(usize, Vec<T>)>,
}

fn normalize_sizes(sizes: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut s: Vec<(usize, usize)> = sizes.iter().copied().filter(|&(_, m)| m > 0).collect();
    s.sort_unstable();
    if s.is_empty() || s.iter().any(|&(rho, _)| rho == 0) || s.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidInput(format!("Jordan sizes {sizes:?} need distinct ρ ≥ 1 and at least one block")));
    }
    Ok(s)
}

fn order(sizes: &[(usize, usize)]) -> usize {
    sizes.iter().map(|&(rho, s)| rho * s).sum()
}

/// Index of the first sub-block (the eigenvector positions) of each group.
fn kernel_indices(sizes: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut off = 0;
    sizes
        .iter()
        .map(|&(rho, s)| {
            let idx = (off..off + s).collect();
            off += rho * s;
            idx
        })
        .collect()
}

/// `(F₁₁, G₁₁)` of the unscrambled case.
fn jordan_blocks<T: Real>(sizes: &[(usize, usize)], alpha: T) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = order(sizes);
    let mut f = ComplexMatrix::identity(n).scale(Complex::new(T::zero(), alpha));
    let mut g = ComplexMatrix::zeros(n, n);
    let mut off = 0;
    for &(rho, s) in sizes {
        for b in 0..rho - 1 {
            for i in 0..s {
                f[(off + b * s + i, off + (b + 1) * s + i)] = Complex::new(T::one(), T::zero());
            }
        }
        for i in 0..s {
            let p = off + (rho - 1) * s + i;
            g[(p, p)] = Complex::new(T::one(), T::zero());
        }
        off += rho * s;
    }
    (f, g)
}

impl<T: Real> JordanTestCase<T> {
    /// Assemble the case for a given `Δ₁₁` and symplectic scramble.
    pub fn new(
        sizes: &[(usize, usize)],
        alpha: T,
        delta11: ComplexMatrix<T>,
        scramble: ComplexMatrix<T>,
    ) -> Result<Self> {
        let sizes = normalize_sizes(sizes)?;
        let n = order(&sizes);
        if delta11.shape() != (n, n) || scramble.shape() != (2 * n, 2 * n) {
            return Err(Error::Dimension(format!(
                "Δ₁₁ {:?} and scramble {:?} for order {n}",
                delta11.shape(),
                scramble.shape()
            )));
        }
        let sv = svd(&scramble);
        let cond = sv.max_singular() / sv.min_singular();
        if !(cond <= T::lit(MAX_SCRAMBLE_COND)) {
            return Err(Error::InvalidInput(format!("scramble condition number {cond} exceeds {MAX_SCRAMBLE_COND}")));
        }
        let (f, g) = jordan_blocks(&sizes, alpha);
        let base = HamiltonianMatrix::from_blocks(f, g, ComplexMatrix::zeros(n, n))?;
        let hs = &(&inverse(&scramble)? * &base.to_matrix()) * &scramble;
        let j = crate::structured::symplectic_j::<T>(n);
        let defect = (&(&scramble.adjoint() * &j) * &scramble - &j).norm_fro();
        if defect > T::lit(1e-10) * (T::one() + scramble.norm_fro().powi(2)) {
            return Err(Error::InvalidInput(format!("scramble is not symplectic (defect {defect})")));
        }
        let h0 = HamiltonianMatrix::from_blocks(
            hs.submatrix(0, 0, n, n),
            hs.submatrix(0, n, n, n).hermitian_part(),
            -hs.submatrix(n, 0, n, n).hermitian_part(),
        )?;
        let delta11 = delta11.hermitian_part();
        let expected_gammas = schur_complement_gammas(&delta11, &sizes)?;
        Ok(Self { sizes, alpha, scramble, scramble_cond: cond, base, h0, delta11, expected_gammas })
    }

    /// Seeded case: `Δ₁₁` a full-rank Wishart sample plus `½I`, scramble with
    /// shear `½` (condition number ≈ 1.64).
    pub fn random(sizes: &[(usize, usize)], alpha: T, seed: u64) -> Result<Self> {
        let n = order(&normalize_sizes(sizes)?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = &random_wishart::<T, _>(&mut rng, n, n) + &ComplexMatrix::identity(n).scale_real(T::lit(0.5));
        let s = random_symplectic::<T, _>(&mut rng, n, T::lit(0.5));
        Self::new(sizes, alpha, d, s)
    }

    /// Same structure without scrambling.
    pub fn unscrambled(sizes: &[(usize, usize)], alpha: T, delta11: ComplexMatrix<T>) -> Result<Self> {
        let n = order(&normalize_sizes(sizes)?);
        Self::new(sizes, alpha, delta11, ComplexMatrix::identity(2 * n))
    }

    pub fn n(&self) -> usize {
        self.h0.n()
    }

    /// `SᴴΔS` with `Δ = diag(Δ₁₁, 0)`, the direction acting on `h0`.
    pub fn direction(&self) -> Result<PerturbationDirection<T>> {
        let n = self.n();
        let d = ComplexMatrix::block_diag(&[&self.delta11, &ComplexMatrix::zeros(n, n)]);
        PerturbationDirection::from_matrix(&(&(&self.scramble.adjoint() * &d) * &self.scramble))
    }

    /// Number of Jordan blocks at `iα` of each size, from the nullities of
    /// `(H₁(0) − iαI)^k` (exact for the unscrambled integer structure).
    pub fn jordan_block_counts(&self) -> Vec<(usize, usize)> {
        let h = self.base.to_matrix();
        let m = h.rows();
        let shifted = &h - &ComplexMatrix::identity(m).scale(Complex::new(T::zero(), self.alpha));
        let tol = T::lit(1e-8);
        let mut nullity = vec![0usize];
        let mut p = ComplexMatrix::identity(m);
        loop {
            p = &p * &shifted;
            let k = m - svd(&p).rank(tol);
            if k == *nullity.last().expect("nonempty") {
                break;
            }
            nullity.push(k);
        }
        // blocks of size ≥ k: nullity[k] − nullity[k−1]
        let ge: Vec<usize> = nullity.windows(2).map(|w| w[1] - w[0]).collect();
        (0..ge.len())
            .map(|k| (k + 1, ge[k] - ge.get(k + 1).copied().unwrap_or(0)))
            .filter(|&(_, c)| c > 0)
            .collect()
    }
}

/// `γ^{(ρ)}`: eigenvalues (ascending) of the Schur complement of `Π_{>ρ}`
/// in `Π_{≥ρ}`, where `Π` is `Δ₁₁` restricted to the eigenvector positions
/// ordered by `ρ`. For the largest `ρ` this is `Π_{ρρ}` itself.
pub fn schur_complement_gammas<T: Real>(
    delta11: &ComplexMatrix<T>,
    sizes: &[(usize, usize)],
) -> Result<Vec<(usize, Vec<T>)>> {
    let sizes = normalize_sizes(sizes)?;
    let n = order(&sizes);
    if delta11.shape() != (n, n) {
        return Err(Error::Dimension(format!("Δ₁₁ is {:?}, expected ({n}, {n})", delta11.shape())));
    }
    let groups = kernel_indices(&sizes);
    let all: Vec<usize> = groups.iter().flatten().copied().collect();
    let pi = delta11.select(&all, &all).hermitian_part();
    if let Err(Error::NotPositiveDefinite { margin, .. }) = cholesky(&pi) {
        return Err(Error::NotPositiveDefinite { what: "observability block Π", margin });
    }
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for (gi, &(rho, s)) in sizes.iter().enumerate() {
        let own: Vec<usize> = (start..start + s).collect();
        let rest: Vec<usize> = (start + s..all.len()).collect();
        let pjj = pi.select(&own, &own);
        let sc = if rest.is_empty() {
            pjj
        } else {
            let prr = pi.select(&rest, &rest);
            let prj = pi.select(&rest, &own);
            &pjj - &(&prj.adjoint() * &crate::linalg::solve(&prr, &prj)?)
        };
        let mut g = eigh(&sc)?.values;
        g.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        out.push((rho, g));
        start += s;
        debug_assert_eq!(groups[gi].len(), s);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchDirection {
    Up,
    Down,
}

/// Log-log fit of one on-axis branch `|λ − iα|` against `t`.
#[derive(Clone, Debug)]
pub struct BranchFit<T> {
    pub rho: usize,
    pub direction: BranchDirection,
    /// Position among the `s_ρ` branches, ordered by magnitude.
    pub index: usize,
    pub gamma: T,
    pub exponent: T,
    pub exponent_rel_err: T,
    /// `|λ − iα|/t^{1/(2ρ)}` at the smallest `t`.
    pub coefficient: T,
    /// `γ^{1/(2ρ)}`.
    pub predicted_coefficient: T,
    pub coefficient_rel_err: T,
}

/// Axis branch counts and inertia of one group at one `t`.
#[derive(Clone, Debug)]
pub struct SplitCheck<T> {
    pub t: T,
    pub rho: usize,
    pub s: usize,
    pub up: usize,
    pub down: usize,
    pub off_axis: usize,
    pub up_inertia: InertiaSign,
    pub down_inertia: InertiaSign,
    /// Smallest `|eig(W)|` over the up and down branch sets.
    pub min_abs_w: T,
}

impl<T: Real> SplitCheck<T> {
    pub fn ok(&self) -> bool {
        self.up == self.s
            && self.down == self.s
            && self.up_inertia == InertiaSign::Minus
            && self.down_inertia == InertiaSign::Plus
    }
}

#[derive(Clone, Debug)]
pub struct FractionalReport<T> {
    pub gammas: Vec<(usize, Vec<T>)>,
    pub fits: Vec<BranchFit<T>>,
    pub checks: Vec<SplitCheck<T>>,
    /// Values of `t` at which the groups could not be separated by magnitude.
    pub degenerate_t: Vec<T>,
    /// Arguments of `(λ − iα)/|λ − iα|` per group at the smallest `t`, sorted.
    pub angles: Vec<(usize, Vec<T>)>,
}

impl<T: Real> FractionalReport<T> {
    pub fn max_exponent_err(&self) -> T {
        self.fits.iter().map(|f| f.exponent_rel_err).fold(T::zero(), T::max)
    }

    pub fn max_coefficient_err(&self) -> T {
        self.fits.iter().map(|f| f.coefficient_rel_err).fold(T::zero(), T::max)
    }

    pub fn counts_ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(SplitCheck::ok)
    }

    pub fn passes(&self, exponent_tol: T, coefficient_tol: T) -> bool {
        self.degenerate_t.is_empty()
            && self.counts_ok()
            && !self.fits.is_empty()
            && self.max_exponent_err() <= exponent_tol
            && self.max_coefficient_err() <= coefficient_tol
    }
}

/// Log-spaced grid `10^{lo} … 10^{hi}` with `points` entries.
pub fn log_grid<T: Real>(lo: f64, hi: f64, points: usize) -> Vec<T> {
    if points < 2 {
        return vec![T::lit(10f64.powf(lo))];
    }
    (0..points).map(|i| T::lit(10f64.powf(lo + (hi - lo) * i as f64 / (points - 1) as f64))).collect()
}

/// Default grid `1e-10 … 1e-4`.
pub fn default_t_grid<T: Real>() -> Vec<T> {
    log_grid(-10.0, -4.0, 13)
}

fn slope<T: Real>(x: &[T], y: &[T]) -> T {
    let n = T::lit(x.len() as f64);
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = y.iter().fold(T::zero(), |a, &b| a + b) / n;
    let sxy = x.iter().zip(y).fold(T::zero(), |a, (&u, &v)| a + (u - mx) * (v - my));
    let sxx = x.iter().fold(T::zero(), |a, &u| a + (u - mx) * (u - mx));
    sxy / sxx
}

/// Track the eigenvalues of `case.h0 + tJΔ` over `t_grid` and compare with
/// the predicted fractional expansion. The `γ` values are computed from `d`
/// mapped back to unscrambled coordinates.
pub fn fractional_split_verify<T: Real>(
    case: &JordanTestCase<T>,
    d: &PerturbationDirection<T>,
    t_grid: &[T],
) -> Result<FractionalReport<T>> {
    let n = case.n();
    if d.n() != n {
        return Err(Error::Dimension(format!("direction of order {} for case of order {n}", d.n())));
    }
    if t_grid.len() < 2 || t_grid.iter().any(|&t| !(t > T::zero())) {
        return Err(Error::InvalidInput("t grid needs at least two positive values".into()));
    }
    let s_inv = inverse(&case.scramble)?;
    let d_base = &(&s_inv.adjoint() * &d.assembled()) * &s_inv;
    let gammas = schur_complement_gammas(&d_base.submatrix(0, 0, n, n), &case.sizes)?;
    let mut grid = t_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let center = Complex::new(T::zero(), case.alpha);

    // per group: magnitudes of up and down branches at each t
    let k = case.sizes.len();
    let mut up_mag: Vec<Vec<Vec<T>>> = vec![Vec::new(); k];
    let mut down_mag: Vec<Vec<Vec<T>>> = vec![Vec::new(); k];
    let mut checks = Vec::new();
    let mut degenerate_t = Vec::new();
    let mut angles = Vec::new();
    let mut used_t = Vec::new();
    for (ti, &t) in grid.iter().enumerate() {
        let ht = perturbed_hamiltonian(&case.h0, d, t)?;
        let schur = schur_decompose(&ht.to_matrix())?;
        let ev = schur.eigenvalues();
        let mut order_idx: Vec<usize> = (0..ev.len()).collect();
        order_idx.sort_by(|&a, &b| {
            (ev[a] - center).norm().partial_cmp(&(ev[b] - center).norm()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut start = 0;
        let mut degenerate = false;
        let mut group_idx = Vec::with_capacity(k);
        for &(rho, s) in &case.sizes {
            let len = 2 * rho * s;
            let idx: Vec<usize> = order_idx[start..start + len].to_vec();
            if start + len < order_idx.len() && start > 0 {
                // magnitude gap to the neighbouring groups
                let lo = (ev[order_idx[start - 1]] - center).norm();
                let first = (ev[idx[0]] - center).norm();
                if first <= lo * T::lit(1.05) {
                    degenerate = true;
                }
            }
            group_idx.push(idx);
            start += len;
        }
        if degenerate {
            degenerate_t.push(t);
            continue;
        }
        used_t.push(t);
        for (gi, idx) in group_idx.iter().enumerate() {
            let (rho, s) = case.sizes[gi];
            let mut up_mask = vec![false; ev.len()];
            let mut down_mask = vec![false; ev.len()];
            let mut ups = Vec::new();
            let mut downs = Vec::new();
            let mut off_axis = 0;
            for &i in idx {
                let mu = ev[i] - center;
                if mu.re.abs() <= T::lit(AXIS_REL) * mu.norm() {
                    if mu.im > T::zero() {
                        up_mask[i] = true;
                        ups.push(mu.im);
                    } else {
                        down_mask[i] = true;
                        downs.push(-mu.im);
                    }
                } else {
                    off_axis += 1;
                }
            }
            let rel = T::lit(INERTIA_REL);
            let (up_inertia, w_up) = if ups.is_empty() {
                (InertiaSign::Mixed, T::zero())
            } else {
                let ii = inertia_of_mask(&schur, &up_mask, rel)?;
                (ii.sign(), ii.w_eigenvalues.iter().map(|w| w.abs()).fold(T::infinity(), T::min))
            };
            let (down_inertia, w_down) = if downs.is_empty() {
                (InertiaSign::Mixed, T::zero())
            } else {
                let ii = inertia_of_mask(&schur, &down_mask, rel)?;
                (ii.sign(), ii.w_eigenvalues.iter().map(|w| w.abs()).fold(T::infinity(), T::min))
            };
            checks.push(SplitCheck {
                t,
                rho,
                s,
                up: ups.len(),
                down: downs.len(),
                off_axis,
                up_inertia,
                down_inertia,
                min_abs_w: w_up.min(w_down),
            });
            ups.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            downs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            up_mag[gi].push(ups);
            down_mag[gi].push(downs);
            if (ti == 0 || angles.len() < k)
                && angles.len() == gi {
                    let mut a: Vec<T> = idx.iter().map(|&i| (ev[i] - center).arg()).collect();
                    a.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
                    angles.push((rho, a));
                }
        }
    }
    if used_t.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "branches collide at every grid point except {} (degenerate t: {:?})",
            used_t.len(),
            degenerate_t.iter().map(|t| t.as_f64()).collect::<Vec<_>>()
        )));
    }
    let log_t: Vec<T> = used_t.iter().map(|t| t.ln()).collect();
    let mut fits = Vec::new();
    for (gi, &(rho, s)) in case.sizes.iter().enumerate() {
        let p = T::one() / T::lit((2 * rho) as f64);
        for (dir, mags) in [(BranchDirection::Up, &up_mag[gi]), (BranchDirection::Down, &down_mag[gi])] {
            // fit only when every sample has the full branch set
            if mags.iter().any(|m| m.len() != s) {
                continue;
            }
            for i in 0..s {
                let y: Vec<T> = mags.iter().map(|m| m[i].ln()).collect();
                let exponent = slope(&log_t, &y);
                let gamma = gammas[gi].1[i];
                let coefficient = mags[0][i] / used_t[0].powf(p);
                let predicted = gamma.powf(p);
                fits.push(BranchFit {
                    rho,
                    direction: dir,
                    index: i,
                    gamma,
                    exponent,
                    exponent_rel_err: ((exponent - p) / p).abs(),
                    coefficient,
                    predicted_coefficient: predicted,
                    coefficient_rel_err: ((coefficient - predicted) / predicted).abs(),
                });
            }
        }
    }
    Ok(FractionalReport { gammas, fits, checks, degenerate_t, angles })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn single_block_gamma_is_the_entry() {
        let g = schur_complement_gammas(&M::from_real_rows(&[[2.5]]), &[(1, 1)]).unwrap();
        assert_eq!(g, vec![(1, vec![2.5])]);
    }

    #[test]
    fn identity_pi_gives_unit_gammas() {
        let n = 2 * 2 + 3 * 2;
        let g = schur_complement_gammas(&M::identity(n), &[(2, 2), (3, 2)]).unwrap();
        for (_, v) in &g {
            assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn two_group_schur_complement() {
        // Π on positions {0} (ρ = 1) and {1} (ρ = 2, first of two sub-blocks)
        let d = M::from_real_rows(&[[3.0, 1.0, 9.0], [1.0, 2.0, 9.0], [9.0, 9.0, 50.0]]);
        let g = schur_complement_gammas(&d, &[(1, 1), (2, 1)]).unwrap();
        assert!((g[0].1[0] - (3.0 - 1.0 / 2.0)).abs() < 1e-14);
        assert!((g[1].1[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unobservable_direction_is_rejected() {
        let mut d = M::identity(3);
        d[(0, 0)] = num_complex::Complex::new(0.0, 0.0);
        assert!(matches!(
            schur_complement_gammas(&d, &[(1, 1), (2, 1)]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn construction_has_requested_jordan_structure() {
        let c = JordanTestCase::<f64>::random(&[(1, 2), (3, 1)], 0.5, 1).unwrap();
        assert_eq!(c.jordan_block_counts(), vec![(2, 2), (6, 1)]);
        assert!(c.scramble_cond <= MAX_SCRAMBLE_COND);
    }

    #[test]
    fn scalar_case_is_exact_square_root() {
        let c = JordanTestCase::unscrambled(&[(1, 1)], 0.0, M::identity(1)).unwrap();
        let r = fractional_split_verify(&c, &c.direction().unwrap(), &log_grid(-10.0, -4.0, 7)).unwrap();
        assert!(r.counts_ok());
        for f in &r.fits {
            assert!((f.exponent - 0.5).abs() < 0.02 * 0.5);
            assert!(f.coefficient_rel_err < 1e-6);
        }
    }

    #[test]
    fn quartic_case_has_two_axis_branches() {
        let c = JordanTestCase::<f64>::random(&[(2, 1)], 1.0, 7).unwrap();
        let r = fractional_split_verify(&c, &c.direction().unwrap(), &default_t_grid()).unwrap();
        assert!(r.passes(0.1, 0.05), "{r:#?}");
        // μ⁴ = 1: arguments are multiples of π/2
        let pi = std::f64::consts::PI;
        for w in [-0.5 * pi, 0.0, 0.5 * pi, pi] {
            let hit = r.angles[0].1.iter().any(|a| {
                let d = (a - w).rem_euclid(2.0 * pi);
                d.min(2.0 * pi - d) < 0.01
            });
            assert!(hit, "{:?}", r.angles);
        }
    }
}
