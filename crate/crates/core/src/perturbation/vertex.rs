//! Walking the feasible region to a vertex, where all eigenvalues of
//! `H + JΔ` are imaginary and the Riccati solution is unique.
//!
//! Each leg follows a direction `Δ₁₁ = P_c·M·P_cᴴ` until new eigenvalues
//! reach the axis. `P_c` spans the complement of the state components of the
//! axis eigenvectors already present, so `(F, Δ₁₁)` cannot detect them and
//! they stay frozen while the rest of the spectrum moves.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{loewner_leq, norm2, orth, orthonormal_complement, schur_decompose, svd, ComplexMatrix};
use crate::riccati::{solve_extremal_with, ExtremalSolutions};
use crate::scalar::Real;
use crate::structured::{symplectic_j, HamiltonianMatrix};
use crate::tolerance::Tolerances;

use super::critical::{critical_time_with, CriticalOptions, CriticalTime};
use super::direction::{perturbed_hamiltonian, PerturbationDirection};
use super::sampling::random_wishart;
use super::spectrum::{axis_clusters, cluster_gap, invariant_basis, spectrum_snapshot, SpectrumSnapshot};

/// Supplies the `Δ₁₁` of each leg.
///
/// `complement` is an `n × k` orthonormal basis of the admissible state
/// directions; the returned matrix must be PSD and should act only on its
/// span (it is projected onto it anyway).
pub trait DirectionSource<T: Real> {
    fn next_direction(&mut self, leg: usize, complement: &ComplexMatrix<T>) -> ComplexMatrix<T>;
}

/// `Δ₁₁ = P_c·P_cᴴ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProjectorDirections;

impl<T: Real> DirectionSource<T> for ProjectorDirections {
    fn next_direction(&mut self, _leg: usize, complement: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        complement * &complement.adjoint()
    }
}

/// `Δ₁₁ = P_c·M·P_cᴴ` with a seeded full-rank Wishart sample `M`.
#[derive(Clone, Debug)]
pub struct WishartDirections {
    rng: ChaCha8Rng,
}

impl WishartDirections {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl<T: Real> DirectionSource<T> for WishartDirections {
    fn next_direction(&mut self, _leg: usize, complement: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let k = complement.cols();
        let m = random_wishart::<T, _>(&mut self.rng, k, k);
        &(complement * &m) * &complement.adjoint()
    }
}

/// Projected coordinate directions `P_cP_cᴴe_je_jᴴP_cP_cᴴ`, cycling over `j`
/// and skipping those that vanish.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoordinateDirections {
    next: usize,
}

impl<T: Real> DirectionSource<T> for CoordinateDirections {
    fn next_direction(&mut self, _leg: usize, complement: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = complement.rows();
        let proj = complement * &complement.adjoint();
        for _ in 0..n {
            let j = self.next % n;
            self.next += 1;
            let v = proj.submatrix(0, j, n, 1);
            if v.norm_fro() > T::lit(1e-6) {
                return &v * &v.adjoint();
            }
        }
        proj
    }
}

/// A fixed first direction followed by another source.
pub struct SeededDirections<T> {
    first: Option<ComplexMatrix<T>>,
    rest: Box<dyn DirectionSource<T>>,
}

impl<T: Real> SeededDirections<T> {
    pub fn new(first: ComplexMatrix<T>, rest: Box<dyn DirectionSource<T>>) -> Self {
        Self { first: Some(first), rest }
    }
}

impl<T: Real> DirectionSource<T> for SeededDirections<T> {
    fn next_direction(&mut self, leg: usize, complement: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        match self.first.take() {
            Some(d) => d,
            None => self.rest.next_direction(leg, complement),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VertexOptions<T> {
    /// Samples per leg, including both ends.
    pub samples_per_leg: usize,
    /// Scan limit used when no boundedness bound applies.
    pub t_max: T,
    pub critical: CriticalOptions<T>,
    pub tol: Tolerances<T>,
}

impl<T: Real> Default for VertexOptions<T> {
    fn default() -> Self {
        // bisection to rounding level keeps the terminal point on the vertex
        let critical = CriticalOptions { bisect_tol: T::lit(4.0) * T::epsilon(), ..CriticalOptions::default() };
        Self { samples_per_leg: 5, t_max: T::lit(1e6), critical, tol: Tolerances::default() }
    }
}

#[derive(Clone, Debug)]
pub struct PathSample<T> {
    /// Step within the leg.
    pub t: T,
    pub snapshot: SpectrumSnapshot<T>,
    pub x_minus: Option<ComplexMatrix<T>>,
    pub x_plus: Option<ComplexMatrix<T>>,
    /// `‖X₊ − X₋‖₂`.
    pub extremal_gap: Option<T>,
}

#[derive(Clone, Debug)]
pub struct PathLeg<T> {
    pub direction: PerturbationDirection<T>,
    pub t_start: T,
    pub t_end: T,
    /// Axis eigenvalues frozen during this leg.
    pub frozen: usize,
    pub critical: CriticalTime<T>,
    pub samples: Vec<PathSample<T>>,
    /// Axis eigenvalues at `t_start` are still present at `t_end`.
    pub frozen_preserved: bool,
}

#[derive(Clone, Debug)]
pub struct VertexRecord<T> {
    /// Accumulated `Δ₁₁`.
    pub delta11: ComplexMatrix<T>,
    pub x_minus: ComplexMatrix<T>,
    pub x_plus: ComplexMatrix<T>,
    /// `½(X₋ + X₊)`.
    pub x: ComplexMatrix<T>,
    pub extremal_gap: T,
    pub snapshot: SpectrumSnapshot<T>,
}

#[derive(Clone, Debug)]
pub struct PerturbationPath<T> {
    pub base: HamiltonianMatrix<T>,
    pub legs: Vec<PathLeg<T>>,
    pub terminal: Option<VertexRecord<T>>,
}

impl<T: Real> PerturbationPath<T> {
    /// Accumulated direction at the end of the path.
    pub fn accumulated(&self) -> PerturbationDirection<T> {
        self.legs
            .iter()
            .fold(PerturbationDirection::zero(self.base.n()), |acc, l| acc.sum(&l.direction.scaled(l.t_end)))
    }

    /// `‖X₊ − X₋‖` never increases by more than `tol` between samples of a leg.
    pub fn gap_nonincreasing(&self, tol: T) -> bool {
        self.legs.iter().all(|l| {
            let g: Vec<T> = l.samples.iter().filter_map(|s| s.extremal_gap).collect();
            g.windows(2).all(|w| w[1] <= w[0] + tol)
        })
    }

    /// `X₋` nondecreasing and `X₊` nonincreasing between consecutive samples.
    pub fn loewner_monotone(&self, tol: T) -> Result<bool> {
        for l in &self.legs {
            for w in l.samples.windows(2) {
                if let (Some(a), Some(b)) = (&w[0].x_minus, &w[1].x_minus) {
                    if !loewner_leq(a, b, tol)? {
                        return Ok(false);
                    }
                }
                if let (Some(a), Some(b)) = (&w[0].x_plus, &w[1].x_plus) {
                    if !loewner_leq(b, a, tol)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Half of an axis cluster lying in a Lagrangian subspace, read off the
/// nilpotent part: for equal Jordan blocks of size `2ρ`, `range(N^ρ)`.
fn nilpotent_half<T: Real>(q: &ComplexMatrix<T>, h: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let m = q.cols();
    if !m.is_multiple_of(2) {
        return None;
    }
    let a = &(&q.adjoint() * h) * q;
    let shift = a.trace() / crate::scalar::creal(T::lit(m as f64));
    let nmat = &a - &ComplexMatrix::identity(m).scale(shift);
    let scale = T::one() + norm2(&nmat);
    let j = symplectic_j::<T>(q.rows() / 2);
    let mut p = ComplexMatrix::identity(m);
    for k in 1..=m {
        p = &p * &nmat;
        let d = svd(&p);
        let r = d.rank(T::lit(1e-6) * scale.powi(k as i32));
        if r < m / 2 {
            return None;
        }
        if r == m / 2 {
            let u = q * &d.u.submatrix(0, 0, m, r);
            let iso = (&(&u.adjoint() * &j) * &u).norm_fro();
            return (iso <= T::lit(1e-6)).then_some(u);
        }
    }
    None
}

/// Half of an axis cluster inside the graph of `X₋`.
fn graph_half<T: Real>(q: &ComplexMatrix<T>, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = q.rows() / 2;
    let m = q.cols();
    let q1 = q.submatrix(0, 0, n, m);
    let q2 = q.submatrix(n, 0, n, m);
    let d = svd(&(&q2 - &(x * &q1)));
    // right singular vectors of the m/2 smallest singular values
    let v = d.v.submatrix(0, m - m / 2, m, m / 2);
    q * &v
}

/// State components of the axis eigenvectors, and the count of axis eigenvalues.
fn frozen_state_basis<T: Real>(h: &HamiltonianMatrix<T>, tol: &Tolerances<T>) -> Result<(ComplexMatrix<T>, usize)> {
    let n = h.n();
    let hm = h.to_matrix();
    let schur = schur_decompose(&hm)?;
    let ev = schur.eigenvalues();
    let imag_tol = h.imag_tol(tol.imag);
    let groups = axis_clusters(&ev, imag_tol);
    let count = groups.iter().map(Vec::len).sum();
    if groups.is_empty() {
        return Ok((ComplexMatrix::zeros(n, 0), 0));
    }
    let mut x_minus = None;
    let mut tops = ComplexMatrix::zeros(n, 0);
    for g in &groups {
        let mut mask = vec![false; ev.len()];
        for &i in g {
            mask[i] = true;
        }
        let q = invariant_basis(&schur, &mask)?;
        let half = match nilpotent_half(&q, &hm) {
            Some(u) => u,
            None => {
                if x_minus.is_none() {
                    x_minus = Some(solve_extremal_with(&h.riccati_data()?, tol)?.x_minus);
                }
                graph_half(&q, x_minus.as_ref().expect("set above"))
            }
        };
        tops = tops.hstack(&half.submatrix(0, 0, n, half.cols()));
    }
    Ok((orth(&tops, T::lit(1e-8)), count))
}

fn sample<T: Real>(h: &HamiltonianMatrix<T>, t: T, tol: &Tolerances<T>) -> Result<PathSample<T>> {
    let snapshot = spectrum_snapshot(h, t, h.imag_tol(tol.imag))?;
    let ext = h.riccati_data().ok().and_then(|d| solve_extremal_with(&d, tol).ok());
    let (x_minus, x_plus, extremal_gap) = match ext {
        Some(ExtremalSolutions { x_minus, x_plus, .. }) => {
            let g = norm2(&(&x_plus - &x_minus));
            (Some(x_minus), Some(x_plus), Some(g))
        }
        None => (None, None, None),
    };
    Ok(PathSample { t, snapshot, x_minus, x_plus, extremal_gap })
}

pub fn vertex_path<T: Real>(
    h: &HamiltonianMatrix<T>,
    source: &mut dyn DirectionSource<T>,
    budget: usize,
) -> Result<PerturbationPath<T>> {
    vertex_path_with(h, source, budget, &VertexOptions::default())
}

pub fn vertex_path_with<T: Real>(
    h: &HamiltonianMatrix<T>,
    source: &mut dyn DirectionSource<T>,
    budget: usize,
    opts: &VertexOptions<T>,
) -> Result<PerturbationPath<T>> {
    let n = h.n();
    let tol = &opts.tol;
    solve_extremal_with(&h.riccati_data()?, tol)?;
    let mut acc = PerturbationDirection::zero(n);
    let mut legs = Vec::new();
    loop {
        let cur = perturbed_hamiltonian(h, &acc, T::one())?;
        let (frozen_basis, frozen) = frozen_state_basis(&cur, tol)?;
        if frozen == 2 * n {
            let ext = solve_extremal_with(&cur.riccati_data()?, tol)?;
            let gap = norm2(&(&ext.x_plus - &ext.x_minus));
            let x = (&ext.x_minus + &ext.x_plus).scale_real(T::lit(0.5));
            let snapshot = spectrum_snapshot(&cur, T::one(), cur.imag_tol(tol.imag))?;
            let terminal = VertexRecord {
                delta11: acc.delta11().clone(),
                x_minus: ext.x_minus,
                x_plus: ext.x_plus,
                x,
                extremal_gap: gap,
                snapshot,
            };
            return Ok(PerturbationPath { base: h.clone(), legs, terminal: Some(terminal) });
        }
        if legs.len() >= budget {
            return Err(Error::BudgetExhausted(budget));
        }
        let complement = orthonormal_complement(&frozen_basis);
        if complement.cols() == 0 {
            return Err(Error::NoFreezingDirection(format!(
                "{frozen} of {} eigenvalues on the axis but their state components span the whole space",
                2 * n
            )));
        }
        let proj = &complement * &complement.adjoint();
        let raw = source.next_direction(legs.len(), &complement);
        let d11 = (&(&proj * &raw) * &proj).hermitian_part();
        let nd = norm2(&d11);
        if !(nd > T::zero()) {
            return Err(Error::NoFreezingDirection("direction vanishes on the admissible subspace".into()));
        }
        let dir = PerturbationDirection::delta11_only(d11.scale_real(T::one() / nd))?;
        let copts = CriticalOptions { ignore_axis: frozen, tol: *tol, ..opts.critical.clone() };
        let crit = critical_time_with(&cur, &dir, opts.t_max, &copts)?;
        let Some(t0) = crit.t0 else {
            return Err(Error::NoFreezingDirection(format!(
                "no new axis crossing below t = {:.3e} with {frozen} frozen eigenvalues",
                crit.t_scan.as_f64()
            )));
        };
        let k = opts.samples_per_leg.max(2);
        let mut samples = Vec::with_capacity(k);
        for i in 0..k {
            let t = t0 * T::lit(i as f64) / T::lit((k - 1) as f64);
            samples.push(sample(&perturbed_hamiltonian(&cur, &dir, t)?, t, tol)?);
        }
        let start = &samples[0].snapshot;
        let end = &samples[k - 1].snapshot;
        let match_tol = cluster_gap(cur.imag_tol(tol.imag));
        let frozen_preserved = start.eigenvalues.iter().filter(|z| z.re.abs() <= cur.imag_tol(tol.imag)).all(|z| {
            end.eigenvalues.iter().any(|w| (*w - *z).norm() <= match_tol)
        });
        acc = acc.sum(&dir.scaled(t0));
        legs.push(PathLeg {
            direction: dir,
            t_start: T::zero(),
            t_end: t0,
            frozen,
            critical: crit,
            samples,
            frozen_preserved,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn example2() -> HamiltonianMatrix<f64> {
        HamiltonianMatrix::from_blocks(
            M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]),
            M::identity(2),
            M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]),
        )
        .unwrap()
    }

    fn vertex() -> M {
        M::from_real_rows(&[[3.0, 1.0], [1.0, 5.0]])
    }

    #[test]
    fn vertex_seed_reaches_vertex_in_one_leg() {
        let mut src = SeededDirections::new(M::from_real_diagonal(&[4.0, 9.0]), Box::new(ProjectorDirections));
        let p = vertex_path(&example2(), &mut src, 4).unwrap();
        assert_eq!(p.legs.len(), 1);
        let v = p.terminal.as_ref().unwrap();
        assert!(v.x.approx_eq(&vertex(), 1e-6), "{:?}", v.x);
        assert!(v.extremal_gap <= 1e-6 * (1.0 + norm2(&v.x)), "{}", v.extremal_gap);
        assert!(p.gap_nonincreasing(1e-8));
        assert!(p.loewner_monotone(1e-8).unwrap());
    }

    #[test]
    fn coordinate_seed_needs_a_second_leg() {
        let mut src = SeededDirections::new(M::from_real_diagonal(&[1.0, 0.0]), Box::new(WishartDirections::new(1)));
        let p = vertex_path(&example2(), &mut src, 4).unwrap();
        assert_eq!(p.legs.len(), 2);
        // first leg stops on the face a = 4
        assert!((p.legs[0].t_end - 4.0).abs() < 1e-8);
        assert!(p.legs.iter().all(|l| l.frozen_preserved));
        let d = p.accumulated();
        let (a, b, c) = (d.delta11()[(0, 0)].re, d.delta11()[(1, 1)].re, d.delta11()[(0, 1)].re);
        assert!((a - 4.0).abs() < 1e-6 && (b - 9.0).abs() < 1e-6 && c.abs() < 1e-6, "{a} {b} {c}");
        let v = p.terminal.unwrap();
        assert!(v.x.approx_eq(&vertex(), 1e-6), "{:?}", v.x);
    }

    #[test]
    fn start_at_vertex_is_terminal() {
        let h = perturbed_hamiltonian(
            &example2(),
            &PerturbationDirection::delta11_only(M::from_real_diagonal(&[4.0, 9.0])).unwrap(),
            1.0,
        )
        .unwrap();
        let p = vertex_path(&h, &mut ProjectorDirections, 3).unwrap();
        assert!(p.legs.is_empty());
        assert!(p.terminal.unwrap().x.approx_eq(&vertex(), 1e-6));
    }

    #[test]
    fn zero_budget_is_exhausted() {
        assert!(matches!(vertex_path(&example2(), &mut ProjectorDirections, 0), Err(Error::BudgetExhausted(0))));
    }
}
