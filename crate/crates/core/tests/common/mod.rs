//! Seeded problem generators shared by the integration tests.
#![allow(dead_code)]

use hamriccati::linalg::{eigenvalues, ComplexMatrix};
use hamriccati::perturbation::sampling::{random_matrix, random_symplectic, random_wishart};
use hamriccati::perturbation::PerturbationDirection;
use hamriccati::riccati::solve_extremal;
use hamriccati::structured::{is_controllable, is_observable, HamiltonianMatrix, RiccatiData};
use hamriccati::{Data, Matrix, C64};
use rand::Rng;

/// Stable `F`, `G = BBᴴ`, `K = CᴴC`, with `(F, G)` controllable, `(F, K)`
/// observable and no imaginary Hamiltonian eigenvalues. Rejection-sampled.
pub fn stable_triple<R: Rng>(rng: &mut R, n: usize) -> Data {
    loop {
        let a: Matrix = random_matrix(rng, n, n);
        let shift = eigenvalues(&a).unwrap().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let f = &a - &Matrix::identity(n).scale_real(shift + rng.gen_range(0.2..1.5));
        let (mb, mc) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        let b: Matrix = random_matrix(rng, n, mb);
        let c: Matrix = random_matrix(rng, mc, n);
        let g = (&b * &b.adjoint()).hermitian_part();
        let k = (&c.adjoint() * &c).scale_real(rng.gen_range(0.1..1.0)).hermitian_part();
        if !is_controllable(&f, &g) || !is_observable(&f, &k) {
            continue;
        }
        let data = match RiccatiData::new(f, g, k) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let h = HamiltonianMatrix::from_riccati(&data);
        let gap = h.eigenvalues().unwrap().iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
        if gap < 1e-2 || solve_extremal(&data).is_err() {
            continue;
        }
        return data;
    }
}

/// Random PSD matrix of spectral norm `scale`.
pub fn psd<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Matrix {
    let rank = rng.gen_range(1..=n);
    random_wishart::<f64, R>(rng, n, rank).scale_real(scale)
}

/// Pair each eigenvalue with its mirror `−λ̄`; returns `n` index pairs.
pub fn mirror_pairs(ev: &[C64]) -> Vec<(usize, usize)> {
    let mut used = vec![false; ev.len()];
    let mut pairs = Vec::new();
    let mut order: Vec<usize> = (0..ev.len()).filter(|&i| ev[i].re < 0.0).collect();
    order.sort_by(|&a, &b| ev[a].re.partial_cmp(&ev[b].re).unwrap());
    for i in order {
        let target = -ev[i].conj();
        let j = (0..ev.len())
            .filter(|&j| !used[j] && j != i && ev[j].re >= 0.0)
            .min_by(|&a, &b| (ev[a] - target).norm().partial_cmp(&(ev[b] - target).norm()).unwrap())
            .unwrap();
        used[i] = true;
        used[j] = true;
        pairs.push((i, j));
    }
    pairs
}

/// Hamiltonian with a semisimple eigenvalue `iα` of multiplicity `r` and
/// definite inertia, plus `extra` real-pair blocks, scrambled symplectically;
/// returned with a random PSD direction.
pub struct SemisimpleCase {
    pub h: HamiltonianMatrix<f64>,
    pub direction: PerturbationDirection<f64>,
    pub alpha: f64,
    pub multiplicity: usize,
}

pub fn semisimple_case<R: Rng>(rng: &mut R, r: usize, extra: usize, alpha: f64) -> SemisimpleCase {
    let n = r + extra;
    let mut f = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut k = vec![0.0; n];
    for i in 0..r {
        // oscillator [[0, g], [−k, 0]] with gk = α²
        g[i] = rng.gen_range(0.5..2.0);
        k[i] = alpha * alpha / g[i];
    }
    for i in r..n {
        // [[−d, g], [−k, d]] with gk < d²/2 keeps the pair real
        let d = rng.gen_range(1.0..3.0);
        f[i] = -d;
        g[i] = rng.gen_range(0.0..0.5);
        k[i] = rng.gen_range(0.0..0.5) * d * d / (1.0 + g[i]);
    }
    let base = HamiltonianMatrix::from_blocks(
        Matrix::from_real_diagonal(&f),
        Matrix::from_real_diagonal(&g),
        Matrix::from_real_diagonal(&k),
    )
    .unwrap();
    let s: Matrix = random_symplectic(rng, n, 0.5);
    let hs = &(&hamriccati::linalg::inverse(&s).unwrap() * &base.to_matrix()) * &s;
    let h = HamiltonianMatrix::from_blocks(
        hs.submatrix(0, 0, n, n),
        hs.submatrix(0, n, n, n).hermitian_part(),
        -hs.submatrix(n, 0, n, n).hermitian_part(),
    )
    .unwrap();
    let delta = random_wishart::<f64, R>(rng, 2 * n, 2 * n);
    let direction = PerturbationDirection::from_matrix(&delta).unwrap();
    SemisimpleCase { h, direction, alpha, multiplicity: r }
}

/// Solve `AX + XB + C = 0` by the dense Kronecker system
/// `(I ⊗ A + Bᵀ ⊗ I)·vec X = −vec C`.
pub fn kron_sylvester(a: &Matrix, b: &Matrix, c: &Matrix) -> Matrix {
    let (m, n) = (a.rows(), b.rows());
    let op = &Matrix::identity(n).kron(a) + &b.transpose().kron(&Matrix::identity(m));
    let rhs = Matrix::column_vector(&c.vec()).scale_real(-1.0);
    let v = hamriccati::linalg::solve(&op, &rhs).unwrap();
    ComplexMatrix::unvec(&v.column(0), m, n)
}
