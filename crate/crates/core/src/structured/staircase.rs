//! Controllability/observability staircase and the condensed forms.

use crate::linalg::dense::orthonormal_complement;
use crate::linalg::{norm2, orth, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

use super::data::RiccatiData;

/// Which condensed layout [`staircase`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StaircaseVariant {
    /// Controllable part of `(F, G)` first, then the observable part of
    /// `(F₁₁, K₁₁)` inside it:
    ///
    /// ```text
    /// F = [F̃₁₁ 0 F̃₁₃; F̃₂₁ F̃₂₂ F̃₂₃; 0 0 F̃₃₃]   G = [G̃₁₁ G̃₂₁ᴴ 0; G̃₂₁ G̃₂₂ 0; 0 0 0]
    /// K = [K̃₁₁ 0 K̃₃₁ᴴ; 0 0 0; K̃₃₁ 0 K̃₃₃]
    /// ```
    ControllabilityFirst,
    /// Roles of `G` and `K` exchanged, block rows and columns transposed:
    ///
    /// ```text
    /// F = [F̃₁₁ F̃₁₂ 0; 0 F̃₂₂ 0; F̃₃₁ F̃₃₂ F̃₃₃]   G = [G̃₁₁ 0 G̃₃₁ᴴ; 0 0 0; G̃₃₁ 0 G̃₃₃]
    /// K = [K̃₁₁ K̃₂₁ᴴ 0; K̃₂₁ K̃₂₂ 0; 0 0 0]
    /// ```
    ObservabilityFirst,
}

/// Unitarily transformed triple with partition sizes `(n₁, n₂, n₃)`.
#[derive(Clone, Debug)]
pub struct CondensedForm<T> {
    pub u: ComplexMatrix<T>,
    pub f: ComplexMatrix<T>,
    pub g: ComplexMatrix<T>,
    pub k: ComplexMatrix<T>,
    pub sizes: (usize, usize, usize),
    pub variant: StaircaseVariant,
}

/// Orthonormal basis of the controllable subspace of `(a, b)`, i.e. the
/// smallest `a`-invariant subspace containing the range of `b`.
///
/// Directions whose singular value falls below `rank_rel·max(n,m)·max(‖a‖, ‖b‖)`
/// are discarded.
pub fn controllable_subspace<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, rank_rel: T) -> ComplexMatrix<T> {
    let n = a.rows();
    let scale = norm2(a).max(norm2(b));
    let thr = rank_rel * T::lit(n.max(b.cols()).max(1) as f64) * scale;
    let mut basis = ComplexMatrix::zeros(n, 0);
    let mut cand = b.clone();
    while basis.cols() < n {
        if basis.cols() > 0 {
            for _ in 0..2 {
                let proj = &basis * &(&basis.adjoint() * &cand);
                cand = &cand - &proj;
            }
        }
        let new = orth(&cand, thr);
        if new.cols() == 0 {
            break;
        }
        let room = n - basis.cols();
        let new = if new.cols() > room { new.submatrix(0, 0, n, room) } else { new };
        basis = basis.hstack(&new);
        cand = a * &new;
    }
    basis
}

/// Dimension of the controllable subspace of `(f, g)`.
pub fn controllable_dim<T: Real>(f: &ComplexMatrix<T>, g: &ComplexMatrix<T>, rank_rel: T) -> usize {
    controllable_subspace(f, g, rank_rel).cols()
}

pub fn is_controllable<T: Real>(f: &ComplexMatrix<T>, g: &ComplexMatrix<T>) -> bool {
    controllable_dim(f, g, Tolerances::<T>::default().rank) == f.rows()
}

pub fn is_observable<T: Real>(f: &ComplexMatrix<T>, k: &ComplexMatrix<T>) -> bool {
    controllable_dim(&f.adjoint(), &k.adjoint(), Tolerances::<T>::default().rank) == f.rows()
}

pub fn staircase<T: Real>(data: &RiccatiData<T>, variant: StaircaseVariant) -> CondensedForm<T> {
    staircase_with(data, variant, &Tolerances::default())
}

pub fn staircase_with<T: Real>(data: &RiccatiData<T>, variant: StaircaseVariant, tol: &Tolerances<T>) -> CondensedForm<T> {
    let (u, sizes) = match variant {
        StaircaseVariant::ControllabilityFirst => controllability_first(data.f(), data.g(), data.k(), tol.rank),
        // the mirrored form is the first variant applied to (Fᴴ, K, G)
        StaircaseVariant::ObservabilityFirst => controllability_first(&data.f().adjoint(), data.k(), data.g(), tol.rank),
    };
    let mut form = assemble(data, u, sizes, variant);
    // keep the identity basis when the input already has the layout
    let id = assemble(data, ComplexMatrix::identity(data.n()), sizes, variant);
    let scale = T::one() + data.f().norm_fro() + data.g().norm_fro() + data.k().norm_fro();
    if id.pattern_defect() <= tol.rank * scale && id.subpairs_ok(tol.rank) {
        form = id;
    }
    form
}

fn assemble<T: Real>(
    data: &RiccatiData<T>,
    u: ComplexMatrix<T>,
    sizes: (usize, usize, usize),
    variant: StaircaseVariant,
) -> CondensedForm<T> {
    let t = data.transform(&u);
    let (f, g, k) = t.into_parts();
    CondensedForm { u, f, g, k, sizes, variant }
}

fn controllability_first<T: Real>(
    f: &ComplexMatrix<T>,
    g: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
    rank_rel: T,
) -> (ComplexMatrix<T>, (usize, usize, usize)) {
    let n = f.rows();
    let vc = controllable_subspace(f, g, rank_rel);
    let r = vc.cols();
    let vc_perp = orthonormal_complement(&vc);
    let f11 = &(&vc.adjoint() * f) * &vc;
    let k11 = &(&vc.adjoint() * k) * &vc;
    // observable part of (F₁₁, K₁₁) = controllable part of (F₁₁ᴴ, K₁₁)
    let obs = controllable_subspace(&f11.adjoint(), &k11, rank_rel);
    let unobs = orthonormal_complement(&obs);
    let n1 = obs.cols();
    let inner = obs.hstack(&unobs);
    let u = (&vc * &inner).hstack(&vc_perp);
    debug_assert_eq!(u.cols(), n);
    (u, (n1, r - n1, n - r))
}

impl<T: Real> CondensedForm<T> {
    fn ranges(&self) -> [std::ops::Range<usize>; 3] {
        let (n1, n2, n3) = self.sizes;
        [0..n1, n1..n1 + n2, n1 + n2..n1 + n2 + n3]
    }

    fn block(m: &ComplexMatrix<T>, r: &std::ops::Range<usize>, c: &std::ops::Range<usize>) -> ComplexMatrix<T> {
        m.submatrix(r.start, c.start, r.len(), c.len())
    }

    /// Largest Frobenius norm among the blocks the layout requires to vanish.
    pub fn pattern_defect(&self) -> T {
        let [r1, r2, r3] = self.ranges();
        let z = |m: &ComplexMatrix<T>, a: &std::ops::Range<usize>, b: &std::ops::Range<usize>| {
            Self::block(m, a, b).norm_fro()
        };
        let parts = match self.variant {
            StaircaseVariant::ControllabilityFirst => vec![
                z(&self.f, &r1, &r2),
                z(&self.f, &r3, &r1),
                z(&self.f, &r3, &r2),
                z(&self.g, &r1, &r3),
                z(&self.g, &r2, &r3),
                z(&self.g, &r3, &r3),
                z(&self.k, &r1, &r2),
                z(&self.k, &r2, &r2),
                z(&self.k, &r3, &r2),
            ],
            StaircaseVariant::ObservabilityFirst => vec![
                z(&self.f, &r2, &r1),
                z(&self.f, &r1, &r3),
                z(&self.f, &r2, &r3),
                z(&self.k, &r3, &r1),
                z(&self.k, &r3, &r2),
                z(&self.k, &r3, &r3),
                z(&self.g, &r2, &r1),
                z(&self.g, &r2, &r2),
                z(&self.g, &r2, &r3),
            ],
        };
        parts.into_iter().fold(T::zero(), T::max)
    }

    fn subpairs_ok(&self, rank_rel: T) -> bool {
        let [r1, r2, _] = self.ranges();
        let r12 = r1.start..r2.end;
        let f11 = Self::block(&self.f, &r12, &r12);
        let ft = Self::block(&self.f, &r1, &r1);
        let (gt, kt) = (Self::block(&self.g, &r1, &r1), Self::block(&self.k, &r1, &r1));
        let n1 = r1.len();
        let p = r12.len();
        match self.variant {
            StaircaseVariant::ControllabilityFirst => {
                let g11 = Self::block(&self.g, &r12, &r12);
                controllable_dim(&f11, &g11, rank_rel) == p
                    && controllable_dim(&ft, &gt, rank_rel) == n1
                    && controllable_dim(&ft.adjoint(), &kt, rank_rel) == n1
            }
            StaircaseVariant::ObservabilityFirst => {
                let k11 = Self::block(&self.k, &r12, &r12);
                controllable_dim(&f11.adjoint(), &k11, rank_rel) == p
                    && controllable_dim(&ft, &gt, rank_rel) == n1
                    && controllable_dim(&ft.adjoint(), &kt, rank_rel) == n1
            }
        }
    }

    /// Whether the designated subpairs are controllable / observable.
    pub fn verify_subpairs(&self) -> bool {
        self.subpairs_ok(Tolerances::<T>::default().rank)
    }

    /// `‖UᴴU − I‖_F`.
    pub fn unitarity_error(&self) -> T {
        (&(&self.u.adjoint() * &self.u) - &ComplexMatrix::identity(self.u.rows())).norm_fro()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::orthonormal_complement;
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn example1() -> RiccatiData<f64> {
        RiccatiData::new(
            M::from_real_rows(&[[-2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [1.0, 1.0, -1.0]]),
            M::from_real_diagonal(&[1.0, 0.0, 1.0]),
            M::from_real_rows(&[[3.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]]),
        )
        .unwrap()
    }

    fn observability_rank(f: &M, k: &M) -> usize {
        // rank of [K; KF; KF²; …]
        let n = f.rows();
        let mut stack = k.clone();
        let mut p = k.clone();
        for _ in 1..n {
            p = &p * f;
            stack = stack.vstack(&p);
        }
        crate::linalg::svd(&stack).rank(1e-10 * stack.norm_fro())
    }

    #[test]
    fn controllability_checks() {
        let f = M::from_real_diagonal(&[1.0, 2.0]);
        assert!(!is_controllable(&f, &M::zeros(2, 2)));
        let ex2f = M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]);
        assert!(is_controllable(&ex2f, &M::identity(2)));
        assert!(is_observable(&ex2f, &M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]])));
    }

    #[test]
    fn example1_observability_matches_krylov_rank() {
        let d = example1();
        assert!(!is_observable(d.f(), d.k()));
        assert_eq!(observability_rank(d.f(), d.k()), 2);
    }

    #[test]
    fn example1_observability_first_keeps_identity() {
        let cf = staircase(&example1(), StaircaseVariant::ObservabilityFirst);
        assert_eq!(cf.sizes, (1, 1, 1));
        assert!(cf.u.approx_eq(&M::identity(3), 0.0));
        assert_eq!(cf.pattern_defect(), 0.0);
    }

    #[test]
    fn trivial_partition_for_controllable_observable() {
        let d = RiccatiData::new(
            M::from_real_rows(&[[-3.0, -1.0], [-1.0, -5.0]]),
            M::identity(2),
            M::from_real_rows(&[[6.0, 8.0], [8.0, 17.0]]),
        )
        .unwrap();
        for v in [StaircaseVariant::ControllabilityFirst, StaircaseVariant::ObservabilityFirst] {
            let cf = staircase(&d, v);
            assert_eq!(cf.sizes, (2, 0, 0));
        }
    }

    fn random(rng: &mut ChaCha8Rng, m: usize, n: usize) -> M {
        M::from_fn(m, n, |_, _| cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn unitary(rng: &mut ChaCha8Rng, n: usize) -> M {
        let q = orth(&random(rng, n, n), 1e-12);
        if q.cols() == n {
            q
        } else {
            q.hstack(&orthonormal_complement(&q))
        }
    }

    #[test]
    fn recovers_scrambled_partition_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for &(n1, n2, n3) in &[(2usize, 1usize, 1usize), (1, 2, 2), (3, 0, 1), (2, 2, 0)] {
            let n = n1 + n2 + n3;
            // build the controllability-first pattern, then scramble
            let mut f = random(&mut rng, n, n);
            let r1 = 0..n1;
            let r2 = n1..n1 + n2;
            let r3 = n1 + n2..n;
            for i in r1.clone() {
                for j in r2.clone() {
                    f[(i, j)] = cplx(0.0, 0.0);
                }
            }
            for i in r3.clone() {
                for j in 0..n1 + n2 {
                    f[(i, j)] = cplx(0.0, 0.0);
                }
            }
            let bg = random(&mut rng, n1 + n2, n1 + n2);
            let mut g = M::zeros(n, n);
            g.set_submatrix(0, 0, &(&bg * &bg.adjoint()));
            let ck = random(&mut rng, n, n);
            let mut ckm = ck.clone();
            for i in 0..n {
                for j in r2.clone() {
                    ckm[(i, j)] = cplx(0.0, 0.0);
                }
            }
            let k = &ckm.adjoint() * &ckm;
            let u = unitary(&mut rng, n);
            let d = RiccatiData::new(f, g, k).unwrap().transform(&u.adjoint());
            let cf = staircase(&d, StaircaseVariant::ControllabilityFirst);
            assert_eq!(cf.sizes, (n1, n2, n3));
            assert!(cf.unitarity_error() < 1e-12);
            assert!(cf.pattern_defect() < 1e-10 * (1.0 + d.f().norm_fro() + d.g().norm_fro() + d.k().norm_fro()));
            assert!(cf.verify_subpairs());
        }
    }

    #[test]
    fn controllability_invariant_under_feedback() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let f = random(&mut rng, 4, 4);
            let b = random(&mut rng, 4, 1);
            let g = if rng.gen_bool(0.5) { &b * &b.adjoint() } else { M::zeros(4, 4) };
            let x = random(&mut rng, 4, 4).hermitian_part();
            assert_eq!(is_controllable(&f, &g), is_controllable(&(&f + &(&g * &x)), &g));
        }
    }
}
