use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::dense::solve_lower;
use crate::linalg::{cholesky, definiteness, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// The coefficient triple `(F, G, K)` of `FᴴX + XF + XGX + K = 0`,
/// with `G` and `K` Hermitian positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiData<T> {
    f: ComplexMatrix<T>,
    g: ComplexMatrix<T>,
    k: ComplexMatrix<T>,
}

fn check_square_same<T: Real>(mats: &[(&str, &ComplexMatrix<T>)], n: usize) -> Result<()> {
    for (name, m) in mats {
        if m.shape() != (n, n) {
            return Err(Error::Dimension(format!("{name} is {:?}, expected ({n}, {n})", m.shape())));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(())
}

pub(crate) fn require_hermitian<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let defect = m.hermitian_defect();
    if defect > tol * (T::one() + m.norm_fro()) {
        return Err(Error::NotHermitian { defect: defect.as_f64() });
    }
    Ok(m.hermitian_part())
}

impl<T: Real> RiccatiData<T> {
    pub fn new(f: ComplexMatrix<T>, g: ComplexMatrix<T>, k: ComplexMatrix<T>) -> Result<Self> {
        Self::new_with(f, g, k, &Tolerances::default())
    }

    /// Validate shapes, Hermitian symmetry and semidefiniteness of `G`, `K`.
    pub fn new_with(
        f: ComplexMatrix<T>,
        g: ComplexMatrix<T>,
        k: ComplexMatrix<T>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        let n = f.rows();
        check_square_same(&[("F", &f), ("G", &g), ("K", &k)], n)?;
        let g = require_hermitian(&g, tol.psd)?;
        let k = require_hermitian(&k, tol.psd)?;
        for (what, m) in [("G", &g), ("K", &k)] {
            let v = definiteness(m, tol.psd)?;
            if !v.kind.is_psd() {
                return Err(Error::NotSemidefinite { what, margin: v.margin.as_f64() });
            }
        }
        Ok(Self { f, g, k })
    }

    /// Skip the semidefiniteness check (`G`, `K` are still symmetrized).
    pub(crate) fn from_parts(f: ComplexMatrix<T>, g: ComplexMatrix<T>, k: ComplexMatrix<T>) -> Self {
        Self { f, g: g.hermitian_part(), k: k.hermitian_part() }
    }

    pub fn n(&self) -> usize {
        self.f.rows()
    }

    pub fn f(&self) -> &ComplexMatrix<T> {
        &self.f
    }

    pub fn g(&self) -> &ComplexMatrix<T> {
        &self.g
    }

    pub fn k(&self) -> &ComplexMatrix<T> {
        &self.k
    }

    /// `FᴴX + XF + XGX + K`.
    pub fn residual(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let fx = &self.f.adjoint() * x;
        let xf = x * &self.f;
        let xgx = &(x * &self.g) * x;
        (&(&(&fx + &xf) + &xgx) + &self.k).hermitian_part()
    }

    /// Scale against which residuals of a candidate `x` are judged.
    pub fn residual_scale(&self, x: &ComplexMatrix<T>) -> T {
        let nx = x.norm_fro();
        T::one() + T::lit(2.0) * self.f.norm_fro() * nx + self.g.norm_fro() * nx * nx + self.k.norm_fro()
    }

    /// Closed-loop matrix `F + GX`.
    pub fn closed_loop(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &self.f + &(&self.g * x)
    }

    /// Unitary change of basis `(UᴴFU, UᴴGU, UᴴKU)`.
    pub fn transform(&self, u: &ComplexMatrix<T>) -> Self {
        let uh = u.adjoint();
        Self::from_parts(&(&uh * &self.f) * u, &(&uh * &self.g) * u, &(&uh * &self.k) * u)
    }

    /// `(F, G, K + ΔK)`.
    pub fn with_k(&self, k: ComplexMatrix<T>) -> Self {
        Self::from_parts(self.f.clone(), self.g.clone(), k)
    }

    pub fn into_parts(self) -> (ComplexMatrix<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
        (self.f, self.g, self.k)
    }
}

/// State-space system `ẋ = Ax + Bu, y = Cx + Du`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace<T> {
    pub a: ComplexMatrix<T>,
    pub b: ComplexMatrix<T>,
    pub c: ComplexMatrix<T>,
    pub d: ComplexMatrix<T>,
}

impl<T: Real> StateSpace<T> {
    pub fn new(a: ComplexMatrix<T>, b: ComplexMatrix<T>, c: ComplexMatrix<T>, d: ComplexMatrix<T>) -> Result<Self> {
        let n = a.rows();
        let m = d.rows();
        a.ensure_square()?;
        d.ensure_square()?;
        if b.shape() != (n, m) || c.shape() != (m, n) {
            return Err(Error::Dimension(format!(
                "A {:?}, B {:?}, C {:?}, D {:?} do not conform",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        if ![&a, &b, &c, &d].iter().all(|m| m.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn states(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.d.rows()
    }

    /// `D + Dᴴ`.
    pub fn feedthrough_sum(&self) -> ComplexMatrix<T> {
        (&self.d + &self.d.adjoint()).hermitian_part()
    }
}

/// Riccati coefficients of a state-space system: with `S = D + Dᴴ`,
/// `F = A − B S⁻¹ C`, `G = B S⁻¹ Bᴴ`, `K = Cᴴ S⁻¹ C`.
///
/// `G` and `K` are formed as Gram products through the Cholesky factor of
/// `S`, so they are semidefinite by construction.
pub fn from_state_space<T: Real>(ss: &StateSpace<T>) -> Result<RiccatiData<T>> {
    let s = ss.feedthrough_sum();
    let l = cholesky(&s).map_err(|e| match e {
        Error::NotPositiveDefinite { margin, .. } => Error::NotPositiveDefinite { what: "D + Dᴴ", margin },
        other => other,
    })?;
    let linv = solve_lower(&l, &ComplexMatrix::identity(s.rows()));
    // S⁻¹ = L⁻ᴴ L⁻¹
    let bl = &ss.b * &linv.adjoint();
    let lc = &linv * &ss.c;
    let g = &bl * &bl.adjoint();
    let k = &lc.adjoint() * &lc;
    let f = &ss.a - &(&bl * &lc);
    Ok(RiccatiData::from_parts(f, g, k))
}

/// Hamiltonian `H = [[F, G], [−K, −Fᴴ]]` kept in block form.
///
/// `G` and `K` are Hermitian but need not be semidefinite, so perturbed
/// Hamiltonians can be represented as well.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix<T> {
    f: ComplexMatrix<T>,
    g: ComplexMatrix<T>,
    k: ComplexMatrix<T>,
}

impl<T: Real> HamiltonianMatrix<T> {
    pub fn from_blocks(f: ComplexMatrix<T>, g: ComplexMatrix<T>, k: ComplexMatrix<T>) -> Result<Self> {
        let n = f.rows();
        check_square_same(&[("F", &f), ("G", &g), ("K", &k)], n)?;
        let g = require_hermitian(&g, T::lit(1e-8))?;
        let k = require_hermitian(&k, T::lit(1e-8))?;
        Ok(Self { f, g, k })
    }

    pub fn from_riccati(data: &RiccatiData<T>) -> Self {
        Self { f: data.f.clone(), g: data.g.clone(), k: data.k.clone() }
    }

    pub fn n(&self) -> usize {
        self.f.rows()
    }

    pub fn f(&self) -> &ComplexMatrix<T> {
        &self.f
    }

    pub fn g(&self) -> &ComplexMatrix<T> {
        &self.g
    }

    pub fn k(&self) -> &ComplexMatrix<T> {
        &self.k
    }

    /// Dense `2n×2n` matrix.
    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::block2x2(&self.f, &self.g, &-&self.k, &-self.f.adjoint())
    }

    /// Riccati data, if `G` and `K` are semidefinite.
    pub fn riccati_data(&self) -> Result<RiccatiData<T>> {
        RiccatiData::new(self.f.clone(), self.g.clone(), self.k.clone())
    }

    pub(crate) fn riccati_data_unchecked(&self) -> RiccatiData<T> {
        RiccatiData::from_parts(self.f.clone(), self.g.clone(), self.k.clone())
    }

    pub fn norm_fro(&self) -> T {
        (T::lit(2.0) * self.f.norm_fro().powi(2) + self.g.norm_fro().powi(2) + self.k.norm_fro().powi(2)).sqrt()
    }

    /// `imag·(1 + ‖H‖)`.
    pub fn imag_tol(&self, rel: T) -> T {
        rel * (T::one() + self.norm_fro())
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        crate::linalg::eigenvalues(&self.to_matrix())
    }
}

/// Assemble the Hamiltonian of a Riccati triple.
pub fn assemble_hamiltonian<T: Real>(data: &RiccatiData<T>) -> HamiltonianMatrix<T> {
    HamiltonianMatrix::from_riccati(data)
}

/// `J = [[0, I], [−I, 0]]`.
pub fn symplectic_j<T: Real>(n: usize) -> ComplexMatrix<T> {
    let z = ComplexMatrix::zeros(n, n);
    let i = ComplexMatrix::identity(n);
    ComplexMatrix::block2x2(&z, &i, &-&i, &z)
}

/// `‖(JH)ᴴ − JH‖_F`.
pub fn hamiltonian_defect<T: Real>(h: &ComplexMatrix<T>) -> T {
    let n = h.rows() / 2;
    let jh = &symplectic_j::<T>(n) * h;
    (&jh.adjoint() - &jh).norm_fro()
}
