//! Block-wise construction of positive definite solutions when `F` is
//! stable but `(F, G)` need not be controllable nor `(F, K)` observable.
//!
//! The data are brought to the observability-first condensed form
//!
//! ```text
//! F = [F₁₁ 0; F₂₁ F₂₂],  G = [G₁₁ G₂₁ᴴ; G₂₁ G₂₂],  K = [K₁₁ 0; 0 0],
//! F₁₁ = [F̃₁₁ F̃₁₂; 0 F̃₂₂],  G₁₁ = [G̃₁₁ 0; 0 0],  K₁₁ = [K̃₁₁ K̃₂₁ᴴ; K̃₂₁ K̃₂₂],
//! ```
//!
//! the observable core is solved first (`X̃₁₁`, then a Sylvester equation
//! for `X̃₂₁ᴴ` and a Lyapunov equation for `X̃₂₂`), and a positive definite
//! solution is sought in the form `X = [I Z; 0 I]·diag(X₁₁, X₂₂)·[I 0; Zᴴ I]`.
//! `Z` solves `(F₁₁+G₁₁X₁₁)ᴴZ − ZF₂₂ᴴ + F₂₁ᴴ + X₁₁G₂₁ᴴ = 0` and `X₂₂⁻¹`
//! solves `F₂₂Y + YF₂₂ᴴ + [Z; I]ᴴG[Z; I] = 0`.

use num_complex::Complex;

use super::extremal::solve_with_selection;
use crate::error::{Error, Result};
use crate::linalg::{definiteness, eigenvalues, inverse, solve_lyapunov, solve_sylvester, ComplexMatrix, SylvesterSolution};
use crate::scalar::Real;
use crate::structured::{staircase_with, RiccatiData, Selection, StaircaseVariant};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuredVerdict {
    /// A positive definite solution was assembled.
    Solved,
    /// No positive definite solution exists; see the evidence fields.
    NoSolution,
    /// Only the semidefinite solution `diag(X₁₁, 0)` was found.
    ReducedOnly,
}

impl StructuredVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Solved => "solved",
            Self::NoSolution => "no_solution",
            Self::ReducedOnly => "reduced_only",
        }
    }
}

/// Intermediate blocks, all in the condensed basis.
#[derive(Clone, Debug)]
pub struct StructuredStages<T> {
    pub x11_tilde: ComplexMatrix<T>,
    pub x21h_tilde: ComplexMatrix<T>,
    pub x22_tilde: ComplexMatrix<T>,
    pub x11: ComplexMatrix<T>,
    pub z: Option<ComplexMatrix<T>>,
    pub x22: Option<ComplexMatrix<T>>,
    /// `(stage name, residual norm)`.
    pub residuals: Vec<(&'static str, T)>,
    /// Which candidate for `X̃₁₁` produced these stages.
    pub x11_choice: &'static str,
    pub x11_positive_definite: bool,
}

#[derive(Clone, Debug)]
pub struct StructuredSolveReport<T> {
    pub verdict: StructuredVerdict,
    /// Positive definite solution in the original basis.
    pub x: Option<ComplexMatrix<T>>,
    /// Semidefinite solution `U·diag(X₁₁, 0)·Uᴴ`, when the core stages succeeded.
    pub psd_solution: Option<ComplexMatrix<T>>,
    pub stages: Option<StructuredStages<T>>,
    /// Least-squares residual of the inconsistent `Z` equation.
    pub inconsistency_evidence: Option<T>,
    /// Eigenvalue pairs `(λ(F̃₂₂), λ(F₂₂))` found to coincide.
    pub eigen_coincidence: Vec<(Complex<T>, Complex<T>)>,
    /// Partition sizes `(n₁, n₂, n₃)` of the condensed form.
    pub sizes: (usize, usize, usize),
    pub u: ComplexMatrix<T>,
    /// Human-readable trace of the attempts made.
    pub notes: Vec<String>,
}

pub fn solve_structured<T: Real>(data: &RiccatiData<T>) -> Result<StructuredSolveReport<T>> {
    solve_structured_with(data, &Tolerances::default())
}

struct Blocks<T> {
    ft11: ComplexMatrix<T>,
    ft12: ComplexMatrix<T>,
    ft22: ComplexMatrix<T>,
    gt11: ComplexMatrix<T>,
    kt11: ComplexMatrix<T>,
    kt21h: ComplexMatrix<T>,
    kt22: ComplexMatrix<T>,
    f11: ComplexMatrix<T>,
    f21: ComplexMatrix<T>,
    f22: ComplexMatrix<T>,
    g11: ComplexMatrix<T>,
    g21: ComplexMatrix<T>,
    k11: ComplexMatrix<T>,
    g: ComplexMatrix<T>,
}

pub fn solve_structured_with<T: Real>(data: &RiccatiData<T>, tol: &Tolerances<T>) -> Result<StructuredSolveReport<T>> {
    let ev = eigenvalues(data.f())?;
    let max_re = ev.iter().map(|z| z.re).fold(T::neg_infinity(), T::max);
    if max_re >= T::zero() {
        return Err(Error::Unstable { max_real: max_re.as_f64() });
    }
    let cf = staircase_with(data, StaircaseVariant::ObservabilityFirst, tol);
    let (n1, n2, n3) = cf.sizes;
    let p = n1 + n2;
    let b = Blocks {
        ft11: cf.f.submatrix(0, 0, n1, n1),
        ft12: cf.f.submatrix(0, n1, n1, n2),
        ft22: cf.f.submatrix(n1, n1, n2, n2),
        gt11: cf.g.submatrix(0, 0, n1, n1),
        kt11: cf.k.submatrix(0, 0, n1, n1),
        kt21h: cf.k.submatrix(0, n1, n1, n2),
        kt22: cf.k.submatrix(n1, n1, n2, n2),
        f11: cf.f.submatrix(0, 0, p, p),
        f21: cf.f.submatrix(p, 0, n3, p),
        f22: cf.f.submatrix(p, p, n3, n3),
        g11: cf.g.submatrix(0, 0, p, p),
        g21: cf.g.submatrix(p, 0, n3, p),
        k11: cf.k.submatrix(0, 0, p, p),
        g: cf.g.clone(),
    };
    let mut report = StructuredSolveReport {
        verdict: StructuredVerdict::NoSolution,
        x: None,
        psd_solution: None,
        stages: None,
        inconsistency_evidence: None,
        eigen_coincidence: Vec::new(),
        sizes: cf.sizes,
        u: cf.u.clone(),
        notes: Vec::new(),
    };
    let scale = T::one() + data.f().norm_fro();
    let coincide_tol = T::lit(1e-6) * scale;

    let tilde = RiccatiData::from_parts(b.ft11.clone(), b.gt11.clone(), b.kt11.clone());
    let mut candidates: Vec<(&'static str, ComplexMatrix<T>)> = Vec::new();
    if n1 == 0 {
        candidates.push(("empty", ComplexMatrix::zeros(0, 0)));
    } else {
        for (label, sel) in [("minimal", Selection::LeftHalf), ("maximal", Selection::RightHalf)] {
            match solve_with_selection(&tilde, sel, tol) {
                Ok(x) => candidates.push((label, x)),
                Err(e) => report.notes.push(format!("{label} core solution unavailable: {e}")),
            }
        }
    }

    for (label, xt11) in candidates {
        // (F̃₁₁+G̃₁₁X̃₁₁)ᴴ·X̃₂₁ᴴ + X̃₂₁ᴴ·F̃₂₂ + X̃₁₁F̃₁₂ + K̃₂₁ᴴ = 0
        let ct = &b.ft11 + &(&b.gt11 * &xt11);
        let c = &(&xt11 * &b.ft12) + &b.kt21h;
        let x21h = match solve_sylvester(&ct.adjoint(), &b.ft22, &c)? {
            SylvesterSolution::Inconsistent { residual } => {
                report.notes.push(format!("{label} core: coupling equation inconsistent (residual {:.3e})", residual.as_f64()));
                continue;
            }
            s => s.into_solution().expect("solvable branch"),
        };
        let r_cpl = (&(&(&ct.adjoint() * &x21h) + &(&x21h * &b.ft22)) + &c).norm_fro();
        let x21 = x21h.adjoint();
        let cc = &(&(&(&b.ft12.adjoint() * &x21h) + &(&x21 * &b.ft12)) + &(&(&x21 * &b.gt11) * &x21h)) + &b.kt22;
        let x22t = solve_lyapunov(&b.ft22, &cc.hermitian_part())?;
        let x11 = ComplexMatrix::block2x2(&xt11, &x21h, &x21, &x22t).hermitian_part();
        let obs = RiccatiData::from_parts(b.f11.clone(), b.g11.clone(), b.k11.clone());
        let r11 = obs.residual(&x11).norm_fro();
        let x11_pd = p == 0 || definiteness(&x11, tol.loewner)?.kind == crate::linalg::Definiteness::PositiveDefinite;
        let mut stages = StructuredStages {
            x11_tilde: xt11.clone(),
            x21h_tilde: x21h.clone(),
            x22_tilde: x22t.clone(),
            x11: x11.clone(),
            z: None,
            x22: None,
            residuals: vec![
                ("core", tilde.residual(&xt11).norm_fro()),
                ("coupling", r_cpl),
                ("observable", r11),
            ],
            x11_choice: label,
            x11_positive_definite: x11_pd,
        };
        let mut padded = ComplexMatrix::zeros(data.n(), data.n());
        padded.set_submatrix(0, 0, &x11);
        let psd = (&(&cf.u * &padded) * &cf.u.adjoint()).hermitian_part();
        report.psd_solution = Some(psd.clone());

        if n3 == 0 {
            let x = psd;
            let r = data.residual(&x).norm_fro();
            stages.residuals.push(("full", r));
            report.verdict = if x11_pd { StructuredVerdict::Solved } else { StructuredVerdict::ReducedOnly };
            report.x = x11_pd.then_some(x);
            report.stages = Some(stages);
            return Ok(report);
        }

        // (F₁₁+G₁₁X₁₁)ᴴZ − ZF₂₂ᴴ + F₂₁ᴴ + X₁₁G₂₁ᴴ = 0
        let a = (&b.f11 + &(&b.g11 * &x11)).adjoint();
        let bz = -b.f22.adjoint();
        let cz = &b.f21.adjoint() + &(&x11 * &b.g21.adjoint());
        let z = match solve_sylvester(&a, &bz, &cz)? {
            SylvesterSolution::Inconsistent { residual } => {
                report.inconsistency_evidence = Some(residual);
                let e_t22 = eigenvalues(&b.ft22)?;
                let e_22 = eigenvalues(&b.f22)?;
                let common: Vec<_> = e_t22
                    .iter()
                    .flat_map(|&l| e_22.iter().map(move |&m| (l, m)))
                    .filter(|(l, m)| (*l - *m).norm() <= coincide_tol)
                    .collect();
                report.notes.push(format!(
                    "{label} core: Z equation inconsistent (residual {:.3e}), {} coinciding eigenvalue pair(s)",
                    residual.as_f64(),
                    common.len()
                ));
                report.stages = Some(stages);
                if !common.is_empty() {
                    report.eigen_coincidence = common;
                    report.verdict = StructuredVerdict::NoSolution;
                    return Ok(report);
                }
                continue;
            }
            s => s.into_solution().expect("solvable branch"),
        };
        stages.residuals.push(("z", (&(&(&a * &z) + &(&z * &bz)) + &cz).norm_fro()));
        // [Z; I]ᴴ G [Z; I]
        let zi = z.vstack(&ComplexMatrix::identity(n3));
        let gz = (&(&zi.adjoint() * &b.g) * &zi).hermitian_part();
        let y22 = solve_lyapunov(&b.f22.adjoint(), &gz)?;
        stages.z = Some(z.clone());
        let yv = definiteness(&y22, tol.loewner)?;
        if yv.kind != crate::linalg::Definiteness::PositiveDefinite {
            report.notes.push(format!("{label} core: Y₂₂ is {} (margin {:.3e})", yv.kind.as_str(), yv.margin.as_f64()));
            report.verdict = StructuredVerdict::ReducedOnly;
            report.stages = Some(stages);
            return Ok(report);
        }
        let x22 = inverse(&y22)?.hermitian_part();
        let mut upper = ComplexMatrix::identity(data.n());
        upper.set_submatrix(0, p, &z);
        let xc = &(&upper * &ComplexMatrix::block_diag(&[&x11, &x22])) * &upper.adjoint();
        let x = (&(&cf.u * &xc) * &cf.u.adjoint()).hermitian_part();
        let r = data.residual(&x).norm_fro();
        stages.x22 = Some(x22);
        stages.residuals.push(("full", r));
        report.stages = Some(stages);
        let bound = tol.residual * data.residual_scale(&x);
        if r > bound {
            report.notes.push(format!("assembled solution residual {:.3e} exceeds {:.3e}", r.as_f64(), bound.as_f64()));
            report.verdict = StructuredVerdict::ReducedOnly;
            return Ok(report);
        }
        report.verdict = StructuredVerdict::Solved;
        report.x = Some(x);
        return Ok(report);
    }
    report.verdict = StructuredVerdict::NoSolution;
    Ok(report)
}
