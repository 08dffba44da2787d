//! First time along a ray at which eigenvalues of `H₀ + tJΔ` reach the
//! imaginary axis.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, norm2};
use crate::riccati::solve_extremal_with;
use crate::scalar::Real;
use crate::structured::HamiltonianMatrix;
use crate::tolerance::Tolerances;

use super::direction::{perturbed_hamiltonian, PerturbationDirection, Restriction};

#[derive(Clone, Debug)]
pub struct CriticalOptions<T> {
    /// Uniform samples used to bracket the first crossing.
    pub scan_points: usize,
    /// Relative bracket width at which bisection stops.
    pub bisect_tol: T,
    /// The scan extends to `safety·t_bound`.
    pub safety: T,
    /// Number of eigenvalues allowed inside the axis band without counting
    /// as a crossing (eigenvalues frozen on the axis by the direction).
    pub ignore_axis: usize,
    pub tol: Tolerances<T>,
}

impl<T: Real> Default for CriticalOptions<T> {
    fn default() -> Self {
        Self { scan_points: 64, bisect_tol: T::lit(1e-10), safety: T::lit(2.0), ignore_axis: 0, tol: Tolerances::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalTime<T> {
    /// Smallest sampled `t` with `min |Re λ| ≤ imag_tol`, refined by bisection.
    pub t0: Option<T>,
    /// Final `[lo, hi]` with no crossing detected at `lo`.
    pub bracket: Option<(T, T)>,
    /// `(2‖F‖β + ‖G‖β² + ‖K‖)/‖Δ₁₁‖` with `β = ‖X₊‖ + ‖X₊ − X₋‖`, when the
    /// direction only touches `K` and the extremal solutions exist.
    pub t_bound: Option<T>,
    /// Right end of the scanned interval.
    pub t_scan: T,
    /// `(t, |Re λ|)` at the scan points, taking the smallest value beyond the
    /// `ignore_axis` ignored eigenvalues.
    pub profile: Vec<(T, T)>,
    pub bisections: usize,
}

/// Beyond `t_bound` the perturbed equation has no Hermitian solution, so an
/// eigenvalue must have reached the axis before it.
pub fn boundedness_bound<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    tol: &Tolerances<T>,
) -> Option<T> {
    if d.restriction() != Restriction::Delta11Only {
        return None;
    }
    let nd = norm2(d.delta11());
    if nd == T::zero() {
        return None;
    }
    let data = h0.riccati_data().ok()?;
    let ext = solve_extremal_with(&data, tol).ok()?;
    let beta = norm2(&ext.x_plus) + norm2(&(&ext.x_plus - &ext.x_minus));
    let lhs = T::lit(2.0) * norm2(h0.f()) * beta + norm2(h0.g()) * beta * beta + norm2(h0.k());
    Some(lhs / nd)
}

/// The `(skip+1)`-th smallest `|Re λ|` and whether it lies inside the axis band.
fn probe<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    t: T,
    rel: T,
    skip: usize,
) -> Result<(T, bool)> {
    let ht = perturbed_hamiltonian(h0, d, t)?;
    let mut re: Vec<T> = eigenvalues(&ht.to_matrix())?.iter().map(|z| z.re.abs()).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = re.get(skip).copied().unwrap_or(T::infinity());
    Ok((m, m <= ht.imag_tol(rel)))
}

pub fn critical_time<T: Real>(h0: &HamiltonianMatrix<T>, d: &PerturbationDirection<T>, t_max: T) -> Result<CriticalTime<T>> {
    critical_time_with(h0, d, t_max, &CriticalOptions::default())
}

pub fn critical_time_with<T: Real>(
    h0: &HamiltonianMatrix<T>,
    d: &PerturbationDirection<T>,
    t_max: T,
    opts: &CriticalOptions<T>,
) -> Result<CriticalTime<T>> {
    if d.n() != h0.n() {
        return Err(Error::Dimension(format!("direction of order {} for Hamiltonian of order {}", d.n(), h0.n())));
    }
    if !(t_max >= T::zero()) || opts.scan_points < 2 {
        return Err(Error::InvalidInput("t_max must be nonnegative and the scan needs two points".into()));
    }
    let rel = opts.tol.imag;
    let (m0, hit0) = probe(h0, d, T::zero(), rel, opts.ignore_axis)?;
    let t_bound = boundedness_bound(h0, d, &opts.tol);
    let t_scan = match t_bound {
        Some(b) => t_max.min(opts.safety * b),
        None => t_max,
    };
    if !t_scan.is_finite() {
        return Err(Error::InvalidInput("no boundedness bound applies; pass a finite t_max".into()));
    }
    let mut profile = vec![(T::zero(), m0)];
    if hit0 {
        return Ok(CriticalTime { t0: Some(T::zero()), bracket: None, t_bound, t_scan, profile, bisections: 0 });
    }
    let steps = opts.scan_points - 1;
    let mut bracket = None;
    let mut prev = T::zero();
    for i in 1..=steps {
        let t = t_scan * T::lit(i as f64) / T::lit(steps as f64);
        let (m, hit) = probe(h0, d, t, rel, opts.ignore_axis)?;
        profile.push((t, m));
        if hit {
            bracket = Some((prev, t));
            break;
        }
        prev = t;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(CriticalTime { t0: None, bracket: None, t_bound, t_scan, profile, bisections: 0 });
    };
    let mut bisections = 0;
    while hi - lo > opts.bisect_tol * hi {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if probe(h0, d, mid, rel, opts.ignore_axis)?.1 {
            hi = mid;
        } else {
            lo = mid;
        }
        bisections += 1;
    }
    Ok(CriticalTime { t0: Some(hi), bracket: Some((lo, hi)), t_bound, t_scan, profile, bisections })
}
