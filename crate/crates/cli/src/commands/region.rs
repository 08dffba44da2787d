//! `region`: feasibility of `Δ₁₁ = [[a, c], [c, b]]` over a grid.

use std::path::PathBuf;

use hamriccati::perturbation::{example2_margin, region_membership_with, Membership, PerturbationDirection};
use hamriccati::reference::{example2, example2_delta11};
use hamriccati::structured::assemble_hamiltonian;
use hamriccati::Data;
use log::info;
use rayon::prelude::*;

use super::{Context, Output};
use crate::error::CliError;
use crate::io::{parse_axis, read_input, read_problem};
use crate::manifest::RunManifest;

pub const DEFAULT_GRID: &str = "0:5:21,0:10:21,-4:4:21";

pub const HEADER: [&str; 6] = ["a", "b", "c", "membership", "min_abs_re_lambda", "margin"];

/// `(a, b, c)` axes from `a0:a1:na,b0:b1:nb,c0:c1:nc`.
pub fn parse_grid(spec: &str) -> Result<[Vec<f64>; 3], CliError> {
    let axes: Vec<&str> = spec.split(',').collect();
    if axes.len() != 3 {
        return Err(CliError::input(format!("grid spec \"{spec}\" needs three comma-separated axes")));
    }
    Ok([parse_axis(axes[0])?, parse_axis(axes[1])?, parse_axis(axes[2])?])
}

/// The closed-form margin only describes the reference problem.
fn is_reference(data: &Data) -> bool {
    let r = example2::<f64>();
    data.f().approx_eq(r.f(), 1e-12) && data.g().approx_eq(r.g(), 1e-12) && data.k().approx_eq(r.k(), 1e-12)
}

struct Row {
    membership: Membership,
    min_abs_re: Option<f64>,
}

pub fn run(ctx: &Context, problem: PathBuf, grid: String) -> Result<Output, CliError> {
    let input = read_input(&problem)?;
    let manifest = RunManifest::new("region", &ctx.overrides).input(&input).option("grid", &grid);
    let data = read_problem(&input, false)?;
    if data.n() != 2 {
        return Err(CliError::input(format!("region scans need a problem of order 2, got {}", data.n())));
    }
    let [av, bv, cv] = parse_grid(&grid)?;
    let mut points = Vec::with_capacity(av.len() * bv.len() * cv.len());
    for &a in &av {
        for &b in &bv {
            points.extend(cv.iter().map(|&c| (a, b, c)));
        }
    }
    let h = assemble_hamiltonian(&data);
    let tol = ctx.tol;
    // par_iter().map().collect() keeps the grid order
    let rows: Vec<Row> = points
        .par_iter()
        .map(|&(a, b, c)| match PerturbationDirection::delta11_only(example2_delta11(a, b, c)) {
            Ok(d) => {
                let v = region_membership_with(&h, &d, &tol);
                Row { membership: v.membership, min_abs_re: v.min_abs_re }
            }
            Err(_) => Row { membership: Membership::Exterior, min_abs_re: None },
        })
        .collect();
    let reference = is_reference(&data);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    for (&(a, b, c), r) in points.iter().zip(&rows) {
        let margin = if reference { format!("{:e}", example2_margin(a, b, c)) } else { String::new() };
        let min_re = r.min_abs_re.map(|x| format!("{x:e}")).unwrap_or_default();
        w.write_record([a.to_string(), b.to_string(), c.to_string(), r.membership.as_str().to_string(), min_re, margin])
            .map_err(csv_err)?;
    }
    let count = |m| rows.iter().filter(|r| r.membership == m).count();
    info!(
        "{} points: {} interior, {} boundary, {} exterior",
        rows.len(),
        count(Membership::Interior),
        count(Membership::Boundary),
        count(Membership::Exterior)
    );
    let bytes = w.into_inner().map_err(|e| CliError::input(format!("csv: {e}")))?;
    Ok(Output::Csv { bytes, manifest })
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::input(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_21_points_per_axis() {
        let [a, b, c] = parse_grid(DEFAULT_GRID).unwrap();
        assert_eq!((a.len(), b.len(), c.len()), (21, 21, 21));
        assert_eq!((a[20], b[20], c[0], c[20]), (5.0, 10.0, -4.0, 4.0));
    }

    #[test]
    fn two_axis_grid_is_rejected() {
        assert!(parse_grid("0:1:2,0:1:2").is_err());
    }
}
