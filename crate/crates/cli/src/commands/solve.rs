//! `solve`: extremal solutions, the block-wise construction, or verification
//! of a candidate against the Riccati inequality.

use std::path::PathBuf;

use hamriccati::linalg::loewner_leq;
use hamriccati::riccati::{ari_residual_with, solve_extremal_with, solve_structured_with, ExtremalSolutions, StructuredVerdict};
use hamriccati::structured::assemble_hamiltonian;
use hamriccati::{Data, Error, Matrix};
use log::info;
use serde_json::{json, Map, Value};

use super::{report, Context, Output};
use crate::error::CliError;
use crate::io::{complex_json, matrix_json, read_input, read_problem};
use crate::manifest::RunManifest;

pub enum Mode {
    Extremal,
    Structured,
    Verify(PathBuf),
}

impl Mode {
    fn name(&self) -> &'static str {
        match self {
            Self::Extremal => "extremal",
            Self::Structured => "structured",
            Self::Verify(_) => "verify",
        }
    }
}

/// Precondition violations count as invalid input; everything else means
/// the numerical method found no solution.
fn classify(e: Error, fields: Map<String, Value>, manifest: &RunManifest) -> CliError {
    match e {
        Error::Dimension(_)
        | Error::NonFinite
        | Error::NotSquare { .. }
        | Error::NotHermitian { .. }
        | Error::NotSemidefinite { .. }
        | Error::Unstable { .. }
        | Error::InvalidInput(_) => CliError::from_input(e),
        e => {
            let mut f = fields;
            f.insert("verdict".into(), json!("no_solution"));
            f.insert("error".into(), json!(e.to_string()));
            CliError::NoSolution { message: e.to_string(), report: report(manifest, f) }
        }
    }
}

fn base_fields(mode: &Mode, data: &Data) -> Map<String, Value> {
    let mut f = Map::new();
    f.insert("mode".into(), json!(mode.name()));
    f.insert("n".into(), json!(data.n()));
    if let Ok(ev) = assemble_hamiltonian(data).eigenvalues() {
        f.insert("hamiltonian_spectrum".into(), complex_json(&ev));
    }
    f
}

fn sandwich(x: &Matrix, e: &ExtremalSolutions<f64>, tol: f64) -> Value {
    json!({
        "x_minus_leq_x": loewner_leq(&e.x_minus, x, tol).unwrap_or(false),
        "x_leq_x_plus": loewner_leq(x, &e.x_plus, tol).unwrap_or(false),
    })
}

pub fn run(ctx: &Context, problem: PathBuf, mode: Mode, state_space: bool) -> Result<Output, CliError> {
    let input = read_input(&problem)?;
    let mut manifest = RunManifest::new("solve", &ctx.overrides).input(&input).option("mode", mode.name());
    if state_space {
        manifest = manifest.option("state_space", true);
    }
    let data = &read_problem(&input, state_space)?;
    let tol = &ctx.tol;
    let mut fields = base_fields(&mode, data);
    let extremal = solve_extremal_with(data, tol);
    match &mode {
        Mode::Extremal => {
            let e = extremal.map_err(|e| classify(e, fields.clone(), &manifest))?;
            info!("extremal pair found, ordered = {}", e.loewner_ordered);
            fields.insert("verdict".into(), json!("solved"));
            fields.insert("x".into(), matrix_json("X", &e.x_minus));
            fields.insert("x_minus".into(), matrix_json("X_minus", &e.x_minus));
            fields.insert("x_plus".into(), matrix_json("X_plus", &e.x_plus));
            fields.insert("closed_loop_minus".into(), complex_json(&e.closed_loop_minus));
            fields.insert("closed_loop_plus".into(), complex_json(&e.closed_loop_plus));
            fields.insert("residual_minus".into(), json!(e.residual_minus));
            fields.insert("residual_plus".into(), json!(e.residual_plus));
            fields.insert("loewner_ordered".into(), json!(e.loewner_ordered));
            Ok(Output::Json(report(&manifest, fields)))
        }
        Mode::Structured => {
            let r = solve_structured_with(data, tol).map_err(|e| classify(e, fields.clone(), &manifest))?;
            info!("structured verdict {}", r.verdict.as_str());
            fields.insert("verdict".into(), json!(r.verdict.as_str()));
            if let Some(x) = &r.x {
                fields.insert("x".into(), matrix_json("X", x));
                fields.insert("residual".into(), json!(data.residual(x).norm_fro()));
                if let Ok(e) = &extremal {
                    fields.insert("sandwich".into(), sandwich(x, e, tol.loewner));
                }
            }
            if let Some(x) = &r.psd_solution {
                fields.insert("psd_solution".into(), matrix_json("X_psd", x));
            }
            if let Some(st) = &r.stages {
                let mut s = Map::new();
                s.insert("x11_tilde".into(), matrix_json("X11_tilde", &st.x11_tilde));
                s.insert("x21h_tilde".into(), matrix_json("X21h_tilde", &st.x21h_tilde));
                s.insert("x22_tilde".into(), matrix_json("X22_tilde", &st.x22_tilde));
                s.insert("x11".into(), matrix_json("X11", &st.x11));
                if let Some(z) = &st.z {
                    s.insert("z".into(), matrix_json("Z", z));
                }
                if let Some(x22) = &st.x22 {
                    s.insert("x22".into(), matrix_json("X22", x22));
                }
                let res: Map<String, Value> = st.residuals.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                s.insert("residuals".into(), Value::Object(res));
                s.insert("x11_choice".into(), json!(st.x11_choice));
                s.insert("x11_positive_definite".into(), json!(st.x11_positive_definite));
                fields.insert("stages".into(), Value::Object(s));
            }
            fields.insert("inconsistency_evidence".into(), json!(r.inconsistency_evidence));
            let coincide: Vec<Value> =
                r.eigen_coincidence.iter().map(|(a, b)| json!([[a.re, a.im], [b.re, b.im]])).collect();
            fields.insert("eigen_coincidence".into(), Value::Array(coincide));
            fields.insert("sizes".into(), json!([r.sizes.0, r.sizes.1, r.sizes.2]));
            fields.insert("notes".into(), json!(r.notes));
            let out = report(&manifest, fields);
            if r.verdict == StructuredVerdict::NoSolution {
                return Err(CliError::NoSolution { message: "no positive definite solution".into(), report: out });
            }
            Ok(Output::Json(out))
        }
        Mode::Verify(path) => {
            let xin = read_input(path)?;
            manifest = manifest.input(&xin);
            let x = xin.matrix_or_bare("X")?;
            let a = ari_residual_with(&x, data, tol).map_err(CliError::from_input)?;
            fields.insert("residual".into(), matrix_json("R", &a.r));
            fields.insert("residual_eigenvalues".into(), json!(a.verdict.eigenvalues));
            fields.insert("residual_kind".into(), json!(a.verdict.kind.as_str()));
            fields.insert("accepted".into(), json!(a.accepted));
            fields.insert("delta_k".into(), matrix_json("Delta_K", &a.delta_k));
            // X solves the equation with constant term K + Δ_K exactly
            let shifted = data.with_k(data.k() + &a.delta_k);
            fields.insert("shifted_residual".into(), json!(shifted.residual(&x.hermitian_part()).norm_fro()));
            if let Ok(e) = &extremal {
                fields.insert("sandwich".into(), sandwich(&x.hermitian_part(), e, tol.loewner));
            }
            fields.insert("verdict".into(), json!(if a.accepted { "accepted" } else { "rejected" }));
            let out = report(&manifest, fields);
            if !a.accepted {
                return Err(CliError::NoSolution { message: "candidate violates the Riccati inequality".into(), report: out });
            }
            Ok(Output::Json(out))
        }
    }
}
