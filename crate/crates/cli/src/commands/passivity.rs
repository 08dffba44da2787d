//! `passivity`: certificate search and port-Hamiltonian realization.

use std::path::PathBuf;

use hamriccati::riccati::{passivity_verdict_with, ph_realization_with, PassivityVerdict};
use log::info;
use serde_json::{json, Map};

use super::{report, Context, Output};
use crate::error::CliError;
use crate::io::{complex_json, emit, matrix_json, pretty, read_input, read_state_space};
use crate::manifest::RunManifest;

pub fn run(ctx: &Context, system: PathBuf, ph_out: Option<PathBuf>) -> Result<Output, CliError> {
    let input = read_input(&system)?;
    let mut manifest = RunManifest::new("passivity", &ctx.overrides).input(&input);
    if let Some(p) = &ph_out {
        manifest = manifest.option("ph_out", p.display().to_string());
    }
    let ss = read_state_space(&input)?;
    let verdict = passivity_verdict_with(&ss, &ctx.tol).map_err(CliError::from_input)?;
    let mut fields = Map::new();
    match verdict {
        PassivityVerdict::NotCertified(d) => {
            info!("no certificate after {} attempts", d.attempts.len());
            fields.insert("verdict".into(), json!("not_certified"));
            fields.insert(
                "diagnostics".into(),
                json!({
                    "imaginary_spectrum": complex_json(&d.imaginary_spectrum),
                    "max_real_f": d.max_real_f,
                    "attempts": d.attempts,
                }),
            );
            Err(CliError::NoSolution { message: "passivity not certified".into(), report: report(&manifest, fields) })
        }
        PassivityVerdict::Passive(c) => {
            fields.insert("verdict".into(), json!("passive"));
            fields.insert(
                "certificate".into(),
                json!({
                    "x": matrix_json("X", &c.x),
                    "source": c.source.as_str(),
                    "shift": c.shift,
                    "x_margin": c.x_verdict.margin,
                    "lmi_margin": c.lmi_verdict.margin,
                    "lmi_kind": c.lmi_verdict.kind.as_str(),
                }),
            );
            let ph = ph_realization_with(&ss, &c.x, &ctx.tol).map_err(CliError::from_input)?;
            let realization = json!({
                "j": matrix_json("J", &ph.j),
                "r": matrix_json("R", &ph.r),
                "b_hat": matrix_json("B_hat", &ph.b_hat),
                "p_hat": matrix_json("P_hat", &ph.p_hat),
                "s": matrix_json("S", &ph.s),
                "n": matrix_json("N", &ph.n_skew),
                "w": matrix_json("W", &ph.w),
                "w_margin": ph.w_verdict.margin,
                "w_kind": ph.w_verdict.kind.as_str(),
                "reconstruction_error": ph.reconstruction_error(&ss).map_err(CliError::from_input)?,
            });
            if let Some(p) = &ph_out {
                let mut m = Map::new();
                m.insert("ph_realization".into(), realization.clone());
                let bytes = pretty(&report(&manifest, m));
                emit(Some(p), &bytes)?;
            }
            fields.insert("ph_realization".into(), realization);
            Ok(Output::Json(report(&manifest, fields)))
        }
    }
}
