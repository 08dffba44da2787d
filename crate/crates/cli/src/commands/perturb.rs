//! `perturb`: spectra along `H + tJΔ`, the critical time, and vertex search.

use std::path::PathBuf;

use hamriccati::perturbation::{
    critical_time_with, perturbed_hamiltonian, spectrum_snapshot, vertex_path_with, CriticalOptions, PerturbationPath,
    Restriction, SeededDirections, VertexOptions, WishartDirections,
};
use hamriccati::structured::assemble_hamiltonian;
use hamriccati::Error;
use log::{debug, info};
use serde_json::{json, Map, Value};

use super::{report, Context, Output};
use crate::error::CliError;
use crate::io::{complex_json, matrix_json, parse_axis, read_direction, read_input, read_problem};
use crate::manifest::RunManifest;

pub enum Mode {
    TGrid(String),
    Critical,
    Vertex,
}

pub struct PerturbArgs {
    pub problem: PathBuf,
    pub delta: PathBuf,
    pub mode: Mode,
    pub seed: u64,
    pub budget: usize,
    pub t_max: f64,
    pub samples: usize,
}

pub fn run(ctx: &Context, args: PerturbArgs) -> Result<Output, CliError> {
    let pin = read_input(&args.problem)?;
    let din = read_input(&args.delta)?;
    let manifest = RunManifest::new("perturb", &ctx.overrides).input(&pin).input(&din);
    let data = read_problem(&pin, false)?;
    let h = assemble_hamiltonian(&data);
    let d = read_direction(&din, data.n())?;
    match args.mode {
        Mode::TGrid(spec) => {
            let ts = parse_axis(&spec)?;
            let manifest = manifest.option("t_grid", &spec);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["t", "index", "re", "im", "axis_group", "inertia"]).map_err(csv_err)?;
            for t in ts {
                if t < 0.0 {
                    return Err(CliError::input(format!("negative t = {t} in the grid")));
                }
                let ht = perturbed_hamiltonian(&h, &d, t).map_err(CliError::from_input)?;
                let snap = spectrum_snapshot(&ht, t, ht.imag_tol(ctx.tol.imag)).map_err(CliError::from_input)?;
                let mut ev = snap.eigenvalues.clone();
                ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                for (i, z) in ev.iter().enumerate() {
                    let group = snap.imaginary_groups.iter().position(|g| g.eigenvalues.contains(z));
                    let (gs, inertia) = match group {
                        Some(g) => (g.to_string(), snap.imaginary_groups[g].inertia.as_str().to_string()),
                        None => (String::new(), String::new()),
                    };
                    w.write_record([t.to_string(), i.to_string(), format!("{:e}", z.re), format!("{:e}", z.im), gs, inertia])
                        .map_err(csv_err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::input(format!("csv: {e}")))?;
            Ok(Output::Csv { bytes, manifest })
        }
        Mode::Critical => {
            let manifest = manifest.option("critical", true).option("t_max", args.t_max);
            let opts = CriticalOptions { tol: ctx.tol, ..CriticalOptions::default() };
            let ct = critical_time_with(&h, &d, args.t_max, &opts).map_err(CliError::from_input)?;
            let mut fields = Map::new();
            fields.insert("t0".into(), json!(ct.t0));
            fields.insert("bracket".into(), json!(ct.bracket.map(|(a, b)| [a, b])));
            fields.insert("t_bound".into(), json!(ct.t_bound));
            fields.insert("t_scan".into(), json!(ct.t_scan));
            fields.insert("bisections".into(), json!(ct.bisections));
            fields.insert("profile".into(), json!(ct.profile.iter().map(|&(t, r)| [t, r]).collect::<Vec<_>>()));
            if let Some(t0) = ct.t0 {
                info!("first crossing at t0 = {t0}");
                if let Ok(ht) = perturbed_hamiltonian(&h, &d, t0) {
                    if let Ok(ev) = ht.eigenvalues() {
                        fields.insert("eigenvalues_at_t0".into(), complex_json(&ev));
                    }
                }
                Ok(Output::Json(report(&manifest, fields)))
            } else {
                fields.insert("verdict".into(), json!("no_crossing"));
                Err(CliError::NoSolution {
                    message: format!("no eigenvalue reaches the imaginary axis for t ≤ {}", ct.t_scan),
                    report: report(&manifest, fields),
                })
            }
        }
        Mode::Vertex => {
            let manifest = manifest
                .option("vertex", true)
                .option("budget", args.budget)
                .option("samples_per_leg", args.samples)
                .option("t_max", args.t_max)
                .seed(args.seed);
            if d.restriction() != Restriction::Delta11Only {
                return Err(CliError::input("vertex search needs a direction with only the delta11 block"));
            }
            if args.samples < 2 {
                return Err(CliError::input("at least two samples per leg are needed"));
            }
            let mut opts = VertexOptions::<f64> { samples_per_leg: args.samples, t_max: args.t_max, ..VertexOptions::default() };
            opts.tol = ctx.tol;
            opts.critical.tol = ctx.tol;
            let mut src = SeededDirections::new(d.delta11().clone(), Box::new(WishartDirections::new(args.seed)));
            match vertex_path_with(&h, &mut src, args.budget, &opts) {
                Ok(p) => {
                    debug!("vertex path with {} legs", p.legs.len());
                    Ok(Output::Json(report(&manifest, path_fields(&p))))
                }
                Err(e @ (Error::Dimension(_) | Error::InvalidInput(_) | Error::NotSemidefinite { .. })) => {
                    Err(CliError::from_input(e))
                }
                Err(e) => {
                    let mut fields = Map::new();
                    fields.insert("verdict".into(), json!("no_vertex"));
                    fields.insert("error".into(), json!(e.to_string()));
                    Err(CliError::NoSolution { message: e.to_string(), report: report(&manifest, fields) })
                }
            }
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::input(format!("csv: {e}"))
}

fn path_fields(p: &PerturbationPath<f64>) -> Map<String, Value> {
    let legs: Vec<Value> = p
        .legs
        .iter()
        .map(|l| {
            let samples: Vec<Value> = l
                .samples
                .iter()
                .map(|s| {
                    json!({
                        "t": s.t,
                        "eigenvalues": complex_json(&s.snapshot.eigenvalues),
                        "axis_count": s.snapshot.imaginary_count(),
                        "x_minus": s.x_minus.as_ref().map(|x| matrix_json("X_minus", x)),
                        "x_plus": s.x_plus.as_ref().map(|x| matrix_json("X_plus", x)),
                        "extremal_gap": s.extremal_gap,
                    })
                })
                .collect();
            json!({
                "delta11": matrix_json("Delta11", l.direction.delta11()),
                "t_start": l.t_start,
                "t_end": l.t_end,
                "frozen": l.frozen,
                "frozen_preserved": l.frozen_preserved,
                "samples": samples,
            })
        })
        .collect();
    let mut f = Map::new();
    f.insert("verdict".into(), json!(if p.terminal.is_some() { "vertex" } else { "open" }));
    f.insert("legs".into(), Value::Array(legs));
    f.insert("accumulated_delta11".into(), matrix_json("Delta11", p.accumulated().delta11()));
    if let Some(v) = &p.terminal {
        f.insert(
            "terminal".into(),
            json!({
                "delta11": matrix_json("Delta11", &v.delta11),
                "x": matrix_json("X", &v.x),
                "x_minus": matrix_json("X_minus", &v.x_minus),
                "x_plus": matrix_json("X_plus", &v.x_plus),
                "extremal_gap": v.extremal_gap,
                "eigenvalues": complex_json(&v.snapshot.eigenvalues),
            }),
        );
    }
    f.insert("gap_nonincreasing".into(), json!(p.gap_nonincreasing(1e-6)));
    f
}
