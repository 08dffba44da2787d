//! Matrix files, problem files and output plumbing.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hamriccati::linalg::ComplexMatrix;
use hamriccati::perturbation::PerturbationDirection;
use hamriccati::{Data, Matrix, System, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// `{"name", "rows", "cols", "data": [[re, im], …]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(name: &str, m: &Matrix) -> Self {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { name: name.to_string(), rows: m.rows(), cols: m.cols(), data }
    }

    pub fn to_matrix(&self) -> Result<Matrix, CliError> {
        let label = if self.name.is_empty() { "matrix" } else { self.name.as_str() };
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::input(format!(
                "{label}: {} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::input(format!("{label}: non-finite entry")));
        }
        let data = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Matrix::new(self.rows, self.cols, data).map_err(|e| CliError::input(format!("{label}: {e}")))
    }
}

pub fn matrix_json(name: &str, m: &Matrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(name, m)).expect("matrix serializes")
}

pub fn complex_json(z: &[C64]) -> Value {
    Value::Array(z.iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}

/// An input file together with its SHA-256 digest.
pub struct Input {
    pub path: PathBuf,
    pub sha256: String,
    pub json: BTreeMap<String, Value>,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let json: BTreeMap<String, Value> =
        serde_json::from_slice(&bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(Input { path: path.to_path_buf(), sha256, json })
}

impl Input {
    pub fn has(&self, key: &str) -> bool {
        self.json.contains_key(key)
    }

    pub fn matrix(&self, key: &str) -> Result<Matrix, CliError> {
        let v = self
            .json
            .get(key)
            .ok_or_else(|| CliError::input(format!("{}: missing matrix \"{key}\"", self.path.display())))?;
        let mut mf: MatrixFile = serde_json::from_value(v.clone())
            .map_err(|e| CliError::input(format!("{}: matrix \"{key}\": {e}", self.path.display())))?;
        if mf.name.is_empty() {
            mf.name = key.to_string();
        }
        mf.to_matrix()
    }

    pub fn optional_matrix(&self, key: &str) -> Result<Option<Matrix>, CliError> {
        if self.has(key) {
            self.matrix(key).map(Some)
        } else {
            Ok(None)
        }
    }

    /// A bare matrix file, or an object holding the matrix under `key`.
    pub fn matrix_or_bare(&self, key: &str) -> Result<Matrix, CliError> {
        if self.has(key) {
            return self.matrix(key);
        }
        let v = Value::Object(self.json.clone().into_iter().collect());
        let mf: MatrixFile = serde_json::from_value(v)
            .map_err(|e| CliError::input(format!("{}: expected a matrix or \"{key}\": {e}", self.path.display())))?;
        mf.to_matrix()
    }
}

/// Riccati data from `{F, G, K}` or, for state-space files, from `{A, B, C, D}`.
pub fn read_problem(input: &Input, state_space: bool) -> Result<Data, CliError> {
    let is_ss = ["A", "B", "C", "D"].iter().all(|k| input.has(k));
    if state_space || (is_ss && !input.has("F")) {
        let ss = read_state_space(input)?;
        return hamriccati::structured::from_state_space(&ss).map_err(CliError::from_input);
    }
    Data::new(input.matrix("F")?, input.matrix("G")?, input.matrix("K")?).map_err(CliError::from_input)
}

pub fn read_state_space(input: &Input) -> Result<System, CliError> {
    System::new(input.matrix("A")?, input.matrix("B")?, input.matrix("C")?, input.matrix("D")?)
        .map_err(CliError::from_input)
}

/// `{"delta11", "delta21"?, "delta22"?}` blocks or a full `{"delta"}` matrix.
pub fn read_direction(input: &Input, n: usize) -> Result<PerturbationDirection<f64>, CliError> {
    let d = if input.has("delta") {
        PerturbationDirection::from_matrix(&input.matrix("delta")?)
    } else {
        let d11 = input.matrix("delta11")?;
        match (input.optional_matrix("delta21")?, input.optional_matrix("delta22")?) {
            (None, None) => PerturbationDirection::delta11_only(d11),
            (d21, d22) => PerturbationDirection::new(
                d11,
                d21.unwrap_or_else(|| ComplexMatrix::zeros(n, n)),
                d22.unwrap_or_else(|| ComplexMatrix::zeros(n, n)),
            ),
        }
    }
    .map_err(CliError::from_input)?;
    if d.n() != n {
        return Err(CliError::input(format!("direction of order {} for a problem of order {n}", d.n())));
    }
    Ok(d)
}

/// Pretty-printed JSON with a trailing newline.
pub fn pretty(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

/// `lo:hi:steps`; one step means the single point `lo`.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::input(format!("axis spec \"{spec}\" is not lo:hi:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || (steps > 1 && hi < lo) {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
}

/// Write to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::input(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trips_through_json() {
        let m = Matrix::from_fn(2, 3, |i, j| C64::new(i as f64 + 0.1 * j as f64, 1.0 / (1.0 + (i * j) as f64 * 3.0)));
        let text = serde_json::to_string(&MatrixFile::from_matrix("M", &m)).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn axis_spec_parses_endpoints_exactly() {
        assert_eq!(parse_axis("0:5:21").unwrap()[20], 5.0);
        assert_eq!(parse_axis("-4:4:3").unwrap(), vec![-4.0, 0.0, 4.0]);
        assert_eq!(parse_axis("4:4:1").unwrap(), vec![4.0]);
        for bad in ["0:5", "a:1:2", "0:1:0", "1:0:3"] {
            assert!(parse_axis(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn wrong_entry_count_is_rejected() {
        let mf = MatrixFile { name: "F".into(), rows: 2, cols: 2, data: vec![[1.0, 0.0]; 3] };
        assert!(matches!(mf.to_matrix(), Err(CliError::Input(_))));
    }
}
