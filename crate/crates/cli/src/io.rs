//! JSON file formats for subspaces and states.
//!
//! Complex numbers are `[re, im]` pairs. A subspace lists its complement
//! spanners, each a flat row-major list of `n·m` entries; spanners are
//! orthonormalized on load. A state lists the rows of its `mn × mn` matrix.

use std::fmt;
use std::path::Path;

use partconj_core::edge::State;
use partconj_core::{CMat, CVec, Dim, Subspace, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum CliError {
    Io { path: String, source: std::io::Error },
    Json(serde_json::Error),
    Format(String),
    Core(partconj_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Json(e) => write!(f, "invalid JSON: {e}"),
            CliError::Format(msg) => write!(f, "invalid input: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<partconj_core::Error> for CliError {
    fn from(e: partconj_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type Complex = [f64; 2];

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

fn parse_complex(c: &Complex, what: &str) -> Result<C64, CliError> {
    if !(c[0].is_finite() && c[1].is_finite()) {
        return Err(CliError::Format(format!("non-finite entry in {what}")));
    }
    Ok(C64::new(c[0], c[1]))
}

pub fn vector(v: &CVec) -> Vec<Complex> {
    v.iter().copied().map(complex).collect()
}

pub fn matrix_rows(a: &CMat) -> Vec<Vec<Complex>> {
    a.row_iter().map(|r| r.iter().copied().map(complex).collect()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub m: usize,
    pub n: usize,
    pub complement: Vec<Vec<Complex>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub matrix: Vec<Vec<Complex>>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn parse_subspace(text: &str) -> Result<Subspace, CliError> {
    let file: SubspaceFile = serde_json::from_str(text)?;
    let dim = Dim::new(file.m, file.n)?;
    let mut spanners = Vec::with_capacity(file.complement.len());
    for (idx, flat) in file.complement.iter().enumerate() {
        if flat.len() != dim.mn() {
            return Err(CliError::Format(format!(
                "complement[{idx}] has {} entries, expected n·m = {}",
                flat.len(),
                dim.mn()
            )));
        }
        let entries = flat
            .iter()
            .map(|c| parse_complex(c, "complement"))
            .collect::<Result<Vec<_>, _>>()?;
        spanners.push(CMat::from_row_slice(dim.n, dim.m, &entries));
    }
    Ok(Subspace::from_complement_spanners(dim, &spanners)?)
}

pub fn subspace_json(s: &Subspace) -> SubspaceFile {
    let dim = s.dim();
    let complement = s
        .complement()
        .iter()
        .map(|p| p.row_iter().flat_map(|r| r.iter().copied().map(complex).collect::<Vec<_>>()).collect())
        .collect();
    SubspaceFile { m: dim.m, n: dim.n, complement }
}

pub fn parse_state(text: &str) -> Result<State, CliError> {
    let file: StateFile = serde_json::from_str(text)?;
    let dim = Dim::new(file.m, file.n)?;
    let size = dim.mn();
    if file.matrix.len() != size || file.matrix.iter().any(|r| r.len() != size) {
        return Err(CliError::Format(format!("matrix must be {size} × {size}")));
    }
    let entries = file
        .matrix
        .iter()
        .flatten()
        .map(|c| parse_complex(c, "matrix"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(State::new(dim, CMat::from_row_slice(size, size, &entries))?)
}

pub fn state_json(s: &State) -> StateFile {
    let dim = s.dim();
    StateFile { m: dim.m, n: dim.n, matrix: matrix_rows(s.matrix()) }
}
