//! JSON ingestion: `{"n": int, "A": [[[re, im], ...], ...], "X": ..., "B": ...}`.

use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use super::CliError;
use crate::matcore::{BlockPsd, ComplexMatrix, HermitianMatrix, MatError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixInput {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Option<Vec<Vec<Complex64>>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<Complex64>>,
    #[serde(rename = "B")]
    pub b: Option<Vec<Vec<Complex64>>>,
}

/// Reads `path`, or standard input when `path` is `-`.
pub fn read_source(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

pub fn parse_input(text: &str) -> Result<MatrixInput, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid matrix JSON: {e}")))
}

fn field_matrix(name: &str, n: usize, rows: &[Vec<Complex64>]) -> Result<ComplexMatrix, CliError> {
    if rows.len() != n {
        return Err(CliError::Parse(format!(
            "field `{name}`: expected {n} rows, found {}",
            rows.len()
        )));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::Parse(format!(
            "field `{name}`: row {i} has {} entries, expected {n}",
            r.len()
        )));
    }
    ComplexMatrix::from_rows(rows.to_vec()).map_err(|e| CliError::Parse(format!("field `{name}`: {e}")))
}

fn hermitian_field(name: &str, n: usize, rows: &[Vec<Complex64>]) -> Result<HermitianMatrix, CliError> {
    let m = field_matrix(name, n, rows)?;
    HermitianMatrix::new(m).map_err(|e| match e {
        MatError::NotHermitian { .. } => CliError::Validation(format!("field `{name}`: {e}")),
        other => CliError::Parse(format!("field `{name}`: {other}")),
    })
}

impl MatrixInput {
    fn check_n(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("field `n`: must be at least 1".into()));
        }
        Ok(())
    }

    pub fn x_matrix(&self) -> Result<ComplexMatrix, CliError> {
        self.check_n()?;
        field_matrix("X", self.n, &self.x)
    }

    /// Builds and validates the block matrix with the given PSD tolerance.
    pub fn block(&self, psd_tol: f64) -> Result<BlockPsd, CliError> {
        self.check_n()?;
        let missing = |f: &str| CliError::Parse(format!("missing field `{f}`"));
        let a = hermitian_field("A", self.n, self.a.as_deref().ok_or_else(|| missing("A"))?)?;
        let b = hermitian_field("B", self.n, self.b.as_deref().ok_or_else(|| missing("B"))?)?;
        let x = self.x_matrix()?;
        BlockPsd::with_tolerance(a, x, b, psd_tol).map_err(|e| match e {
            MatError::NotPositiveSemidefinite { .. } => CliError::Validation(e.to_string()),
            MatError::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Parse(other.to_string()),
        })
    }
}
