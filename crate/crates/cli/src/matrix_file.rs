//! JSON matrix files: `{"n": 2, "real": [[..], [..]], "imag": [[..], [..]]}`.
//! `imag` may be omitted for real matrices.

use std::fs;
use std::path::Path;

use parsum_core::{CMatrix, HermitianMatrix, PsdMatrix, ToleranceConfig, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let part = |f: fn(&C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        let imag: Vec<Vec<f64>> = part(|z| z.im);
        let has_imag = imag.iter().flatten().any(|v| *v != 0.0);
        Self {
            n,
            real: part(|z| z.re),
            imag: has_imag.then_some(imag),
        }
    }

    /// Checks the declared shape and assembles the complex matrix.
    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        let n = self.n;
        if n == 0 {
            return Err("n must be positive".into());
        }
        check_shape("real", &self.real, n)?;
        if let Some(im) = &self.imag {
            check_shape("imag", im, n)?;
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.real[i][j], im)
        }))
    }
}

fn check_shape(name: &str, rows: &[Vec<f64>], n: usize) -> Result<(), String> {
    if rows.len() != n {
        return Err(format!("shape mismatch: `{name}` has {} rows, expected {n}", rows.len()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(format!("shape mismatch: `{name}` row {i} has {} entries, expected {n}", r.len()));
    }
    Ok(())
}

fn read_file(path: &Path) -> CliResult<MatrixFile> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.into(),
        message: format!("parse error: {e}"),
    })
}

pub fn parse_hermitian(path: &Path, tol: &ToleranceConfig) -> CliResult<HermitianMatrix> {
    let m = read_file(path)?.to_matrix().map_err(|message| CliError::Parse { path: path.into(), message })?;
    HermitianMatrix::new(m, tol).map_err(|source| CliError::Invalid { path: path.into(), source })
}

pub fn parse_matrix(path: &Path, tol: &ToleranceConfig) -> CliResult<PsdMatrix> {
    let h = parse_hermitian(path, tol)?;
    PsdMatrix::new(h, tol).map_err(|source| CliError::Invalid { path: path.into(), source })
}

pub fn to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("finite matrices serialize")
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> CliResult<()> {
    fs::write(path, to_json(m) + "\n").map_err(|source| CliError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_matrix_omits_imag() {
        let m = CMatrix::identity(2, 2);
        assert_eq!(to_json(&m), r#"{"n":2,"real":[[1.0,0.0],[0.0,1.0]]}"#);
    }

    fn finite() -> impl Strategy<Value = f64> {
        any::<f64>().prop_filter("finite", |v| v.is_finite())
    }

    proptest! {
        // shortest round-trip formatting must reproduce every bit
        #[test]
        fn json_round_trip_is_exact(
            (n, re, im) in (1usize..=5).prop_flat_map(|n| {
                (Just(n), prop::collection::vec(finite(), n * n), prop::collection::vec(finite(), n * n))
            }),
        ) {
            let m = CMatrix::from_fn(n, n, |i, j| C64::new(re[i * n + j], im[i * n + j]));
            let back: MatrixFile = serde_json::from_str(&to_json(&m)).unwrap();
            let back = back.to_matrix().unwrap();
            for (a, b) in m.iter().zip(back.iter()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                // an all-zero imaginary part is omitted, which drops a negative zero sign
                prop_assert_eq!(a.im, b.im);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let f = MatrixFile { n: 2, real: vec![vec![1.0, 0.0]], imag: None };
        assert!(f.to_matrix().unwrap_err().contains("rows"));
        let f = MatrixFile { n: 2, real: vec![vec![1.0, 0.0], vec![0.0]], imag: None };
        assert!(f.to_matrix().unwrap_err().contains("row 1"));
        let f = MatrixFile { n: 1, real: vec![vec![1.0]], imag: Some(vec![]) };
        assert!(f.to_matrix().unwrap_err().contains("imag"));
        let f = MatrixFile { n: 0, real: vec![], imag: None };
        assert!(f.to_matrix().is_err());
    }
}
