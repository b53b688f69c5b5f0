//! JSON matrix files: `{rows, cols, data: [[[re, im], ...], ...], shape?, vec?}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tensorpres::{ComplexMatrix, SuperOp, TensorShape, C64};

use crate::CliError;

/// Vectorization convention accepted for superoperator files.
pub const VEC_COLUMN: &str = "column";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re, im]` pairs.
    pub data: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vec: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let data = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            data,
            shape: None,
            vec: None,
        }
    }

    pub fn with_shape(mut self, shape: &TensorShape) -> Self {
        self.shape = Some(shape.dims().to_vec());
        self
    }

    pub fn from_superop(phi: &SuperOp) -> Self {
        let mut f = MatrixFile::from_matrix(phi.matrix()).with_shape(phi.shape());
        f.vec = Some(VEC_COLUMN.to_string());
        f
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.data.len() != self.rows {
            return Err(CliError::Malformed(format!(
                "{} rows declared, {} present",
                self.rows,
                self.data.len()
            )));
        }
        let mut flat = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(CliError::Malformed(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.cols
                )));
            }
            flat.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        if let Some(shape) = &self.shape {
            let product: usize = shape.iter().product();
            if product != self.rows || self.rows != self.cols {
                return Err(CliError::Malformed(format!(
                    "shape {shape:?} does not match a {}x{} matrix",
                    self.rows, self.cols
                )));
            }
        }
        ComplexMatrix::new(self.rows, self.cols, flat).map_err(|e| CliError::Malformed(e.to_string()))
    }

    /// Reads a superoperator, taking its factor shape from `shape_arg` or
    /// the file. The file must declare column-stacking.
    pub fn to_superop(&self, shape_arg: Option<&[usize]>) -> Result<SuperOp, CliError> {
        match self.vec.as_deref() {
            Some(VEC_COLUMN) => {}
            Some(other) => {
                return Err(CliError::Malformed(format!(
                    "unsupported vec convention '{other}', expected '{VEC_COLUMN}'"
                )))
            }
            None => return Err(CliError::Malformed("superoperator file lacks \"vec\": \"column\"".into())),
        }
        let dims = match (shape_arg, &self.shape) {
            (Some(a), Some(f)) if a != f.as_slice() => {
                return Err(CliError::Malformed(format!("--shape {a:?} disagrees with file shape {f:?}")))
            }
            (Some(a), _) => a.to_vec(),
            (None, Some(f)) => f.clone(),
            (None, None) => return Err(CliError::Malformed("no --shape given and none in the file".into())),
        };
        let shape = TensorShape::new(dims).map_err(|e| CliError::Malformed(e.to_string()))?;
        let n2 = shape.total() * shape.total();
        if self.rows != n2 || self.cols != n2 {
            return Err(CliError::Malformed(format!(
                "shape {shape} needs a {n2}x{n2} superoperator, file is {}x{}",
                self.rows, self.cols
            )));
        }
        // the file's own shape describes factors of N, not of N^2
        let stripped = MatrixFile {
            shape: None,
            ..self.clone()
        };
        SuperOp::new(shape, stripped.to_matrix()?).map_err(|e| CliError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serializes")
    }
}

/// Loads a matrix file and the SHA-256 of its bytes.
pub fn load(path: &Path) -> Result<(MatrixFile, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let file: MatrixFile =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    Ok((file, sha256_hex(&bytes)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
