//! Matrix input files.
//!
//! Two formats are accepted:
//!
//! * JSON: `{"n": 2, "kind": "symmetric", "entries": [1, 0, 0, 2]}` with the
//!   entries in row-major order; `kind` is optional and defaults to
//!   `general`;
//! * a plain square table of whitespace-separated numbers, one row per
//!   line. Blank lines and lines starting with `#` are ignored.

use crate::error::CliError;
use sha2::{Digest, Sha256};
use std::path::Path;
use zcone::{Matrix, SkewMatrix, SymmetricMatrix};

/// Declared kinds are checked at this relative tolerance.
pub const KIND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    General,
    Symmetric,
    Skew,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::General => "general",
            MatrixKind::Symmetric => "symmetric",
            MatrixKind::Skew => "skew",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "general" => Ok(MatrixKind::General),
            "symmetric" => Ok(MatrixKind::Symmetric),
            "skew" => Ok(MatrixKind::Skew),
            other => Err(CliError::Parse(format!("unknown matrix kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub matrix: Matrix,
    /// Hex SHA-256 of the file contents.
    pub digest: String,
}

impl MatrixFile {
    pub fn n(&self) -> usize {
        self.matrix.dim()
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Parse(format!("{} is not UTF-8", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let digest = hex::encode(Sha256::digest(text.as_bytes()));
        let (kind, matrix) = if text.trim_start().starts_with('{') {
            parse_json(text)?
        } else {
            (MatrixKind::General, parse_table(text)?)
        };
        check_kind(kind, &matrix)?;
        Ok(Self {
            kind,
            matrix,
            digest,
        })
    }

    /// The matrix as symmetric, whatever its declared kind, provided its
    /// asymmetry is within `tol`.
    pub fn symmetric(&self, tol: f64) -> Result<SymmetricMatrix, CliError> {
        Ok(SymmetricMatrix::try_from_matrix(self.matrix.clone(), tol)?)
    }
}

fn check_kind(kind: MatrixKind, m: &Matrix) -> Result<(), CliError> {
    let r = match kind {
        MatrixKind::General => return Ok(()),
        MatrixKind::Symmetric => SymmetricMatrix::try_from_matrix(m.clone(), KIND_TOL).map(|_| ()),
        MatrixKind::Skew => SkewMatrix::try_from_matrix(m.clone(), KIND_TOL).map(|_| ()),
    };
    r.map_err(|e| CliError::Parse(format!("declared kind `{}` does not hold: {e}", kind.as_str())))
}

fn parse_json(text: &str) -> Result<(MatrixKind, Matrix), CliError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Parse("expected a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| CliError::Parse("missing or invalid `n`".into()))? as usize;
    let kind = match obj.get("kind") {
        None | Some(serde_json::Value::Null) => MatrixKind::General,
        Some(k) => MatrixKind::parse(
            k.as_str()
                .ok_or_else(|| CliError::Parse("`kind` must be a string".into()))?,
        )?,
    };
    let entries = obj
        .get("entries")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| CliError::Parse("missing or invalid `entries`".into()))?;
    if entries.len() != n * n {
        return Err(CliError::Parse(format!(
            "expected {} entries for n = {n}, found {}",
            n * n,
            entries.len()
        )));
    }
    let data = entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            e.as_f64()
                .ok_or_else(|| CliError::Parse(format!("entry {k} is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((kind, to_matrix(n, data)?))
}

fn parse_table(text: &str) -> Result<Matrix, CliError> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| CliError::Parse(format!("row {}: bad number `{tok}`", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Parse("empty matrix".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::Parse(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            r.len()
        )));
    }
    to_matrix(n, rows.concat())
}

fn to_matrix(n: usize, data: Vec<f64>) -> Result<Matrix, CliError> {
    if n == 0 {
        return Err(CliError::Parse("matrix dimension must be positive".into()));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Parse("entries must be finite".into()));
    }
    Matrix::from_row_major(n, data).map_err(|e| CliError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_table_agree() {
        let a = MatrixFile::parse(r#"{"n": 2, "kind": "symmetric", "entries": [1, 2, 2, 3]}"#).unwrap();
        let b = MatrixFile::parse("# comment\n1 2\n\n2 3\n").unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.kind, MatrixKind::Symmetric);
        assert_eq!(b.kind, MatrixKind::General);
        assert_ne!(a.digest, b.digest);
        assert_eq!(a.digest.len(), 64);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "",
            "1 2\n3",
            "1 x\n3 4",
            r#"{"n": 2, "entries": [1, 2, 3]}"#,
            r#"{"n": 2, "kind": "symmetric", "entries": [1, 2, 3, 4]}"#,
            r#"{"n": 2, "kind": "skew", "entries": [0, 1, 1, 0]}"#,
            r#"{"n": 2, "kind": "banded", "entries": [1, 0, 0, 1]}"#,
            r#"{"n": 0, "entries": []}"#,
            "{not json",
        ] {
            assert!(matches!(MatrixFile::parse(bad), Err(CliError::Parse(_))), "{bad}");
        }
        assert!(MatrixFile::parse(r#"{"n": 2, "kind": "skew", "entries": [0, 1, -1, 0]}"#).is_ok());
    }
}
