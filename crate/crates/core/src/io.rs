//! File formats: matroid JSON, compact catalog strings, matrix text files,
//! generic JSON artifacts and verification reports.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matrix::{MatrixError, RationalMatrix};
use crate::matroid::{Matroid, MatroidData, MatroidError};
use crate::set::{binomial, k_subsets};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Matroid { path: PathBuf, source: MatroidError },
    #[error("{path}: {source}")]
    Matrix { path: PathBuf, source: MatrixError },
    #[error("{path}: {source}")]
    Catalog { path: PathBuf, source: CatalogError },
}

/// A rejected line of a compact catalog. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {witness}")]
    Validation { line: usize, witness: String },
}

impl CatalogError {
    pub fn line(&self) -> usize {
        match self {
            CatalogError::Parse { line, .. } | CatalogError::Validation { line, .. } => *line,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// Pretty JSON with a trailing newline; map keys come out in a fixed order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| IoError::Json { path: path.to_path_buf(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value))
}

/// Parses and validates `{"n": .., "bases": [[..], ..]}`.
pub fn matroid_from_json(text: &str) -> Result<Matroid, MatroidOrJson> {
    let data: MatroidData = serde_json::from_str(text)?;
    Ok(Matroid::from_data(&data)?)
}

#[derive(Debug, Error)]
pub enum MatroidOrJson {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

pub fn matroid_to_json(m: &Matroid) -> String {
    to_json(&m.to_data())
}

pub fn read_matroid(path: &Path) -> Result<Matroid, IoError> {
    let text = read_text(path)?;
    matroid_from_json(&text).map_err(|e| match e {
        MatroidOrJson::Json(source) => IoError::Json { path: path.to_path_buf(), source },
        MatroidOrJson::Matroid(source) => IoError::Matroid { path: path.to_path_buf(), source },
    })
}

pub fn write_matroid(path: &Path, m: &Matroid) -> Result<(), IoError> {
    write_text(path, &matroid_to_json(m))
}

pub fn read_matrix(path: &Path) -> Result<RationalMatrix, IoError> {
    let text = read_text(path)?;
    RationalMatrix::parse(&text).map_err(|source| IoError::Matrix { path: path.to_path_buf(), source })
}

/// The compact string of `m`: one `'0'`/`'1'` per `r`-subset of the ground
/// set in lexicographic order, `'1'` marking bases.
pub fn to_compact(m: &Matroid) -> String {
    k_subsets(m.n(), m.rank()).map(|s| if m.is_basis(s) { '1' } else { '0' }).collect()
}

/// Decodes and validates one compact string for rank `r` on `n` elements.
pub fn from_compact(s: &str, n: usize, r: usize, line: usize) -> Result<Matroid, CatalogError> {
    if r > n {
        return Err(CatalogError::Parse { line, msg: format!("rank {r} exceeds ground set size {n}") });
    }
    let expected = binomial(n as u64, r as u64) as usize;
    if s.len() != expected {
        return Err(CatalogError::Parse {
            line,
            msg: format!("expected {expected} characters for n={n}, r={r}, found {}", s.len()),
        });
    }
    let mut bases = Vec::new();
    for (k, (c, set)) in s.chars().zip(k_subsets(n, r)).enumerate() {
        match c {
            '1' => bases.push(set),
            '0' => {}
            other => {
                return Err(CatalogError::Parse { line, msg: format!("character {} is {other:?}, expected 0 or 1", k + 1) })
            }
        }
    }
    Matroid::validate_bases(n, bases).map_err(|e| CatalogError::Validation { line, witness: e.to_string() })
}

/// Outcome of reading a catalog: accepted matroids with their line numbers
/// and every rejected line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    pub matroids: Vec<(usize, Matroid)>,
    pub rejected: Vec<CatalogError>,
}

/// Reads a catalog text. Blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str, n: usize, r: usize) -> Catalog {
    let mut out = Catalog::default();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match from_compact(body, n, r, k + 1) {
            Ok(m) => out.matroids.push((k + 1, m)),
            Err(e) => out.rejected.push(e),
        }
    }
    out
}

/// Strict ingestion: every non-blank line must encode a matroid.
pub fn ingest_catalog(path: &Path, n: usize, r: usize) -> Result<Vec<Matroid>, IoError> {
    let catalog = parse_catalog(&read_text(path)?, n, r);
    if let Some(e) = catalog.rejected.into_iter().next() {
        return Err(IoError::Catalog { path: path.to_path_buf(), source: e });
    }
    Ok(catalog.matroids.into_iter().map(|(_, m)| m).collect())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    crate::audit::hex(&Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One check of a report. Failing checks carry a witness that can be
/// replayed against the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub parameters: serde_json::Value,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub result: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    /// Wall-clock time; only recorded on request so reports stay
    /// byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the input bytes, or of the built-in's canonical JSON.
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(input: &[u8]) -> Self {
        VerificationReport {
            tool: "matroid-exchange".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input_digest: sha256_hex(input),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}
