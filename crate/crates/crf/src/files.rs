//! JSON document formats: canonical writing, the catalog file and the
//! assessment file.
//!
//! Canonical JSON is two-space indented, LF-terminated, with struct fields
//! in declaration order and maps in key order, so equal values always
//! serialize to equal bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crf_core::catalog::{validate_catalog, Catalog, ValidationReport};
use crf_core::scoring::{AssessmentInput, EnablerAssessment, ScoringError};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: invalid catalog: {report}")]
    InvalidCatalog { path: PathBuf, report: ValidationReport },
    #[error("{path}: {use_case}/{enabler}: {source}")]
    Assessment {
        path: PathBuf,
        use_case: String,
        enabler: String,
        #[source]
        source: ScoringError,
    },
}

impl FileError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        FileError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory values always serialize");
    text.push('\n');
    text
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path).map_err(|e| FileError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| FileError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a sibling temp file and a rename, so readers never see
/// a half-written document.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), FileError> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, contents).map_err(|e| FileError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| FileError::io(path, e))
}

pub fn export_catalog(catalog: &Catalog) -> String {
    to_canonical_json(catalog)
}

/// Reads and validates a catalog document.
pub fn load_catalog(path: &Path) -> Result<Catalog, FileError> {
    let catalog: Catalog = read_json(path)?;
    let report = validate_catalog(&catalog);
    if !report.is_valid() {
        return Err(FileError::InvalidCatalog {
            path: path.to_path_buf(),
            report,
        });
    }
    Ok(catalog)
}

/// Assessments keyed by use case id.
pub type AssessmentFile = BTreeMap<String, Vec<EnablerAssessment>>;

pub fn parse_assessments(path: &Path, text: &str) -> Result<AssessmentFile, FileError> {
    let raw: BTreeMap<String, Vec<AssessmentInput>> =
        serde_json::from_str(text).map_err(|source| FileError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
    let mut out = AssessmentFile::new();
    for (use_case, inputs) in raw {
        let mut list = Vec::with_capacity(inputs.len());
        for input in inputs {
            let enabler = input.enabler_id.clone();
            list.push(EnablerAssessment::try_from(input).map_err(|source| FileError::Assessment {
                path: path.to_path_buf(),
                use_case: use_case.clone(),
                enabler,
                source,
            })?);
        }
        out.insert(use_case, list);
    }
    Ok(out)
}

pub fn load_assessments(path: &Path) -> Result<AssessmentFile, FileError> {
    let text = fs::read_to_string(path).map_err(|e| FileError::io(path, e))?;
    parse_assessments(path, &text)
}
