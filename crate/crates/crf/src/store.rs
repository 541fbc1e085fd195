//! Project directory persistence.
//!
//! Layout:
//!
//! ```text
//! <dir>/catalog.json
//! <dir>/project.json
//! <dir>/snapshots/<YYYYMMDDTHHMMSSZ>-<label>.json
//! <dir>/.crf.lock           (present while a writer holds the directory)
//! ```
//!
//! Readers never lock. Writers go through [`Store::writer`], which creates
//! the lock file exclusively and removes it on drop.

use std::fs::{self, OpenOptions};
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use crf_core::catalog::Catalog;
use crf_core::diff::{diff_projects, DiffError, DiffReport};
use crf_core::project::{Project, ProjectError};
use serde::{Deserialize, Serialize};

use crate::files::{self, FileError};

pub const PROJECT_FILE: &str = "project.json";
pub const CATALOG_FILE: &str = "catalog.json";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const LOCK_FILE: &str = ".crf.lock";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("validation failed: {}", join(.0))]
    Validation(Vec<ProjectError>),
    #[error("project directory is locked by another writer ({0})")]
    Locked(PathBuf),
    #[error("already exists: {0}")]
    Exists(PathBuf),
    #[error(transparent)]
    Incomparable(#[from] DiffError),
    #[error(transparent)]
    File(#[from] FileError),
}

fn join(errors: &[ProjectError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl StoreError {
    fn io(path: &Path, e: io::Error) -> Self {
        StoreError::File(FileError::io(path, e))
    }

    /// True for errors caused by the environment rather than the data.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            StoreError::Locked(_)
                | StoreError::Exists(_)
                | StoreError::File(FileError::Io { .. } | FileError::Parse { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub id: String,
    pub label: String,
    /// RFC 3339, UTC, second precision.
    pub timestamp: String,
    pub project: Project,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub id: String,
    pub label: String,
    pub timestamp: String,
}

/// Lowercase letters, digits, `-` and `_`; anything else becomes `-`.
pub fn slug(label: &str) -> String {
    let s: String = label
        .trim()
        .chars()
        .map(|c| {
            let c = c.to_ascii_lowercase();
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect();
    if s.is_empty() {
        "snapshot".into()
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    /// Creates a project directory. Fails if a project already lives there.
    pub fn init(dir: impl Into<PathBuf>, catalog: &Catalog, project: &Project) -> Result<Store, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| StoreError::io(&dir, e))?;
        let store = Store { dir };
        if store.project_path().exists() {
            return Err(StoreError::Exists(store.project_path()));
        }
        let errors = project.validate(catalog);
        if !errors.is_empty() {
            return Err(StoreError::Validation(errors));
        }
        let writer = store.writer()?;
        files::write_atomic(&store.catalog_path(), &files::export_catalog(catalog))?;
        writer.save_project(project, catalog)?;
        drop(writer);
        Ok(store)
    }

    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let store = Store { dir: dir.into() };
        if !store.project_path().is_file() {
            return Err(StoreError::NotFound(format!(
                "no project in {}",
                store.dir.display()
            )));
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn project_path(&self) -> PathBuf {
        self.dir.join(PROJECT_FILE)
    }

    pub fn catalog_path(&self) -> PathBuf {
        self.dir.join(CATALOG_FILE)
    }

    fn snapshot_dir(&self) -> PathBuf {
        self.dir.join(SNAPSHOT_DIR)
    }

    pub fn catalog(&self) -> Result<Catalog, StoreError> {
        Ok(files::load_catalog(&self.catalog_path())?)
    }

    pub fn load(&self) -> Result<Project, StoreError> {
        Ok(files::read_json(&self.project_path())?)
    }

    pub fn load_project(&self, id: &str) -> Result<Project, StoreError> {
        let project = self.load()?;
        if project.id != id {
            return Err(StoreError::NotFound(format!("project '{id}'")));
        }
        Ok(project)
    }

    /// Takes the single-writer lock.
    pub fn writer(&self) -> Result<Writer<'_>, StoreError> {
        let path = self.dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Writer { store: self, lock: path })
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => Err(StoreError::Locked(path)),
            Err(e) => Err(StoreError::io(&path, e)),
        }
    }

    pub fn list_snapshots(&self) -> Result<Vec<SnapshotMeta>, StoreError> {
        let dir = self.snapshot_dir();
        if !dir.exists() {
            return Ok(Vec::new());
        }
        let mut names = Vec::new();
        for entry in fs::read_dir(&dir).map_err(|e| StoreError::io(&dir, e))? {
            let entry = entry.map_err(|e| StoreError::io(&dir, e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(stem) = name.strip_suffix(".json") {
                names.push(stem.to_string());
            }
        }
        names.sort();
        names
            .into_iter()
            .map(|id| {
                let s = self.load_snapshot(&id)?;
                Ok(SnapshotMeta {
                    id: s.id,
                    label: s.label,
                    timestamp: s.timestamp,
                })
            })
            .collect()
    }

    pub fn load_snapshot(&self, id: &str) -> Result<Snapshot, StoreError> {
        if id.contains(['/', '\\']) || id.starts_with('.') {
            return Err(StoreError::NotFound(format!("snapshot '{id}'")));
        }
        let path = self.snapshot_dir().join(format!("{id}.json"));
        if !path.is_file() {
            return Err(StoreError::NotFound(format!("snapshot '{id}'")));
        }
        Ok(files::read_json(&path)?)
    }

    pub fn diff_snapshots(&self, a: &str, b: &str, catalog: &Catalog) -> Result<DiffReport, StoreError> {
        let (a, b) = (self.load_snapshot(a)?, self.load_snapshot(b)?);
        Ok(diff_projects(&a.project, &b.project, catalog)?)
    }
}

/// Holder of the project lock. Dropping it releases the lock.
#[derive(Debug)]
pub struct Writer<'a> {
    store: &'a Store,
    lock: PathBuf,
}

impl Writer<'_> {
    pub fn save_project(&self, project: &Project, catalog: &Catalog) -> Result<(), StoreError> {
        let errors = project.validate(catalog);
        if !errors.is_empty() {
            return Err(StoreError::Validation(errors));
        }
        files::write_atomic(&self.store.project_path(), &files::to_canonical_json(project))?;
        Ok(())
    }

    pub fn snapshot(&self, project: &Project, label: &str) -> Result<Snapshot, StoreError> {
        self.snapshot_at(project, label, Utc::now())
    }

    /// Writes a snapshot file. Existing snapshots are never overwritten.
    pub fn snapshot_at(&self, project: &Project, label: &str, at: DateTime<Utc>) -> Result<Snapshot, StoreError> {
        let label = slug(label);
        let id = format!("{}-{label}", at.format("%Y%m%dT%H%M%SZ"));
        let snapshot = Snapshot {
            id: id.clone(),
            label,
            timestamp: at.to_rfc3339_opts(SecondsFormat::Secs, true),
            project: project.clone(),
        };
        let dir = self.store.snapshot_dir();
        fs::create_dir_all(&dir).map_err(|e| StoreError::io(&dir, e))?;
        let path = dir.join(format!("{id}.json"));
        let mut f = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => return Err(StoreError::Exists(path)),
            Err(e) => return Err(StoreError::io(&path, e)),
        };
        f.write_all(files::to_canonical_json(&snapshot).as_bytes())
            .map_err(|e| StoreError::io(&path, e))?;
        Ok(snapshot)
    }
}

impl Drop for Writer<'_> {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}
