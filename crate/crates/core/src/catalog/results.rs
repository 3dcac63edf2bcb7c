//! Persisted per-row verification results, keyed by an input digest so that
//! unchanged rows need not be recomputed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::verify::ReportEntry;
use super::Catalog;
use crate::error::{Error, Result};
use crate::geometry::FamilyKey;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub grdb: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub digest: String,
    pub entries: Vec<ReportEntry>,
}

impl RowResult {
    pub fn key(&self) -> FamilyKey {
        FamilyKey {
            grdb: self.grdb,
            family: self.family.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultsStore {
    rows: BTreeMap<FamilyKey, RowResult>,
}

/// SHA-256 over the engine version and the canonical lines of the row and
/// every row its cascade can reach.
pub fn row_digest(catalog: &Catalog, key: &FamilyKey) -> String {
    let mut seen = BTreeSet::new();
    let mut stack = vec![key.clone()];
    while let Some(k) = stack.pop() {
        if let Some(r) = catalog.get(&k) {
            if seen.insert(k) {
                stack.extend(r.projections.iter().map(|s| s.target_key()));
            }
        }
    }
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    for k in &seen {
        let line =
            serde_json::to_string(catalog.get(k).expect("visited rows exist")).expect("rows serialize");
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

impl ResultsStore {
    pub fn from_rows<I: IntoIterator<Item = RowResult>>(rows: I) -> Self {
        ResultsStore {
            rows: rows.into_iter().map(|r| (r.key(), r)).collect(),
        }
    }

    pub fn get(&self, key: &FamilyKey) -> Option<&RowResult> {
        self.rows.get(key)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `<dir>/<stem>.results.jsonl` next to a catalogue file.
    pub fn sibling_path(catalog_path: &Path) -> PathBuf {
        let stem = catalog_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "catalog".into());
        catalog_path.with_file_name(format!("{stem}.results.jsonl"))
    }

    /// Loads a results file; a missing file is an empty store.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(e) => return Err(Error::Catalog(format!("cannot read {}: {e}", path.display()))),
        };
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            rows.push(serde_json::from_str(line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?);
        }
        Ok(Self::from_rows(rows))
    }

    /// Writes atomically via a temporary file in the same directory.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io_err = |e: std::io::Error| Error::Catalog(format!("cannot write {}: {e}", path.display()));
        let tmp = path.with_extension("jsonl.tmp");
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp).map_err(io_err)?);
            for r in self.rows.values() {
                serde_json::to_writer(&mut f, r).map_err(|e| Error::Catalog(e.to_string()))?;
                f.write_all(b"\n").map_err(io_err)?;
            }
            f.flush().map_err(io_err)?;
        }
        fs::rename(&tmp, path).map_err(io_err)
    }
}
