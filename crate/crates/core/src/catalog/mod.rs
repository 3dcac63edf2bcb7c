//! The family catalogue: loading, export and queries.

pub mod report;
pub mod results;
pub mod schema;
pub mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{validate_family, FamilyKey, FamilyRecord};
use crate::projection::ProjectionKind;

pub use report::{ReportFormat, Summary};
pub use results::ResultsStore;
pub use verify::{
    primary_route, verify_all, Field, ReportEntry, Route, Status, VerificationReport, VerifyOptions,
};

const SHIPPED: &str = include_str!("../../../../data/fano.jsonl");

/// Where a catalogue came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    /// SHA-256 of the source bytes, hex encoded. Catalogues built in memory
    /// digest their canonical serialization.
    pub digest: String,
    /// Seconds since the Unix epoch at load time.
    pub loaded_at: u64,
}

/// Validated catalogue rows keyed by identifier.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    rows: BTreeMap<FamilyKey, FamilyRecord>,
    provenance: Provenance,
    warnings: Vec<String>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Catalog {
    /// Builds a catalogue from records, validating each one.
    pub fn from_records<I: IntoIterator<Item = FamilyRecord>>(records: I) -> Result<Self> {
        let mut c = Catalog::default();
        for (i, r) in records.into_iter().enumerate() {
            c.insert(r, i + 1)?;
        }
        c.collect_warnings();
        c.provenance.digest = hex::encode(Sha256::digest(c.to_jsonl().as_bytes()));
        Ok(c)
    }

    fn insert(&mut self, r: FamilyRecord, line: usize) -> Result<()> {
        let report = validate_family(&r);
        if !report.is_ok() {
            return Err(Error::Parse {
                line,
                message: format!("row {}: {}", r.key, report.violations.join("; ")),
            });
        }
        if self.rows.contains_key(&r.key) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate row {}", r.key),
            });
        }
        self.rows.insert(r.key.clone(), r);
        Ok(())
    }

    fn collect_warnings(&mut self) {
        self.warnings = self
            .rows
            .values()
            .flat_map(|r| {
                r.projections
                    .iter()
                    .filter(|s| !self.rows.contains_key(&s.target_key()))
                    .map(move |s| format!("row {} projects to missing row {}", r.key, s.target))
            })
            .collect();
    }

    /// Parses JSON Lines; blank lines are ignored. Fails on the first bad row.
    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut bytes = Vec::new();
        source
            .read_to_end(&mut bytes)
            .map_err(|e| Error::Catalog(format!("read failed: {e}")))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Catalog(format!("not UTF-8: {e}")))?;
        let mut c = Catalog::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: FamilyRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            c.insert(record, i + 1)?;
        }
        c.collect_warnings();
        c.provenance = Provenance {
            digest: hex::encode(Sha256::digest(&bytes)),
            loaded_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        Ok(c)
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path)
            .map_err(|e| Error::Catalog(format!("cannot open {}: {e}", path.display())))?;
        Self::load(io::BufReader::new(file))
    }

    /// The catalogue bundled with the crate.
    pub fn shipped() -> Self {
        Self::load(SHIPPED.as_bytes()).expect("bundled catalogue is valid")
    }

    pub fn shipped_source() -> &'static str {
        SHIPPED
    }

    pub fn get(&self, key: &FamilyKey) -> Option<&FamilyRecord> {
        self.rows.get(key)
    }

    /// All rows sharing a database identifier.
    pub fn by_grdb(&self, grdb: u32) -> Vec<&FamilyRecord> {
        self.rows.values().filter(|r| r.key.grdb == grdb).collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &FamilyKey> {
        self.rows.keys()
    }

    pub fn records(&self) -> impl Iterator<Item = &FamilyRecord> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Dangling projection targets.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Canonical serialization: one compact JSON object per line, rows in key order.
    pub fn export<W: Write>(&self, mut out: W) -> io::Result<()> {
        for r in self.rows.values() {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.export(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn query(&self, filter: &Filter) -> Vec<&FamilyRecord> {
        self.rows.values().filter(|r| filter.matches(r)).collect()
    }
}

pub fn load_catalog<R: Read>(source: R) -> Result<Catalog> {
    Catalog::load(source)
}

pub fn query<'c>(c: &'c Catalog, filter: &Filter) -> Vec<&'c FamilyRecord> {
    c.query(filter)
}

/// Conjunction of optional row predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub grdb: Option<u32>,
    pub family: Option<String>,
    pub codim: Option<u32>,
    /// Exact (sorted) weight list.
    pub weights: Option<Vec<u32>>,
    /// Some equation has this degree.
    pub degree: Option<u32>,
    pub flag: Option<String>,
    pub projection: Option<ProjectionKind>,
}

impl Filter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn grdb(mut self, id: u32) -> Self {
        self.grdb = Some(id);
        self
    }

    pub fn family(mut self, family: impl Into<String>) -> Self {
        self.family = Some(family.into());
        self
    }

    pub fn codim(mut self, c: u32) -> Self {
        self.codim = Some(c);
        self
    }

    pub fn weights(mut self, mut ws: Vec<u32>) -> Self {
        ws.sort_unstable();
        self.weights = Some(ws);
        self
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn flag(mut self, f: impl Into<String>) -> Self {
        self.flag = Some(f.into());
        self
    }

    pub fn projection(mut self, kind: ProjectionKind) -> Self {
        self.projection = Some(kind);
        self
    }

    pub fn matches(&self, r: &FamilyRecord) -> bool {
        self.grdb.is_none_or(|g| r.key.grdb == g)
            && self
                .family
                .as_ref()
                .is_none_or(|f| r.key.family.as_ref() == Some(f))
            && self.codim.is_none_or(|c| r.codim == c)
            && self
                .weights
                .as_ref()
                .is_none_or(|w| r.ambient.weights() == w.as_slice())
            && self.degree.is_none_or(|d| r.model.degrees().contains(&d))
            && self.flag.as_ref().is_none_or(|f| r.has_flag(f))
            && self
                .projection
                .is_none_or(|k| r.projections.iter().any(|s| s.kind == k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_stream() {
        let c = Catalog::load(&b""[..]).unwrap();
        assert!(c.is_empty());
        assert_eq!(
            c.provenance().digest,
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn rejects_index_violation() {
        let line = r#"{"grdb":1,"codim":1,"weights":[1,1,1,1,1],"model":{"type":"ci","degrees":[3]}}"#;
        match Catalog::load(line.as_bytes()) {
            Err(Error::Parse { line: 1, message }) => assert!(message.contains("index identity")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        let line = r#"{"grdb":20521,"codim":1,"weights":[1,1,1,1,1],"model":{"type":"ci","degrees":[4]}}"#;
        let twice = format!("{line}\n\n{line}\n");
        assert!(matches!(
            Catalog::load(twice.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Catalog::load(&b"{\"grdb\":"[..]),
            Err(Error::Parse { line: 1, .. })
        ));
        let unknown =
            r#"{"grdb":1,"codim":1,"weights":[1,1,1,1,1],"model":{"type":"ci","degrees":[4]},"colour":1}"#;
        assert!(Catalog::load(unknown.as_bytes()).is_err());
    }

    #[test]
    fn dangling_targets_warn() {
        let line = r#"{"grdb":9,"codim":2,"weights":[1,1,1,1,1,2],"model":{"type":"ci","degrees":[3,3]},"projections":[{"type":"I","r":2,"a":1,"nodes":9,"target":20521}]}"#;
        let c = Catalog::load(line.as_bytes()).unwrap();
        assert_eq!(c.warnings().len(), 1);
    }
}
