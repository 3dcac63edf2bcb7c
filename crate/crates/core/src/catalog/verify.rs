//! Recomputes every derivable invariant of every row and compares it with the
//! printed value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::Summary;
use super::results::{row_digest, ResultsStore, RowResult};
use super::Catalog;
use crate::basket::compute_basket_ci;
use crate::error::{Error, Result};
use crate::geometry::{euler_from_hodge, flags, EquationModel, FamilyKey, FamilyRecord};
use crate::hodge::h21_hypersurface;
use crate::moduli::{jacobian_moduli_oracle, moduli};
use crate::orbifold::{euler_classical, euler_orbifold_ci, euler_topological};
use crate::projection::{type1_nodes_for, unprojection_basket, CascadeResolver, ProjectionKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    H21,
    E,
    H1t,
    Nodes,
    Basket,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::H21, Field::E, Field::H1t, Field::Nodes, Field::Basket];

    pub fn as_str(&self) -> &'static str {
        match self {
            Field::H21 => "h21",
            Field::E => "e",
            Field::H1t => "h1t",
            Field::Nodes => "nodes",
            Field::Basket => "basket",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Model(format!("unknown field {s:?}")))
    }
}

/// Outcome of one comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Match,
    Mismatch,
    /// Not compared because the row carries this flag.
    Skipped(String),
    Unsupported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Match => f.write_str("match"),
            Status::Mismatch => f.write_str("mismatch"),
            Status::Skipped(flag) => write!(f, "skipped({flag})"),
            Status::Unsupported => f.write_str("unsupported"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match" => Ok(Status::Match),
            "mismatch" => Ok(Status::Mismatch),
            "unsupported" => Ok(Status::Unsupported),
            _ => s
                .strip_prefix("skipped(")
                .and_then(|rest| rest.strip_suffix(')'))
                .map(|flag| Status::Skipped(flag.to_string()))
                .ok_or_else(|| Error::Model(format!("unknown status {s:?}"))),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Status {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub grdb: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub field: Field,
    /// Which computation produced `computed`.
    pub method: String,
    pub computed: Option<String>,
    pub printed: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportEntry {
    pub fn key(&self) -> FamilyKey {
        FamilyKey {
            grdb: self.grdb,
            family: self.family.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub fields: BTreeSet<Field>,
    /// Worker threads; 0 uses the global pool, 1 runs sequentially.
    pub parallelism: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fields: Field::ALL.into_iter().collect(),
            parallelism: 0,
        }
    }
}

impl VerifyOptions {
    pub fn fields(fields: &[Field]) -> Self {
        VerifyOptions {
            fields: fields.iter().copied().collect(),
            ..Self::default()
        }
    }

    pub fn with_parallelism(mut self, n: usize) -> Self {
        self.parallelism = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// Source digest of the verified catalogue; see [`super::Provenance`].
    pub catalog_digest: String,
    pub rows: usize,
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn summary(&self) -> Summary {
        Summary::of(self)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Mismatch)
    }

    /// 0 when nothing outside flagged rows disagrees, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.mismatches().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn entries_for<'a>(&'a self, key: &'a FamilyKey) -> impl Iterator<Item = &'a ReportEntry> {
        self.entries
            .iter()
            .filter(move |e| e.grdb == key.grdb && e.family == key.family)
    }
}

pub fn verify_all(catalog: &Catalog, options: &VerifyOptions) -> VerificationReport {
    verify_incremental(catalog, options, None).0
}

/// Like [`verify_all`], reusing rows of `previous` whose input digest is unchanged.
/// Returns the fresh results alongside the report.
pub fn verify_incremental(
    catalog: &Catalog,
    options: &VerifyOptions,
    previous: Option<&ResultsStore>,
) -> (VerificationReport, ResultsStore) {
    let resolver = CascadeResolver::new(catalog);
    let records: Vec<&FamilyRecord> = catalog.records().collect();
    let work = |r: &&FamilyRecord| -> RowResult {
        let digest = row_digest(catalog, &r.key);
        if let Some(hit) = previous
            .and_then(|p| p.get(&r.key))
            .filter(|h| h.digest == digest)
        {
            return hit.clone();
        }
        RowResult {
            grdb: r.key.grdb,
            family: r.key.family.clone(),
            digest,
            entries: verify_row(r, &resolver),
        }
    };
    let rows: Vec<RowResult> = match options.parallelism {
        1 => records.iter().map(work).collect(),
        0 => records.par_iter().map(work).collect(),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(|| records.par_iter().map(work).collect()))
            .unwrap_or_else(|_| records.iter().map(work).collect()),
    };
    let entries = rows
        .iter()
        .flat_map(|row| {
            row.entries
                .iter()
                .filter(|e| options.fields.contains(&e.field))
                .cloned()
        })
        .collect();
    let report = VerificationReport {
        catalog_digest: catalog.provenance().digest.clone(),
        rows: catalog.len(),
        entries,
    };
    (report, ResultsStore::from_rows(rows))
}

/// How a row's `h^{2,1}` and Euler number were obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub method: &'static str,
    pub h21: i64,
    pub e: i64,
    pub note: Option<String>,
}

fn classify(err: &Error) -> Status {
    match err {
        Error::Unsupported(_) => Status::Unsupported,
        _ => Status::Mismatch,
    }
}

fn h21_from_euler(h11: i64, e: i64) -> Result<i64> {
    let twice = 2 + 2 * h11 - e;
    if twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("odd Euler number {e}")));
    }
    Ok(twice / 2)
}

/// Euler number from the orbifold Chern class and the computed basket.
fn blache(record: &FamilyRecord) -> Result<(&'static str, i64)> {
    let EquationModel::CompleteIntersection { degrees } = &record.model else {
        return Err(Error::Unsupported(
            "Blache's formula needs a complete intersection".into(),
        ));
    };
    if record.ambient.weights().iter().all(|&w| w == 1) {
        return Ok(("chern", euler_classical(&record.ambient, degrees)?));
    }
    let basket = compute_basket_ci(&record.ambient, degrees)?;
    Ok((
        "blache",
        euler_topological(&euler_orbifold_ci(&record.ambient, degrees), &basket)?,
    ))
}

/// Hodge number and Euler number of a row by its preferred method:
/// Griffiths for hypersurfaces, the cascade when projections are listed,
/// otherwise the orbifold Euler number of a complete intersection.
pub fn primary_route(record: &FamilyRecord, resolver: &CascadeResolver) -> Result<Route> {
    if let EquationModel::CompleteIntersection { degrees } = &record.model {
        if degrees.len() == 1 {
            let h21 = h21_hypersurface(record.ambient.weights(), degrees[0])?;
            return Ok(Route {
                method: "griffiths",
                h21,
                e: euler_from_hodge(record.h11, h21),
                note: None,
            });
        }
    }
    if !record.projections.is_empty() {
        let res = resolver.resolve(&record.key)?;
        if !res.consistent() {
            return Err(Error::Inconsistent(format!(
                "cascade paths disagree: e ∈ {:?}",
                res.distinct_euler_numbers()
            )));
        }
        let path: Vec<String> = res.path.iter().map(ToString::to_string).collect();
        return Ok(Route {
            method: "cascade",
            h21: res.h21,
            e: res.e,
            note: Some(format!(
                "{} path(s), {} to {} base",
                res.paths.len(),
                path.join("→"),
                res.base_kind
            )),
        });
    }
    let (method, e) = blache(record).map_err(|err| match err {
        Error::Unsupported(_) => Error::Unsupported("no computable route".into()),
        other => other,
    })?;
    Ok(Route {
        method,
        h21: h21_from_euler(record.h11, e)?,
        e,
        note: None,
    })
}

struct RowVerifier<'a> {
    record: &'a FamilyRecord,
    out: Vec<ReportEntry>,
}

impl RowVerifier<'_> {
    fn push(
        &mut self,
        field: Field,
        method: &str,
        computed: Result<String>,
        printed: Option<String>,
        skip: Option<&str>,
        note: Option<String>,
    ) {
        let (computed, status, note) = match computed {
            Ok(c) => {
                let status = match &printed {
                    None => Status::Unsupported,
                    Some(p) if *p == c => Status::Match,
                    Some(_) => Status::Mismatch,
                };
                let note = if printed.is_none() {
                    Some("nothing printed to compare with".to_string())
                } else {
                    note
                };
                (Some(c), status, note)
            }
            Err(e) => (None, classify(&e), Some(e.to_string())),
        };
        let status = match skip {
            Some(flag) => Status::Skipped(flag.to_string()),
            None => status,
        };
        self.out.push(ReportEntry {
            grdb: self.record.key.grdb,
            family: self.record.key.family.clone(),
            field,
            method: method.to_string(),
            computed,
            printed,
            status,
            note,
        });
    }
}

/// All entries for one row, every field.
pub(crate) fn verify_row(record: &FamilyRecord, resolver: &CascadeResolver) -> Vec<ReportEntry> {
    let printed = record.expected.clone().unwrap_or_default();
    let show = |v: Option<i64>| v.map(|x| x.to_string());
    let excluded = record
        .has_flag(flags::EXCLUDE_EULER_CHECK)
        .then_some(flags::EXCLUDE_EULER_CHECK);
    let declared = record.has_flag(flags::H21_DECLARED);
    let mut v = RowVerifier {
        record,
        out: Vec::new(),
    };

    let route = primary_route(record, resolver);
    let unsupported_skip = |r: &Result<Route>| match r {
        Err(Error::Unsupported(_)) if declared => Some(flags::H21_DECLARED),
        _ => excluded,
    };
    let skip = unsupported_skip(&route);
    match &route {
        Ok(rt) => {
            v.push(
                Field::H21,
                rt.method,
                Ok(rt.h21.to_string()),
                show(printed.h21),
                skip,
                rt.note.clone(),
            );
            v.push(
                Field::E,
                rt.method,
                Ok(rt.e.to_string()),
                show(printed.e),
                skip,
                rt.note.clone(),
            );
        }
        Err(err) => {
            v.push(
                Field::H21,
                "none",
                Err(err.clone()),
                show(printed.h21),
                skip,
                None,
            );
            v.push(Field::E, "none", Err(err.clone()), show(printed.e), skip, None);
        }
    }
    let primary_method = route.as_ref().map(|r| r.method).unwrap_or("none");
    if matches!(record.model, EquationModel::CompleteIntersection { .. })
        && !matches!(primary_method, "blache" | "chern")
    {
        match blache(record) {
            Ok((method, e)) => v.push(
                Field::E,
                method,
                Ok(e.to_string()),
                show(printed.e),
                excluded,
                None,
            ),
            Err(err) => v.push(Field::E, "blache", Err(err), show(printed.e), excluded, None),
        }
    }

    // deformation counts
    if let EquationModel::CompleteIntersection { degrees } = &record.model {
        if degrees.len() == 1 {
            let oracle = jacobian_moduli_oracle(record.ambient.weights(), degrees[0]);
            v.push(
                Field::H1t,
                "jacobian",
                oracle.map(|n| n.to_string()),
                show(printed.h1t),
                None,
                None,
            );
        }
    }
    let h21_input: Result<(i64, Option<String>)> = match (&route, excluded.is_some() || declared) {
        (Ok(rt), false) => Ok((rt.h21, None)),
        (_, true) => printed
            .h21
            .map(|h| (h, Some(format!("printed h21 = {h} used as input"))))
            .ok_or_else(|| Error::Unsupported("no h21 available".into())),
        (Err(e), false) => Err(e.clone()),
    };
    let formula = h21_input.and_then(|(h21, note)| {
        let basket = record.resolved_basket()?;
        let m = moduli(record, h21, &basket)?;
        let assumptions: Vec<String> = m.assumptions.iter().map(ToString::to_string).collect();
        let detail = format!("alpha = {}; {}", m.alpha, assumptions.join(", "));
        Ok((
            m.h1_tangent,
            Some(match note {
                Some(n) => format!("{detail}; {n}"),
                None => detail,
            }),
        ))
    });
    match formula {
        Ok((h1t, note)) => v.push(
            Field::H1t,
            "formula",
            Ok(h1t.to_string()),
            show(printed.h1t),
            None,
            note,
        ),
        Err(err) => v.push(Field::H1t, "formula", Err(err), show(printed.h1t), None, None),
    }

    // node counts of recomputable steps
    let steps: Vec<_> = record
        .projections
        .iter()
        .filter(|s| s.kind == ProjectionKind::I && record.codim == 2)
        .filter(|_| matches!(record.model, EquationModel::CompleteIntersection { .. }))
        .collect();
    if steps.is_empty() {
        let reason = if record.projections.is_empty() {
            "no projections"
        } else {
            "node counts of these steps are catalogue data"
        };
        v.push(
            Field::Nodes,
            "type1",
            Err(Error::Unsupported(reason.into())),
            None,
            None,
            None,
        );
    } else {
        let computed: Result<Vec<String>> = steps
            .iter()
            .map(|s| type1_nodes_for(record, s).map(|n| n.to_string()))
            .collect();
        let printed_nodes: Vec<String> = steps.iter().map(|s| s.nodes.to_string()).collect();
        v.push(
            Field::Nodes,
            "type1",
            computed.map(|c| c.join(",")),
            Some(printed_nodes.join(",")),
            None,
            None,
        );
    }

    verify_basket(&mut v, resolver, show(printed.e), excluded);
    v.out
}

fn verify_basket(
    v: &mut RowVerifier<'_>,
    resolver: &CascadeResolver,
    printed_e: Option<String>,
    excluded: Option<&str>,
) {
    let record = v.record;
    let basket = match record.resolved_basket() {
        Ok(b) => b,
        Err(err) => {
            v.push(Field::Basket, "none", Err(err), None, None, None);
            return;
        }
    };
    let catalog = resolver.catalog();
    let derived: Vec<(u32, Result<String>)> = record
        .projections
        .iter()
        .filter(|s| s.kind == ProjectionKind::I)
        .filter_map(|s| {
            let target = catalog.get(&s.target_key())?;
            let tb = target.resolved_basket().ok()?;
            Some((
                s.target,
                unprojection_basket(&tb, s.r, s.a).map(|b| b.to_string()),
            ))
        })
        .collect();
    let computed = basket.to_string();
    if let Some((target, first)) = derived.first() {
        let all_agree = derived.iter().all(|(_, d)| d == first);
        let reference = match (first, all_agree) {
            (Ok(b), true) => Ok(b.clone()),
            (Ok(_), false) => Err(Error::Inconsistent("centres give different baskets".into())),
            (Err(e), _) => Err(e.clone()),
        };
        let note = format!("{} centre(s), first from row {target}", derived.len());
        match reference {
            Ok(r) => v.push(
                Field::Basket,
                "unprojection",
                Ok(computed),
                Some(r),
                None,
                Some(note),
            ),
            Err(e) => v.push(Field::Basket, "unprojection", Err(e), None, None, Some(note)),
        }
        return;
    }
    match &record.model {
        EquationModel::CompleteIntersection { degrees } => {
            let check = euler_topological(&euler_orbifold_ci(&record.ambient, degrees), &basket);
            // the printed Euler number is the reference: Blache's formula must reproduce it
            let status_value = check.map(|e| e.to_string());
            let matches = status_value.as_ref().ok() == printed_e.as_ref();
            v.out.push(ReportEntry {
                grdb: record.key.grdb,
                family: record.key.family.clone(),
                field: Field::Basket,
                method: "blache".into(),
                computed: Some(computed),
                printed: None,
                status: match (excluded, &status_value, matches) {
                    (Some(f), _, _) => Status::Skipped(f.to_string()),
                    (None, Ok(_), true) => Status::Match,
                    _ => Status::Mismatch,
                },
                note: Some(match status_value {
                    Ok(e) => format!(
                        "basket gives e = {e}, printed {}",
                        printed_e.unwrap_or("-".into())
                    ),
                    Err(err) => err.to_string(),
                }),
            });
        }
        _ => v.push(Field::Basket, "declared", Ok(computed), None, None, None),
    }
}

/// Entry counts per field and status.
pub(crate) fn tally(report: &VerificationReport) -> BTreeMap<Field, [usize; 4]> {
    let mut m: BTreeMap<Field, [usize; 4]> = BTreeMap::new();
    for e in &report.entries {
        let slot = match e.status {
            Status::Match => 0,
            Status::Mismatch => 1,
            Status::Skipped(_) => 2,
            Status::Unsupported => 3,
        };
        m.entry(e.field).or_default()[slot] += 1;
    }
    m
}
