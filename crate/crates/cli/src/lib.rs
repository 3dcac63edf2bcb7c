//! Argument parsing and dispatch for the `fanocalc` binary.
//!
//! Everything goes through [`run`], which writes data to `out`, diagnostics
//! to `err`, and returns the process exit status: 0 on success, 1 when a
//! verification finds mismatches, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fanocalc::catalog::report::{render, render_summary};
use fanocalc::catalog::schema::BasketEntryJson;
use fanocalc::catalog::verify::verify_incremental;
use fanocalc::geometry::flags;
use fanocalc::orbifold::euler_classical;
use fanocalc::projection::type1_nodes_for;
use fanocalc::series::format_rational;
use fanocalc::{
    compute_basket_ci, euler_orbifold_ci, euler_topological, jacobian_moduli_oracle, moduli, primary_route,
    validate_family, Basket, CascadeResolver, Catalog, EquationModel, FamilyKey, FamilyRecord, Field, Filter,
    ProjectionKind, ProjectionStep, ReportFormat, ResultsStore, VerifyOptions,
};

#[derive(Parser, Debug)]
#[command(name = "fanocalc", version, about = "Invariants of quasismooth Fano 3-folds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hodge numbers, Euler number, basket and Hodge diamond.
    Hodge(FamilyArgs),
    /// Basket of terminal quotient singularities.
    Basket(FamilyArgs),
    /// Hilbert series of the anticanonical ring.
    Hilb(HilbArgs),
    /// Euler number, optionally with the orbifold Euler number.
    Euler(EulerArgs),
    /// Node counts of Type I projections.
    Nodes(NodesArgs),
    /// Projection cascade down to a base family.
    Cascade(FamilyArgs),
    /// Deformation count h^1(T_X) from the elephant invariant.
    Moduli(FamilyArgs),
    /// Filter catalogue rows.
    Query(QueryArgs),
    /// Compare computed invariants with the printed ones.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

/// A family either from the catalogue or given by weights and degrees.
#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Ambient weights, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    weights: Option<Vec<u32>>,
    /// Degrees of a complete intersection.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "pfaffian")]
    degrees: Option<Vec<u32>>,
    /// Degrees of the five Pfaffians of a codimension-3 model.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pfaffian: Option<Vec<u32>>,
    /// Fano index of an ad hoc family.
    #[arg(long, default_value_t = 1)]
    index: u32,
    /// Catalogue row.
    #[arg(long, conflicts_with_all = ["weights", "degrees", "pfaffian"])]
    grdb: Option<u32>,
    /// Family label when several rows share an identifier.
    #[arg(long, requires = "grdb")]
    family: Option<String>,
    /// Catalogue file; the shipped catalogue by default.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct HilbArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Number of coefficients.
    #[arg(long, default_value_t = 20)]
    truncate: usize,
}

#[derive(Args, Debug)]
struct EulerArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Also print the orbifold Euler number and basket correction.
    #[arg(long)]
    orbifold: bool,
}

#[derive(Args, Debug)]
struct NodesArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Centre r,a of the projection for an ad hoc family.
    #[arg(long, value_delimiter = ',')]
    centre: Option<Vec<u32>>,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    grdb: Option<u32>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    codim: Option<u32>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    weights: Option<Vec<u32>>,
    /// Rows with an equation of this degree.
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    flag: Option<String>,
    /// Rows listing a projection of this type (I, II1, IV).
    #[arg(long, value_parser = parse_projection)]
    projection: Option<ProjectionKind>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Fields to check, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "h21,e,nodes,basket")]
    fields: Vec<String>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write the full report here and print only the summary.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Reuse and update the results file next to the catalogue.
    #[arg(long, requires = "catalog")]
    persist: bool,
}

fn parse_projection(s: &str) -> std::result::Result<ProjectionKind, String> {
    match s {
        "I" => Ok(ProjectionKind::I),
        "II1" => Ok(ProjectionKind::II1),
        "IV" => Ok(ProjectionKind::IV),
        _ => Err(format!("unknown projection type {s:?}")),
    }
}

/// Parses `args` (program name first) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let text = match cmd {
        Command::Hodge(a) => hodge(&a)?,
        Command::Basket(a) => basket(&a)?,
        Command::Hilb(a) => hilb(&a)?,
        Command::Euler(a) => euler(&a)?,
        Command::Nodes(a) => nodes(&a)?,
        Command::Cascade(a) => cascade(&a)?,
        Command::Moduli(a) => moduli_cmd(&a)?,
        Command::Query(a) => query(&a)?,
        Command::Verify(a) => return verify(&a, out, err),
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn load(path: Option<&Path>) -> Result<Catalog> {
    let catalog = match path {
        Some(p) => Catalog::load_path(p).with_context(|| format!("loading {}", p.display()))?,
        None => Catalog::shipped(),
    };
    Ok(catalog)
}

struct Family {
    record: FamilyRecord,
    catalog: Catalog,
}

impl Family {
    fn from_args(a: &FamilyArgs) -> Result<Self> {
        if let Some(grdb) = a.grdb {
            let catalog = load(a.catalog.as_deref())?;
            let key = match &a.family {
                Some(f) => FamilyKey::with_family(grdb, f.clone()),
                None => {
                    let rows = catalog.by_grdb(grdb);
                    match rows.as_slice() {
                        [] => bail!("no catalogue row {grdb}"),
                        [r] => r.key.clone(),
                        many => {
                            let names: Vec<String> = many.iter().map(|r| r.key.to_string()).collect();
                            bail!(
                                "row {grdb} has several families: {}; pass --family",
                                names.join(", ")
                            )
                        }
                    }
                }
            };
            let record = catalog
                .get(&key)
                .cloned()
                .ok_or_else(|| anyhow!("no catalogue row {key}"))?;
            return Ok(Family { record, catalog });
        }
        let weights = a
            .weights
            .clone()
            .ok_or_else(|| anyhow!("give either --grdb or --weights with --degrees or --pfaffian"))?;
        let mut record = match (&a.degrees, &a.pfaffian) {
            (Some(d), None) => FamilyRecord::complete_intersection(0, weights, d.clone())?,
            (None, Some(p)) => {
                let ds: [u32; 5] = p
                    .clone()
                    .try_into()
                    .map_err(|_| anyhow!("--pfaffian takes exactly five degrees"))?;
                FamilyRecord::pfaffian(0, weights, ds)?
            }
            _ => bail!("--weights needs --degrees or --pfaffian"),
        };
        record.index = a.index;
        let report = validate_family(&record);
        if !report.is_ok() {
            bail!("invalid family: {}", report.violations.join("; "));
        }
        Ok(Family {
            record,
            catalog: Catalog::from_records([])?,
        })
    }

    fn is_catalogued(&self) -> bool {
        self.catalog.get(&self.record.key).is_some()
    }
}

fn basket_json(b: &Basket) -> Value {
    let entries: Vec<BasketEntryJson> = b
        .iter()
        .map(|(q, count)| BasketEntryJson {
            r: q.index(),
            w: q.weights(),
            count,
        })
        .collect();
    serde_json::to_value(entries).expect("basket entries serialize")
}

fn key_json(k: &FamilyKey) -> Value {
    serde_json::to_value(k).expect("keys serialize")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn no_csv(f: Format) -> Result<()> {
    if f == Format::Csv {
        bail!("csv output is only available for query and verify");
    }
    Ok(())
}

fn hodge(a: &FamilyArgs) -> Result<String> {
    no_csv(a.format)?;
    let fam = Family::from_args(a)?;
    let r = &fam.record;
    let resolver = CascadeResolver::new(&fam.catalog);
    let route = primary_route(r, &resolver)?;
    let diamond = fanocalc::hodge_diamond(r.h11, route.h21);
    let basket = r.resolved_basket().ok();
    if a.format == Format::Json {
        return Ok(pretty(&json!({
            "family": r.describe(),
            "h11": r.h11,
            "h21": route.h21,
            "e": route.e,
            "method": route.method,
            "basket": basket.as_ref().map(basket_json),
        })));
    }
    let mut s = format!("{}\n", r.describe());
    s += &format!("h11={}\nh21={}\ne={}\n", r.h11, route.h21, route.e);
    s += &format!(
        "basket: {}\n",
        basket.map_or_else(|| "unknown".to_string(), |b| b.to_string())
    );
    s += &format!("{diamond}\n");
    Ok(s)
}

fn basket(a: &FamilyArgs) -> Result<String> {
    no_csv(a.format)?;
    let fam = Family::from_args(a)?;
    let b = fam.record.resolved_basket()?;
    if a.format == Format::Json {
        return Ok(pretty(&json!({
            "basket": basket_json(&b),
            "points": b.len(),
            "correction": format_rational(&b.orbifold_correction()),
        })));
    }
    let mut s = format!("{b}\n");
    for (q, n) in b.iter() {
        s += &format!("{n} × {q}\n");
    }
    Ok(s)
}

fn hilb(a: &HilbArgs) -> Result<String> {
    no_csv(a.family.format)?;
    let fam = Family::from_args(&a.family)?;
    let hs = fam.record.hilbert_series(a.truncate)?;
    if a.family.format == Format::Json {
        let coeffs: Vec<String> = hs.coefficients().iter().map(format_rational).collect();
        return Ok(pretty(&json!({ "order": a.truncate, "coefficients": coeffs })));
    }
    Ok(format!("{hs}\n"))
}

fn euler(a: &EulerArgs) -> Result<String> {
    no_csv(a.family.format)?;
    let fam = Family::from_args(&a.family)?;
    let r = &fam.record;
    let mut fields: Vec<(&str, Value)> = Vec::new();
    if a.orbifold {
        let EquationModel::CompleteIntersection { degrees } = &r.model else {
            bail!("--orbifold needs a complete intersection");
        };
        if r.ambient.weights().iter().all(|&w| w == 1) {
            let e = euler_classical(&r.ambient, degrees)?;
            fields.push(("e_orb", json!(e.to_string())));
            fields.push(("basket", json!("{}")));
            fields.push(("e", json!(e)));
        } else {
            let e_orb = euler_orbifold_ci(&r.ambient, degrees);
            let b = compute_basket_ci(&r.ambient, degrees)?;
            let e = euler_topological(&e_orb, &b)?;
            fields.push(("e_orb", json!(format_rational(&e_orb))));
            fields.push(("basket", json!(b.to_string())));
            fields.push(("correction", json!(format_rational(&b.orbifold_correction()))));
            fields.push(("e", json!(e)));
        }
    } else {
        let resolver = CascadeResolver::new(&fam.catalog);
        let route = primary_route(r, &resolver)?;
        fields.push(("e", json!(route.e)));
        fields.push(("method", json!(route.method)));
    }
    if a.family.format == Format::Json {
        let map: serde_json::Map<String, Value> =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        return Ok(pretty(&Value::Object(map)));
    }
    Ok(fields
        .into_iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}\n"),
            other => format!("{k}={other}\n"),
        })
        .collect())
}

fn nodes(a: &NodesArgs) -> Result<String> {
    no_csv(a.family.format)?;
    let fam = Family::from_args(&a.family)?;
    let r = &fam.record;
    let steps: Vec<ProjectionStep> = match &a.centre {
        Some(c) if c.len() != 2 => bail!("--centre takes r,a"),
        Some(c) => vec![ProjectionStep {
            kind: ProjectionKind::I,
            r: c[0],
            a: c[1],
            nodes: 1,
            target: 0,
        }],
        None if fam.is_catalogued() => r
            .projections
            .iter()
            .filter(|s| s.kind == ProjectionKind::I)
            .cloned()
            .collect(),
        None => bail!("give --centre r,a for an ad hoc family"),
    };
    if steps.is_empty() {
        bail!("row {} lists no Type I projection", r.key);
    }
    let mut rows = Vec::new();
    for step in &steps {
        step.check()?;
        let n = type1_nodes_for(r, step)?;
        rows.push((step, n));
    }
    if a.family.format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(s, n)| {
                let mut o = json!({ "r": s.r, "a": s.a, "nodes": n });
                if a.centre.is_none() {
                    o["target"] = json!(s.target);
                    o["printed"] = json!(s.nodes);
                }
                o
            })
            .collect();
        return Ok(pretty(&Value::Array(v)));
    }
    let mut s = String::new();
    for (step, n) in rows {
        let centre = step.centre()?;
        if a.centre.is_some() {
            s += &format!("{centre}: nodes={n}\n");
        } else {
            s += &format!("{centre} → {}: nodes={n} printed={}\n", step.target, step.nodes);
        }
    }
    Ok(s)
}

fn arrow(path: &[FamilyKey]) -> String {
    path.iter().map(ToString::to_string).collect::<Vec<_>>().join("→")
}

fn cascade(a: &FamilyArgs) -> Result<String> {
    no_csv(a.format)?;
    if a.grdb.is_none() {
        bail!("cascade needs --grdb");
    }
    let fam = Family::from_args(a)?;
    let res = CascadeResolver::new(&fam.catalog).resolve(&fam.record.key)?;
    if a.format == Format::Json {
        let paths: Vec<Value> = res
            .paths
            .iter()
            .map(|p| {
                json!({
                    "path": p.path.iter().map(key_json).collect::<Vec<_>>(),
                    "nodes": p.nodes,
                    "base": p.base_kind.to_string(),
                    "e": p.e,
                })
            })
            .collect();
        return Ok(pretty(&json!({
            "key": key_json(&res.key),
            "path": res.path.iter().map(key_json).collect::<Vec<_>>(),
            "base": res.base_kind.to_string(),
            "e": res.e,
            "h21": res.h21,
            "consistent": res.consistent(),
            "paths": paths,
        })));
    }
    let mut s = format!(
        "{}\ne={}\nh21={}\nbase={}\n",
        arrow(&res.path),
        res.e,
        res.h21,
        res.base_kind
    );
    if res.paths.len() > 1 {
        s += &format!("paths={}\n", res.paths.len());
        for p in &res.paths {
            let ns: Vec<String> = p.nodes.iter().map(u64::to_string).collect();
            s += &format!("  {} nodes {} e={}\n", arrow(&p.path), ns.join(","), p.e);
        }
    }
    if !res.consistent() {
        s += &format!("paths disagree: e ∈ {:?}\n", res.distinct_euler_numbers());
    }
    Ok(s)
}

fn moduli_cmd(a: &FamilyArgs) -> Result<String> {
    no_csv(a.format)?;
    let fam = Family::from_args(a)?;
    let r = &fam.record;
    let resolver = CascadeResolver::new(&fam.catalog);
    let h21 = match primary_route(r, &resolver) {
        Ok(route) => route.h21,
        Err(e) if r.has_flag(flags::H21_DECLARED) => r
            .expected
            .as_ref()
            .and_then(|x| x.h21)
            .ok_or_else(|| anyhow!("{e}"))?,
        Err(e) => return Err(e.into()),
    };
    let basket = r.resolved_basket()?;
    let m = moduli(r, h21, &basket)?;
    let oracle = match &r.model {
        EquationModel::CompleteIntersection { degrees } if degrees.len() == 1 => {
            Some(jacobian_moduli_oracle(r.ambient.weights(), degrees[0])?)
        }
        _ => None,
    };
    let printed = r.expected.as_ref().and_then(|x| x.h1t);
    if a.format == Format::Json {
        return Ok(pretty(&json!({
            "h21": h21,
            "alpha": m.alpha,
            "h0_elephant": m.h0_elephant,
            "elephant": m.elephant_exists,
            "h1t": m.h1_tangent,
            "jacobian": oracle,
            "printed": printed,
            "assumptions": m.assumptions,
        })));
    }
    let mut s = format!(
        "h21={h21}\nalpha={}\nh0_elephant={}\nh1t={}\n",
        m.alpha, m.h0_elephant, m.h1_tangent
    );
    if let Some(j) = oracle {
        s += &format!("jacobian={j}\n");
    }
    if let Some(p) = printed {
        s += &format!("printed={p}\n");
    }
    let asm: Vec<String> = m.assumptions.iter().map(ToString::to_string).collect();
    s += &format!("assumptions: {}\n", asm.join(", "));
    Ok(s)
}

fn query(a: &QueryArgs) -> Result<String> {
    let catalog = load(a.catalog.as_deref())?;
    let mut f = Filter::new();
    if let Some(g) = a.grdb {
        f = f.grdb(g);
    }
    if let Some(fam) = &a.family {
        f = f.family(fam.clone());
    }
    if let Some(c) = a.codim {
        f = f.codim(c);
    }
    if let Some(w) = &a.weights {
        f = f.weights(w.clone());
    }
    if let Some(d) = a.degree {
        f = f.degree(d);
    }
    if let Some(fl) = &a.flag {
        f = f.flag(fl.clone());
    }
    if let Some(p) = a.projection {
        f = f.projection(p);
    }
    let rows = catalog.query(&f);
    let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    match a.format {
        Format::Json => {
            for r in rows {
                s += &serde_json::to_string(r)?;
                s.push('\n');
            }
        }
        Format::Csv => {
            s += "grdb,family,codim,weights,degrees\n";
            for r in rows {
                s += &format!(
                    "{},{},{},{},{}\n",
                    r.key.grdb,
                    r.key.family.as_deref().unwrap_or(""),
                    r.codim,
                    join(r.ambient.weights()),
                    join(r.model.degrees())
                );
            }
        }
        Format::Text => {
            for r in rows {
                s += &format!("{}\t{}\n", r.key, r.describe());
            }
        }
    }
    Ok(s)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let catalog = load(a.catalog.as_deref())?;
    for w in catalog.warnings() {
        writeln!(err, "warning: {w}")?;
    }
    let fields = a
        .fields
        .iter()
        .map(|f| f.parse::<Field>())
        .collect::<fanocalc::Result<Vec<_>>>()?;
    let options = VerifyOptions::fields(&fields).with_parallelism(a.jobs);
    let report = if a.persist {
        let path = ResultsStore::sibling_path(a.catalog.as_deref().expect("clap requires --catalog"));
        let previous = ResultsStore::load(&path)?;
        let (report, store) = verify_incremental(&catalog, &options, Some(&previous));
        store.save(&path)?;
        report
    } else {
        verify_incremental(&catalog, &options, None).0
    };
    match &a.report {
        Some(path) => {
            fs::write(path, render(&report, a.format.into()))
                .with_context(|| format!("writing {}", path.display()))?;
            out.write_all(render_summary(&report).as_bytes())?;
        }
        None if a.format == Format::Text => out.write_all(render_summary(&report).as_bytes())?,
        None => out.write_all(render(&report, a.format.into()).as_bytes())?,
    }
    Ok(report.exit_code())
}
