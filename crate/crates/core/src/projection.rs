//! Gorenstein projections, conifold transitions and projection cascades.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::basket::{compute_basket_ci, normalize_quotient, Basket, QuotientSingularity};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::geometry::{EquationModel, FamilyKey, FamilyRecord};
use crate::hodge::h21_hypersurface;
use crate::orbifold::{euler_classical, euler_orbifold_ci, euler_topological};
use crate::series::PowerSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProjectionKind {
    I,
    II1,
    IV,
}

impl fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionKind::I => "I",
            ProjectionKind::II1 => "II1",
            ProjectionKind::IV => "IV",
        })
    }
}

/// Projection from a centre `1/r(1, a, r-a)` to the family `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectionStep {
    #[serde(rename = "type")]
    pub kind: ProjectionKind,
    pub r: u32,
    pub a: u32,
    pub nodes: u64,
    pub target: u32,
}

impl ProjectionStep {
    pub fn check(&self) -> Result<()> {
        if self.a < 1 || self.a >= self.r || self.a.gcd(&self.r) != 1 {
            return Err(Error::Model(format!(
                "centre 1/{}(1,{},{}) is not terminal",
                self.r,
                self.a,
                self.r as i64 - self.a as i64
            )));
        }
        if self.nodes < 1 {
            return Err(Error::Model("a projection step needs at least one node".into()));
        }
        Ok(())
    }

    pub fn target_key(&self) -> FamilyKey {
        FamilyKey::grdb(self.target)
    }

    pub fn centre(&self) -> Result<QuotientSingularity> {
        QuotientSingularity::terminal(self.r, self.a)
    }
}

/// Nodes of the degenerate smoothing for `X_{d1,d2} ⊂ P(1, a, r-a, d1-r, d2-r, r)`.
pub fn nodes_type1_codim2(d1: u32, d2: u32, r: u32, a: u32) -> Result<u64> {
    if a == 0 || a >= r {
        return Err(Error::ShapeMismatch(format!("a = {a} outside 1..{r}")));
    }
    let num = d1 as u64 * d2 as u64;
    let den = a as u64 * (r - a) as u64;
    if !num.is_multiple_of(den) {
        return Err(Error::ShapeMismatch(format!(
            "{d1}·{d2}/({a}·{}) is not an integer",
            r - a
        )));
    }
    Ok(num / den)
}

/// Node count of a Type I step of a codimension 2 complete intersection, after
/// checking that the ambient space has the expected shape.
pub fn type1_nodes_for(record: &FamilyRecord, step: &ProjectionStep) -> Result<u64> {
    let EquationModel::CompleteIntersection { degrees } = &record.model else {
        return Err(Error::Unsupported(
            "Type I node count needs a complete intersection".into(),
        ));
    };
    if step.kind != ProjectionKind::I || degrees.len() != 2 {
        return Err(Error::Unsupported(
            "only codimension 2 Type I steps are recomputed".into(),
        ));
    }
    let (d1, d2, r, a) = (degrees[0], degrees[1], step.r, step.a);
    if d1 <= r || d2 <= r {
        return Err(Error::ShapeMismatch(format!(
            "degrees {d1},{d2} do not exceed r = {r}"
        )));
    }
    let mut rest = record.ambient.weights().to_vec();
    for w in [r, a, r - a, d1 - r, d2 - r, 1] {
        let pos = rest.iter().position(|&x| x == w).ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "{} is not of the form P(1,{a},{},{},{},{r})",
                record.ambient,
                r - a,
                d1 - r,
                d2 - r
            ))
        })?;
        rest.swap_remove(pos);
    }
    nodes_type1_codim2(d1, d2, r, a)
}

pub fn conifold_euler_update(e_target: i64, nodes: u64) -> i64 {
    e_target + 2 * nodes as i64 - 2
}

pub fn conifold_h21_update(h21_target: i64, nodes: u64) -> Result<i64> {
    let h = h21_target - nodes as i64 + 1;
    if h < 0 {
        return Err(Error::Inconsistent(format!(
            "h21 {h21_target} with {nodes} nodes gives negative h21 {h}"
        )));
    }
    Ok(h)
}

/// `t^r / ((1-t)(1-t^a)(1-t^{r-a})(1-t^r))`, the difference between the Hilbert
/// series of a Type I unprojection and its target.
pub fn unprojection_hilbert_term(r: u32, a: u32, order: usize) -> PowerSeries {
    let mut s = PowerSeries::from_terms(&[(r as usize, 1)], order);
    for w in [1, a, r - a, r] {
        s.div_one_minus_power(w as usize);
    }
    s
}

/// Basket of the Type I unprojection of a family with basket `target` at `1/r(1,a,r-a)`:
/// the centre replaces the points `1/a(1,-r,r)` and `1/(r-a)(1,r,-r)` of the target.
pub fn unprojection_basket(target: &Basket, r: u32, a: u32) -> Result<Basket> {
    let mut b = target.clone();
    for s in [a, r - a] {
        if s < 2 {
            continue;
        }
        let q = normalize_quotient(s, [1, -(r as i64), r as i64])?;
        if !b.remove_one(&q) {
            return Err(Error::Inconsistent(format!(
                "target basket {target} lacks the point {q} absorbed by the centre 1/{r}(1,{a},{})",
                r - a
            )));
        }
    }
    b.add(QuotientSingularity::terminal(r, a)?, 1);
    Ok(b)
}

/// How the bottom of a cascade was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// Codimension 1, Hodge numbers from the Milnor algebra.
    Hypersurface,
    /// Smooth complete intersection in ordinary projective space.
    ClassicalCi,
    /// Weighted complete intersection, Euler number from its basket.
    OrbifoldCi,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::Hypersurface => "hypersurface",
            BaseKind::ClassicalCi => "classical_ci",
            BaseKind::OrbifoldCi => "orbifold_ci",
        })
    }
}

/// One chain of projections from a family to a base case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadePath {
    pub path: Vec<FamilyKey>,
    /// Node counts of the steps, in path order.
    pub nodes: Vec<u64>,
    pub base_kind: BaseKind,
    pub base_e: i64,
    pub base_h21: i64,
    /// Euler number of the first family on the path.
    pub e: i64,
}

impl CascadePath {
    /// `h^{2,1}` folded step by step from the base. Only meaningful when every
    /// family on the path has the same `h^{1,1}`; otherwise use the Euler number.
    pub fn fold_h21(&self) -> Result<i64> {
        self.nodes
            .iter()
            .rev()
            .try_fold(self.base_h21, |h, &n| conifold_h21_update(h, n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadeResult {
    pub key: FamilyKey,
    /// The first path found; all paths are in `paths`.
    pub path: Vec<FamilyKey>,
    pub base_kind: BaseKind,
    pub e: i64,
    pub h21: i64,
    pub paths: Vec<CascadePath>,
}

impl CascadeResult {
    /// True when every path gives the same Euler number.
    pub fn consistent(&self) -> bool {
        self.paths.iter().all(|p| p.e == self.e)
    }

    pub fn distinct_euler_numbers(&self) -> Vec<i64> {
        let mut es: Vec<i64> = self.paths.iter().map(|p| p.e).collect();
        es.sort_unstable();
        es.dedup();
        es
    }
}

type Cell = OnceLock<std::result::Result<Arc<Vec<CascadePath>>, Error>>;

/// Resolves cascades over a catalogue, caching every row at most once.
/// Safe to share between threads.
pub struct CascadeResolver<'a> {
    catalog: &'a Catalog,
    cache: HashMap<FamilyKey, Cell>,
    cyclic: HashSet<FamilyKey>,
}

impl<'a> CascadeResolver<'a> {
    pub fn new(catalog: &'a Catalog) -> Self {
        let cache = catalog.keys().map(|k| (k.clone(), OnceLock::new())).collect();
        CascadeResolver {
            catalog,
            cache,
            cyclic: find_cycles(catalog),
        }
    }

    pub fn catalog(&self) -> &'a Catalog {
        self.catalog
    }

    pub fn resolve(&self, key: &FamilyKey) -> Result<CascadeResult> {
        let record = self
            .catalog
            .get(key)
            .ok_or_else(|| Error::Catalog(format!("no row {key}")))?;
        let paths = self.paths(key)?;
        let first = paths.first().expect("paths are never empty").clone();
        let twice = 2 + 2 * record.h11 - first.e;
        if twice % 2 != 0 {
            return Err(Error::Inconsistent(format!(
                "odd Euler number {} for {key}",
                first.e
            )));
        }
        Ok(CascadeResult {
            key: key.clone(),
            path: first.path.clone(),
            base_kind: first.base_kind,
            e: first.e,
            h21: twice / 2,
            paths: paths.as_ref().clone(),
        })
    }

    fn paths(&self, key: &FamilyKey) -> Result<Arc<Vec<CascadePath>>> {
        if self.cyclic.contains(key) {
            return Err(Error::Cycle(key.to_string()));
        }
        let cell = self
            .cache
            .get(key)
            .ok_or_else(|| Error::Catalog(format!("missing projection target {key}")))?;
        cell.get_or_init(|| self.compute(key).map(Arc::new)).clone()
    }

    fn compute(&self, key: &FamilyKey) -> Result<Vec<CascadePath>> {
        let record = self.catalog.get(key).expect("cache keys come from the catalogue");
        if record.projections.is_empty() {
            return base_case(record).map(|p| vec![p]);
        }
        let mut out = Vec::new();
        for step in &record.projections {
            for sub in self.paths(&step.target_key())?.iter() {
                let mut path = vec![key.clone()];
                path.extend(sub.path.iter().cloned());
                let mut nodes = vec![step.nodes];
                nodes.extend(sub.nodes.iter().copied());
                out.push(CascadePath {
                    path,
                    nodes,
                    base_kind: sub.base_kind,
                    base_e: sub.base_e,
                    base_h21: sub.base_h21,
                    e: conifold_euler_update(sub.e, step.nodes),
                });
            }
        }
        Ok(out)
    }
}

fn base_case(record: &FamilyRecord) -> Result<CascadePath> {
    let key = record.key.clone();
    let EquationModel::CompleteIntersection { degrees } = &record.model else {
        return Err(Error::Unsupported(format!(
            "{key} has no projections and no complete intersection model"
        )));
    };
    let ws = record.ambient.weights();
    let (base_kind, e) = if degrees.len() == 1 {
        let h21 = h21_hypersurface(ws, degrees[0])?;
        (BaseKind::Hypersurface, 2 + 2 * record.h11 - 2 * h21)
    } else if ws.iter().all(|&w| w == 1) {
        (BaseKind::ClassicalCi, euler_classical(&record.ambient, degrees)?)
    } else {
        let basket = compute_basket_ci(&record.ambient, degrees)?;
        (
            BaseKind::OrbifoldCi,
            euler_topological(&euler_orbifold_ci(&record.ambient, degrees), &basket)?,
        )
    };
    let twice = 2 + 2 * record.h11 - e;
    if twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("odd Euler number {e} for {key}")));
    }
    Ok(CascadePath {
        path: vec![key],
        nodes: Vec::new(),
        base_kind,
        base_e: e,
        base_h21: twice / 2,
        e,
    })
}

/// Rows lying on or leading into a cycle of projection targets.
fn find_cycles(catalog: &Catalog) -> HashSet<FamilyKey> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done(bool),
    }
    fn visit(key: &FamilyKey, catalog: &Catalog, marks: &mut HashMap<FamilyKey, Mark>) -> bool {
        match marks.get(key) {
            Some(Mark::Active) => return true,
            Some(Mark::Done(c)) => return *c,
            None => {}
        }
        marks.insert(key.clone(), Mark::Active);
        let mut cyclic = false;
        if let Some(r) = catalog.get(key) {
            for step in &r.projections {
                cyclic |= visit(&step.target_key(), catalog, marks);
            }
        }
        marks.insert(key.clone(), Mark::Done(cyclic));
        cyclic
    }
    let mut marks = HashMap::new();
    for k in catalog.keys() {
        visit(k, catalog, &mut marks);
    }
    marks
        .into_iter()
        .filter_map(|(k, m)| (m == Mark::Done(true)).then_some(k))
        .collect()
}

/// Resolves one row against a catalogue.
pub fn resolve_cascade(key: &FamilyKey, catalog: &Catalog) -> Result<CascadeResult> {
    CascadeResolver::new(catalog).resolve(key)
}
