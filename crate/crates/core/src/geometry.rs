//! Families of Fano 3-folds `X ⊂ P(a_0, ..., a_n)` and their Hilbert series.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::basket::{compute_basket_ci, Basket};
use crate::error::{Error, Result};
use crate::projection::ProjectionStep;
use crate::series::{expand_product_quotient, PowerSeries};

/// Weighted projective space, weights sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedSpace {
    weights: Vec<u32>,
}

impl WeightedSpace {
    pub fn new(mut weights: Vec<u32>) -> Result<Self> {
        if weights.len() < 4 {
            return Err(Error::Model(format!(
                "ambient space needs at least 4 weights, got {}",
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Model("weights must be positive".into()));
        }
        if weights.iter().fold(0u32, |g, w| g.gcd(w)) != 1 {
            return Err(Error::Model(format!(
                "weights {weights:?} are not well formed (gcd > 1)"
            )));
        }
        weights.sort_unstable();
        Ok(WeightedSpace { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn sum(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    /// Number of coordinates of weight 1.
    pub fn linear_coordinates(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        write!(f, "P({})", ws.join(","))
    }
}

/// How the family is cut out of its ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EquationModel {
    CompleteIntersection {
        degrees: Vec<u32>,
    },
    /// Maximal Pfaffians of a skew 5×5 matrix; degrees of the five Pfaffians.
    Pfaffian {
        degrees: [u32; 5],
    },
    /// No usable equations; invariants come from catalogue data only.
    External,
}

impl EquationModel {
    pub fn kind(&self) -> &'static str {
        match self {
            EquationModel::CompleteIntersection { .. } => "ci",
            EquationModel::Pfaffian { .. } => "pfaffian",
            EquationModel::External => "external",
        }
    }

    pub fn degrees(&self) -> &[u32] {
        match self {
            EquationModel::CompleteIntersection { degrees } => degrees,
            EquationModel::Pfaffian { degrees } => degrees,
            EquationModel::External => &[],
        }
    }
}

/// Identifies a catalogue row. Several unprojection families can share one
/// database identifier, hence the optional family label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyKey {
    pub grdb: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

impl FamilyKey {
    pub fn grdb(grdb: u32) -> Self {
        FamilyKey { grdb, family: None }
    }

    pub fn with_family(grdb: u32, family: impl Into<String>) -> Self {
        FamilyKey {
            grdb,
            family: Some(family.into()),
        }
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Some(fam) => write!(f, "{}/{fam}", self.grdb),
            None => write!(f, "{}", self.grdb),
        }
    }
}

/// Printed invariants of a family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h21: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1t: Option<i64>,
}

/// One catalogue row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::catalog::schema::RecordJson",
    into = "crate::catalog::schema::RecordJson"
)]
pub struct FamilyRecord {
    pub key: FamilyKey,
    pub codim: u32,
    pub ambient: WeightedSpace,
    pub model: EquationModel,
    pub index: u32,
    /// Declared basket; required for models the basket engine cannot analyse.
    pub basket: Option<Basket>,
    pub h11: i64,
    /// Declared elephant invariant, overriding the basket formula.
    pub alpha: Option<i64>,
    pub projections: Vec<ProjectionStep>,
    pub expected: Option<Expected>,
    pub flags: Vec<String>,
}

pub mod flags {
    /// `P_1 = 0`: no elephant; the moduli formula is applied formally.
    pub const NO_ELEPHANT: &str = "no_elephant";
    /// The projection Euler update disagrees with the printed row.
    pub const EXCLUDE_EULER_CHECK: &str = "exclude_euler_check";
    /// Basket inherited through the unprojection of a Type I centre.
    pub const BASKET_FROM_PROJECTION: &str = "basket_from_projection";
    /// `alpha` is printed data rather than a basket computation.
    pub const ALPHA_DECLARED: &str = "alpha_declared";
    /// `h21` can only be taken from printed data.
    pub const H21_DECLARED: &str = "h21_declared";
    /// `h^0(T_X) = 0` is declared by the catalogue for an external model.
    pub const H0_TANGENT_ZERO: &str = "h0_tangent_zero";
}

impl FamilyRecord {
    /// Bare record for a complete intersection of index 1 with no catalogue data.
    pub fn complete_intersection(grdb: u32, weights: Vec<u32>, degrees: Vec<u32>) -> Result<Self> {
        let ambient = WeightedSpace::new(weights)?;
        let codim = degrees.len() as u32;
        Ok(FamilyRecord {
            key: FamilyKey::grdb(grdb),
            codim,
            ambient,
            model: EquationModel::CompleteIntersection { degrees },
            index: 1,
            basket: None,
            h11: 1,
            alpha: None,
            projections: Vec::new(),
            expected: None,
            flags: Vec::new(),
        })
    }

    pub fn pfaffian(grdb: u32, weights: Vec<u32>, degrees: [u32; 5]) -> Result<Self> {
        let mut r = Self::complete_intersection(grdb, weights, Vec::new())?;
        r.codim = 3;
        r.model = EquationModel::Pfaffian { degrees };
        Ok(r)
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    pub fn hilbert_series(&self, order: usize) -> Result<PowerSeries> {
        match &self.model {
            EquationModel::CompleteIntersection { degrees } => {
                Ok(hilbert_series_ci(&self.ambient, degrees, order))
            }
            EquationModel::Pfaffian { degrees } => {
                hilbert_series_pfaffian(&self.ambient, degrees, self.index, order)
            }
            EquationModel::External => Err(Error::Unsupported(format!(
                "row {} has no equation model",
                self.key
            ))),
        }
    }

    /// `h^0(-K_X)`, the number of degree-1 sections.
    pub fn p1(&self) -> Result<i64> {
        match self.model {
            EquationModel::External => Ok(self.ambient.linear_coordinates() as i64),
            _ => self.hilbert_series(1)?.integer_coefficient(1),
        }
    }

    /// The declared basket, or for complete intersections the computed one.
    pub fn resolved_basket(&self) -> Result<Basket> {
        if let Some(b) = &self.basket {
            return Ok(b.clone());
        }
        match &self.model {
            EquationModel::CompleteIntersection { degrees } => compute_basket_ci(&self.ambient, degrees),
            _ => Err(Error::Unsupported(format!(
                "row {} declares no basket and its model cannot be analysed",
                self.key
            ))),
        }
    }

    /// A description such as `X_{6,6} ⊂ P(1,2,2,2,3,3)`.
    pub fn describe(&self) -> String {
        let ds: Vec<String> = self.model.degrees().iter().map(u32::to_string).collect();
        match self.model {
            EquationModel::CompleteIntersection { .. } => {
                format!("X_{{{}}} ⊂ {}", ds.join(","), self.ambient)
            }
            EquationModel::Pfaffian { .. } => format!("Pf_{{{}}} ⊂ {}", ds.join(","), self.ambient),
            EquationModel::External => format!("X ⊂ {}", self.ambient),
        }
    }
}

/// Structural problems found in a record.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_family(r: &FamilyRecord) -> ValidationReport {
    let mut v = Vec::new();
    let n = r.ambient.weights().len() as u32;
    let m = r.index as i64;
    if r.index < 1 {
        v.push("index must be positive".to_string());
    }
    if n != r.codim + 4 {
        v.push(format!("{n} weights do not fit codimension {}", r.codim));
    }
    match &r.model {
        EquationModel::CompleteIntersection { degrees } => {
            if degrees.len() as u32 != r.codim {
                v.push(format!("{} equations for codimension {}", degrees.len(), r.codim));
            }
            if degrees.iter().any(|&d| d < 2) {
                v.push("equation degrees must be at least 2".to_string());
            }
            let sd: i64 = degrees.iter().map(|&d| d as i64).sum();
            if r.ambient.sum() - sd != m {
                v.push(format!(
                    "index identity fails: {} - {sd} = {} != {m}",
                    r.ambient.sum(),
                    r.ambient.sum() - sd
                ));
            }
        }
        EquationModel::Pfaffian { degrees } => {
            if r.codim != 3 {
                v.push("Pfaffian models have codimension 3".to_string());
            }
            let sd: i64 = degrees.iter().map(|&d| d as i64).sum();
            if sd % 2 != 0 {
                v.push(format!("Pfaffian degree sum {sd} is odd"));
            } else if sd / 2 - r.ambient.sum() != -m {
                v.push(format!(
                    "index identity fails: {} - {} = {} != -{m}",
                    sd / 2,
                    r.ambient.sum(),
                    sd / 2 - r.ambient.sum()
                ));
            }
        }
        EquationModel::External => {}
    }
    if r.h11 < 1 {
        v.push(format!("h11 = {} must be at least 1", r.h11));
    }
    if let Some(b) = &r.basket {
        for (q, _) in b.iter() {
            if !q.is_isolated() {
                v.push(format!("basket point {q} is not isolated"));
            }
        }
    }
    for step in &r.projections {
        if let Err(e) = step.check() {
            v.push(e.to_string());
        }
    }
    ValidationReport { violations: v }
}

/// `prod (1 - t^{d_j}) / prod (1 - t^{a_i})`.
pub fn hilbert_series_ci(ambient: &WeightedSpace, degrees: &[u32], order: usize) -> PowerSeries {
    expand_product_quotient(degrees, ambient.weights(), order)
}

/// Hilbert series of a codimension 3 Pfaffian with the Buchsbaum–Eisenbud
/// resolution `1 - Σt^{d_i} + Σt^{k-d_i} - t^k`, `k = Σd_i / 2`.
pub fn hilbert_series_pfaffian(
    ambient: &WeightedSpace,
    degrees: &[u32; 5],
    index: u32,
    order: usize,
) -> Result<PowerSeries> {
    let k = pfaffian_adjunction_degree(degrees)?;
    if k as i64 - ambient.sum() != -(index as i64) {
        return Err(Error::Model(format!(
            "Pfaffian index identity fails: {k} - {} != -{index}",
            ambient.sum()
        )));
    }
    let mut s = PowerSeries::from_terms(&pfaffian_numerator(degrees, k), order);
    for &a in ambient.weights() {
        s.div_one_minus_power(a as usize);
    }
    Ok(s)
}

fn pfaffian_adjunction_degree(degrees: &[u32; 5]) -> Result<u32> {
    let sum: u32 = degrees.iter().sum();
    if !sum.is_multiple_of(2) {
        return Err(Error::Model(format!("Pfaffian degree sum {sum} is odd")));
    }
    let k = sum / 2;
    if degrees.iter().any(|&d| d >= k) {
        return Err(Error::Model(format!(
            "Pfaffian degrees {degrees:?} exceed k = {k}"
        )));
    }
    Ok(k)
}

/// Sparse numerator terms of the Pfaffian Hilbert series.
pub fn pfaffian_numerator(degrees: &[u32; 5], k: u32) -> Vec<(usize, i64)> {
    let mut terms = vec![(0, 1), (k as usize, -1)];
    for &d in degrees {
        terms.push((d as usize, -1));
        terms.push(((k - d) as usize, 1));
    }
    terms
}

/// `g_X = h^0(-K_X) - 2`.
pub fn genus(r: &FamilyRecord) -> Result<i64> {
    if r.index != 1 {
        return Err(Error::UnsupportedIndex(r.index));
    }
    Ok(r.p1()? - 2)
}

pub fn euler_from_hodge(h11: i64, h21: i64) -> i64 {
    2 + 2 * h11 - 2 * h21
}
