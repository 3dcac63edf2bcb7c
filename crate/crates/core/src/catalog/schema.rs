//! On-disk JSON Lines form of a catalogue row.

use serde::{Deserialize, Serialize};

use crate::basket::{normalize_quotient, Basket};
use crate::error::Error;
use crate::geometry::{EquationModel, Expected, FamilyKey, FamilyRecord, WeightedSpace};
use crate::projection::ProjectionStep;

fn one() -> u32 {
    1
}

fn one_i64() -> i64 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ci,
    Pfaffian,
    External,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    #[serde(rename = "type")]
    pub kind: ModelKind,
    #[serde(default)]
    pub degrees: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasketEntryJson {
    pub r: u32,
    pub w: [u32; 3],
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub grdb: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub codim: u32,
    pub weights: Vec<u32>,
    pub model: ModelJson,
    #[serde(default = "one")]
    pub index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basket: Option<Vec<BasketEntryJson>>,
    #[serde(default = "one_i64")]
    pub h11: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(default)]
    pub projections: Vec<ProjectionStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl TryFrom<RecordJson> for FamilyRecord {
    type Error = Error;

    fn try_from(j: RecordJson) -> Result<Self, Error> {
        let ambient = WeightedSpace::new(j.weights)?;
        let model = match j.model.kind {
            ModelKind::Ci => {
                let mut degrees = j.model.degrees;
                degrees.sort_unstable();
                EquationModel::CompleteIntersection { degrees }
            }
            ModelKind::Pfaffian => {
                let mut degrees: [u32; 5] = j.model.degrees.try_into().map_err(|d: Vec<u32>| {
                    Error::Model(format!("a Pfaffian model needs 5 degrees, got {}", d.len()))
                })?;
                degrees.sort_unstable();
                EquationModel::Pfaffian { degrees }
            }
            ModelKind::External => {
                if !j.model.degrees.is_empty() {
                    return Err(Error::Model("external models carry no degrees".into()));
                }
                EquationModel::External
            }
        };
        let basket = match j.basket {
            None => None,
            Some(entries) => {
                let mut b = Basket::new();
                for e in entries {
                    if e.count == 0 {
                        return Err(Error::Model("basket multiplicities must be positive".into()));
                    }
                    let q = normalize_quotient(e.r, e.w.map(i64::from))?;
                    b.add(q, e.count);
                }
                Some(b)
            }
        };
        let mut flags = j.flags;
        flags.sort();
        flags.dedup();
        Ok(FamilyRecord {
            key: FamilyKey {
                grdb: j.grdb,
                family: j.family,
            },
            codim: j.codim,
            ambient,
            model,
            index: j.index,
            basket,
            h11: j.h11,
            alpha: j.alpha,
            projections: j.projections,
            expected: j.expected,
            flags,
        })
    }
}

impl From<FamilyRecord> for RecordJson {
    fn from(r: FamilyRecord) -> Self {
        let kind = match r.model {
            EquationModel::CompleteIntersection { .. } => ModelKind::Ci,
            EquationModel::Pfaffian { .. } => ModelKind::Pfaffian,
            EquationModel::External => ModelKind::External,
        };
        RecordJson {
            grdb: r.key.grdb,
            family: r.key.family,
            codim: r.codim,
            weights: r.ambient.weights().to_vec(),
            model: ModelJson {
                kind,
                degrees: r.model.degrees().to_vec(),
            },
            index: r.index,
            basket: r.basket.map(|b| {
                b.iter()
                    .map(|(q, count)| BasketEntryJson {
                        r: q.index(),
                        w: q.weights(),
                        count,
                    })
                    .collect()
            }),
            h11: r.h11,
            alpha: r.alpha,
            projections: r.projections,
            expected: r.expected,
            flags: r.flags,
        }
    }
}
