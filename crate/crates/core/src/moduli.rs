//! Deformation count `h^1(T_X) = h^{2,1} + α_E - h^{2,2}` and the elephant invariant.

use std::fmt;

use serde::Serialize;

use crate::basket::Basket;
use crate::error::{Error, Result};
use crate::geometry::{flags, EquationModel, FamilyRecord};
use crate::hodge::{milnor_series, milnor_socle_degree};

/// Sections of `O_E(1)` on a general elephant `E ∈ |-K_X|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ElephantSections {
    pub p1: i64,
    pub exists: bool,
    /// `max(P_1 - 1, 0)`.
    pub h0: i64,
}

impl ElephantSections {
    /// The unclamped restriction-sequence value `P_1 - 1`.
    pub fn formal(&self) -> i64 {
        self.p1 - 1
    }
}

pub fn elephant_section_count(r: &FamilyRecord) -> Result<ElephantSections> {
    if r.index != 1 {
        return Err(Error::UnsupportedIndex(r.index));
    }
    let p1 = r.p1()?;
    Ok(ElephantSections {
        p1,
        exists: p1 >= 1,
        h0: (p1 - 1).max(0),
    })
}

/// `α_E = 20 - Σ(r-1) - h^0(E, O_E(1))`.
pub fn alpha_invariant(basket: &Basket, h0_elephant: i64) -> i64 {
    20 - basket.index_sum() - h0_elephant
}

pub fn h1_tangent(h21: i64, alpha: i64, h22: i64) -> i64 {
    h21 + alpha - h22
}

/// `dim M^d` of the Milnor algebra: first-order deformations of a hypersurface.
pub fn jacobian_moduli_oracle(weights: &[u32], d: u32) -> Result<i64> {
    if weights.len() != 5 {
        return Err(Error::Model(format!(
            "the Jacobian oracle needs a hypersurface in 5 variables, got {}",
            weights.len()
        )));
    }
    if d as i64 > milnor_socle_degree(weights, d) {
        return Ok(0);
    }
    milnor_series(weights, d, d as usize)?.integer_coefficient(d as usize)
}

/// Hypotheses under which a moduli count was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// `h^0(T_X) = 0` for complete intersections.
    H0TangentCi,
    /// `h^0(T_X) = 0` for Pfaffian (weighted Grassmannian) models.
    H0TangentPfaffian,
    /// `h^0(T_X) = 0` taken from catalogue data.
    H0TangentDeclared,
    /// The general elephant is a quasismooth K3 with the basket of `X`.
    QuasismoothElephant,
    /// No elephant: `h^0` enters formally as `P_1 - 1`.
    FormalAlpha,
    /// `α` taken from catalogue data.
    AlphaDeclared,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliResult {
    pub alpha: i64,
    pub h0_elephant: i64,
    pub h1_tangent: i64,
    pub elephant_exists: bool,
    pub assumptions: Vec<Assumption>,
}

/// Applies the moduli formula to a family with the given `h^{2,1}` and basket.
pub fn moduli(record: &FamilyRecord, h21: i64, basket: &Basket) -> Result<ModuliResult> {
    let mut assumptions = vec![match record.model {
        EquationModel::CompleteIntersection { .. } => Assumption::H0TangentCi,
        EquationModel::Pfaffian { .. } => Assumption::H0TangentPfaffian,
        EquationModel::External if record.has_flag(flags::H0_TANGENT_ZERO) => Assumption::H0TangentDeclared,
        EquationModel::External => {
            return Err(Error::Unsupported(format!(
                "h^0(T_X) = 0 is not established for row {}",
                record.key
            )))
        }
    }];
    let sections = elephant_section_count(record)?;
    let h0 = if sections.exists {
        assumptions.push(Assumption::QuasismoothElephant);
        sections.h0
    } else {
        assumptions.push(Assumption::FormalAlpha);
        sections.formal()
    };
    let alpha = match record.alpha {
        Some(a) => {
            assumptions.push(Assumption::AlphaDeclared);
            a
        }
        None => alpha_invariant(basket, h0),
    };
    Ok(ModuliResult {
        alpha,
        h0_elephant: sections.h0,
        h1_tangent: h1_tangent(h21, alpha, record.h11),
        elephant_exists: sections.exists,
        assumptions,
    })
}
