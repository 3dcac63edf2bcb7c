//! Hodge numbers of weighted hypersurfaces from the Milnor algebra.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::euler_from_hodge;
use crate::series::{expand_product_quotient, PowerSeries};

/// Hodge diamond of a Fano 3-fold, determined by `h^{1,1}` and `h^{2,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HodgeDiamond {
    pub h11: i64,
    pub h21: i64,
}

impl HodgeDiamond {
    pub fn h22(&self) -> i64 {
        self.h11
    }

    pub fn h12(&self) -> i64 {
        self.h21
    }

    pub fn euler(&self) -> i64 {
        euler_from_hodge(self.h11, self.h21)
    }

    /// `h^{p,q}` for `0 <= p, q <= 3`.
    pub fn get(&self, p: usize, q: usize) -> i64 {
        match (p, q) {
            (0, 0) | (3, 3) => 1,
            (1, 1) | (2, 2) => self.h11,
            (2, 1) | (1, 2) => self.h21,
            _ => 0,
        }
    }
}

impl fmt::Display for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = [self.h11, self.h21]
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let cell = |v: i64| format!("{v:^width$}");
        let rows: Vec<String> = (0usize..=6)
            .map(|s| {
                let lo = s.saturating_sub(3);
                let hi = s.min(3);
                (lo..=hi)
                    .rev()
                    .map(|p| cell(self.get(p, s - p)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let full = rows.iter().map(String::len).max().unwrap_or(0);
        for (i, row) in rows.iter().enumerate() {
            let pad = (full - row.len()) / 2;
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}{row}", " ".repeat(pad))?;
        }
        Ok(())
    }
}

pub fn hodge_diamond(h11: i64, h21: i64) -> HodgeDiamond {
    HodgeDiamond { h11, h21 }
}

/// Top nonzero degree of the Milnor algebra, `(n+1)d - 2Σa` for `n+1` weights.
pub fn milnor_socle_degree(weights: &[u32], d: u32) -> i64 {
    weights.len() as i64 * d as i64 - 2 * weights.iter().map(|&a| a as i64).sum::<i64>()
}

/// `prod (1 - t^{d-a_i}) / prod (1 - t^{a_i})`, a polynomial when the partials form a regular sequence.
pub fn milnor_series(weights: &[u32], d: u32, order: usize) -> Result<PowerSeries> {
    if let Some(&a) = weights.iter().find(|&&a| a >= d) {
        return Err(Error::Model(format!("weight {a} is not below the degree {d}")));
    }
    let numer: Vec<u32> = weights.iter().map(|&a| d - a).collect();
    Ok(expand_product_quotient(&numer, weights, order))
}

fn milnor_coefficient(weights: &[u32], d: u32, exponent: i64) -> Result<i64> {
    if exponent < 0 || exponent > milnor_socle_degree(weights, d) {
        return Ok(0);
    }
    milnor_series(weights, d, exponent as usize)?.integer_coefficient(exponent as usize)
}

/// Dimension of the primitive piece `H^{n-p,p-1}`, read off the Milnor algebra in degree `pd - Σa`.
pub fn primitive_hodge(weights: &[u32], d: u32, p: u32) -> Result<i64> {
    if !(1..=4).contains(&p) {
        return Err(Error::Model(format!(
            "primitive Hodge index p = {p} outside 1..=4"
        )));
    }
    let sum: i64 = weights.iter().map(|&a| a as i64).sum();
    milnor_coefficient(weights, d, p as i64 * d as i64 - sum)
}

/// `h^{2,1}` of a quasismooth hypersurface 3-fold.
pub fn h21_hypersurface(weights: &[u32], d: u32) -> Result<i64> {
    if weights.len() != 5 {
        return Err(Error::Model(format!(
            "a hypersurface 3-fold needs 5 weights, got {}",
            weights.len()
        )));
    }
    primitive_hodge(weights, d, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::to_i64;

    const X66: [u32; 5] = [1, 5, 6, 22, 33];

    #[test]
    fn milnor_algebra_of_x66() {
        let s = milnor_series(&X66, 66, 196).unwrap();
        let c: Vec<i64> = s.coefficients().iter().map(|c| to_i64(c).unwrap()).collect();
        assert_eq!(&c[..6], &[1, 1, 1, 1, 1, 2]);
        assert_eq!(c[65], 120);
        assert_eq!(c[66], 122);
        assert_eq!(c[196], 1);
        assert_eq!(milnor_socle_degree(&X66, 66), 196);
    }

    #[test]
    fn quartic() {
        let s = milnor_series(&[1; 5], 4, 8).unwrap();
        let c: Vec<i64> = s.coefficients().iter().map(|c| to_i64(c).unwrap()).collect();
        assert_eq!(c, vec![1, 5, 15, 30, 45, 51, 45, 30, 15]);
        assert_eq!(h21_hypersurface(&[1; 5], 4).unwrap(), 30);
        assert_eq!(primitive_hodge(&[1; 5], 4, 3).unwrap(), 30);
    }

    #[test]
    fn hodge_numbers() {
        assert_eq!(h21_hypersurface(&X66, 66).unwrap(), 120);
        assert_eq!(h21_hypersurface(&[1, 1, 1, 2, 2], 6).unwrap(), 41);
        assert_eq!(primitive_hodge(&[1, 4, 6, 7, 11], 28, 2).unwrap(), 49);
        assert_eq!(primitive_hodge(&X66, 66, 1).unwrap(), 0);
        assert_eq!(primitive_hodge(&X66, 66, 4).unwrap(), 0);
        assert!(milnor_series(&[1, 1, 1, 1, 4], 4, 3).is_err());
    }

    #[test]
    fn diamonds() {
        assert_eq!(hodge_diamond(1, 120).euler(), -236);
        assert_eq!(hodge_diamond(1, 2).euler(), 0);
        let jer = hodge_diamond(3, 9);
        assert_eq!(jer.euler(), -10);
        assert_eq!((jer.h22(), jer.h12(), jer.get(3, 0)), (3, 9, 0));
        let text = hodge_diamond(1, 30).to_string();
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().nth(3).unwrap().contains("30"));
    }
}
