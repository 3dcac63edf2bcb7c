//! Coordinate strata of a weighted projective space and the points a general
//! complete intersection meets on them.
//!
//! A point of `X` whose nonzero coordinates are exactly `S` has stabilizer of
//! order `g = gcd(a_S)`. On the open torus of that stratum the restrictions of
//! the equations are generic Laurent polynomials, so the number of points is
//! Bernstein's mixed volume of their supports, measured in the lattice of
//! degree-zero exponents.

use num_integer::Integer;

use super::lattice::{doubled_mixed_area, rank};
use super::{normalize_quotient, Basket};
use crate::error::{Error, Result};
use crate::geometry::WeightedSpace;

/// A maximal coordinate stratum with nontrivial stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    /// Stabilizer order, the gcd of the weights in `coordinates`.
    pub q: u32,
    /// Indices into the sorted weight list.
    pub coordinates: Vec<usize>,
}

impl Stratum {
    pub fn weights(&self, ambient: &WeightedSpace) -> Vec<u32> {
        self.coordinates.iter().map(|&i| ambient.weights()[i]).collect()
    }
}

fn gcd_all(ws: impl IntoIterator<Item = u32>) -> u32 {
    ws.into_iter().fold(0, |g, w| g.gcd(&w))
}

/// For every `q >= 2` that occurs as the gcd of some set of weights, the maximal
/// set of coordinates whose weights `q` divides. Sorted by descending `q`.
pub fn singular_strata(ambient: &WeightedSpace) -> Vec<Stratum> {
    let ws = ambient.weights();
    let max = ws.iter().copied().max().unwrap_or(1);
    let mut out: Vec<Stratum> = (2..=max)
        .rev()
        .filter_map(|q| {
            let coordinates: Vec<usize> = (0..ws.len()).filter(|&i| ws[i].is_multiple_of(q)).collect();
            (!coordinates.is_empty() && gcd_all(coordinates.iter().map(|&i| ws[i])) == q)
                .then_some(Stratum { q, coordinates })
        })
        .collect();
    out.sort_by(|a, b| b.q.cmp(&a.q).then_with(|| a.coordinates.cmp(&b.coordinates)));
    out
}

/// Exponent vectors of all monomials of weighted degree `d`.
pub(crate) fn monomials(weights: &[u32], d: u32) -> Vec<Vec<i64>> {
    fn rec(ws: &[u32], left: u32, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match ws.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&w, rest)) => {
                for k in 0..=left / w {
                    cur.push(k as i64);
                    rec(rest, left - k * w, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out
}

/// Generic nonemptiness on the torus: every subfamily of `k` equations must
/// have a Minkowski sum of supports of dimension at least `k`.
fn generically_solvable(supports: &[Vec<Vec<i64>>]) -> bool {
    let e = supports.len();
    (1u32..(1 << e)).all(|mask| {
        let directions: Vec<Vec<i64>> = (0..e)
            .filter(|j| mask & (1 << j) != 0)
            .flat_map(|j| {
                let base = &supports[j][0];
                supports[j]
                    .iter()
                    .map(move |v| v.iter().zip(base).map(|(x, y)| x - y).collect())
            })
            .collect();
        rank(&directions) >= mask.count_ones() as usize
    })
}

/// Number of torus points cut out by `m` generic equations in an `m`-dimensional
/// weighted torus with weights `ws` (all divisible by `g`).
fn torus_count(ws: &[u32], g: u32, supports: &[Vec<Vec<i64>>]) -> Result<u64> {
    let m = ws.len() - 1;
    // Dropping the last exponent maps the degree-zero lattice isomorphically onto
    // a sublattice of index a_last/g.
    let index = (ws[m] / g) as i64;
    let raw = match m {
        0 => return Ok(1),
        1 => {
            let xs: Vec<i64> = supports[0].iter().map(|v| v[0]).collect();
            xs.iter().max().unwrap() - xs.iter().min().unwrap()
        }
        2 => {
            let planar = |s: &Vec<Vec<i64>>| -> Vec<(i64, i64)> { s.iter().map(|v| (v[0], v[1])).collect() };
            let twice = doubled_mixed_area(&planar(&supports[0]), &planar(&supports[1]));
            if twice % 2 != 0 {
                return Err(Error::Inconsistent(format!("odd doubled mixed area {twice}")));
            }
            twice / 2
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "point count on a {m}-dimensional stratum"
            )))
        }
    };
    if raw % index != 0 {
        return Err(Error::Inconsistent(format!(
            "stratum point count {raw}/{index} is fractional"
        )));
    }
    Ok((raw / index) as u64)
}

/// Basket of a general quasismooth complete intersection of the given degrees.
pub fn compute_basket_ci(ambient: &WeightedSpace, degrees: &[u32]) -> Result<Basket> {
    let ws = ambient.weights();
    let n = ws.len();
    if n != degrees.len() + 4 {
        return Err(Error::Model(format!(
            "{} equations in {n} variables do not cut out a 3-fold",
            degrees.len()
        )));
    }
    let mut basket = Basket::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sw: Vec<u32> = s.iter().map(|&i| ws[i]).collect();
        let g = gcd_all(sw.iter().copied());
        if g < 2 {
            continue;
        }
        let supports: Vec<Vec<Vec<i64>>> = degrees
            .iter()
            .filter(|&&d| d % g == 0)
            .map(|&d| monomials(&sw, d))
            .filter(|m| !m.is_empty())
            .collect();
        let m = s.len() - 1;
        if !generically_solvable(&supports) {
            continue;
        }
        if supports.len() < m {
            return Err(Error::NotTerminal(format!(
                "X meets the stratum with weights {sw:?} in a positive-dimensional set"
            )));
        }
        let count = torus_count(&sw, g, &supports)?;
        if count == 0 {
            continue;
        }
        let mut residues: Vec<u32> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| ws[i] % g)
            .chain(std::iter::repeat_n(0, m))
            .collect();
        for &d in degrees {
            let pos = residues.iter().position(|&w| w == d % g).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "no variable of weight ≡ {} mod {g} to eliminate on stratum {sw:?}; not quasismooth",
                    d % g
                ))
            })?;
            residues.swap_remove(pos);
        }
        let raw = [residues[0] as i64, residues[1] as i64, residues[2] as i64];
        basket.add(normalize_quotient(g, raw)?, count as u32);
    }
    Ok(basket)
}

/// Basket of a general quasismooth hypersurface of degree `d`.
pub fn compute_basket_hypersurface(ambient: &WeightedSpace, d: u32) -> Result<Basket> {
    if ambient.weights().len() != 5 {
        return Err(Error::Model(format!(
            "a hypersurface 3-fold needs 5 weights, got {}",
            ambient.weights().len()
        )));
    }
    compute_basket_ci(ambient, &[d])
}
