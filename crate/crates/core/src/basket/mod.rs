//! Cyclic quotient singularities and baskets of weighted complete intersections.

mod lattice;
mod strata;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::series::{rational, Rational};

pub use strata::{compute_basket_ci, compute_basket_hypersurface, singular_strata, Stratum};

/// A point of type `1/r(w1,w2,w3)`, stored in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientSingularity {
    r: u32,
    weights: [u32; 3],
}

impl QuotientSingularity {
    /// The terminal point `1/r(1, a, r-a)`.
    pub fn terminal(r: u32, a: u32) -> Result<Self> {
        normalize_quotient(r, [1, a as i64, r as i64 - a as i64])
    }

    pub fn index(&self) -> u32 {
        self.r
    }

    pub fn weights(&self) -> [u32; 3] {
        self.weights
    }

    /// True for the form `1/r(1, a, r-a)`.
    pub fn is_terminal(&self) -> bool {
        let [x, y, z] = self.weights;
        x == 1 && y + z == self.r && y.gcd(&self.r) == 1
    }

    pub fn is_isolated(&self) -> bool {
        self.weights.iter().all(|w| w.gcd(&self.r) == 1)
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.weights;
        write!(f, "1/{}({x},{y},{z})", self.r)
    }
}

/// Canonical representative of `1/r(w)` under multiplication by units mod `r`.
///
/// Among the sorted unit multiples, a terminal form `(1, a, r-a)` is preferred;
/// otherwise the lexicographically least triple is kept.
pub fn normalize_quotient(r: u32, raw: [i64; 3]) -> Result<QuotientSingularity> {
    if r < 2 {
        return Err(Error::Model(format!(
            "quotient index must be at least 2, got {r}"
        )));
    }
    let m = r as i64;
    let reduced = raw.map(|w| w.rem_euclid(m) as u32);
    if reduced.contains(&0) {
        return Err(Error::NotTerminal(format!(
            "weight divisible by {r} in 1/{r}({},{},{})",
            raw[0], raw[1], raw[2]
        )));
    }
    let mut best: Option<[u32; 3]> = None;
    let mut best_terminal: Option<[u32; 3]> = None;
    for u in (1..r).filter(|u| u.gcd(&r) == 1) {
        let mut t = reduced.map(|w| (w * u) % r);
        t.sort_unstable();
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
        if t[0] == 1 && t[1] + t[2] == r && best_terminal.is_none_or(|b| t < b) {
            best_terminal = Some(t);
        }
    }
    Ok(QuotientSingularity {
        r,
        weights: best_terminal.or(best).expect("1 is a unit"),
    })
}

/// Multiset of quotient singularities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Basket {
    entries: BTreeMap<QuotientSingularity, u32>,
}

impl Basket {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (QuotientSingularity, u32)>>(entries: I) -> Self {
        let mut b = Basket::new();
        for (q, n) in entries {
            b.add(q, n);
        }
        b
    }

    pub fn add(&mut self, q: QuotientSingularity, count: u32) {
        if count > 0 {
            *self.entries.entry(q).or_insert(0) += count;
        }
    }

    /// Removes one copy of `q`; returns false when absent.
    pub fn remove_one(&mut self, q: &QuotientSingularity) -> bool {
        match self.entries.get_mut(q) {
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(q);
                true
            }
            None => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QuotientSingularity, u32)> {
        self.entries.iter().map(|(q, &n)| (q, n))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of points counted with multiplicity.
    pub fn len(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Sum of `r - 1` over the points.
    pub fn index_sum(&self) -> i64 {
        self.iter().map(|(q, n)| (q.r as i64 - 1) * n as i64).sum()
    }

    /// Sum of `(r - 1)/r` over the points.
    pub fn orbifold_correction(&self) -> Rational {
        self.iter().fold(rational(0, 1), |acc, (q, n)| {
            acc + rational((q.r as i64 - 1) * n as i64, q.r as i64)
        })
    }

    pub fn is_terminal(&self) -> bool {
        self.entries.keys().all(QuotientSingularity::is_terminal)
    }
}

impl fmt::Display for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, (q, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if n > 1 {
                write!(f, "{n}×")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}
