//! Orbifold Euler characteristic of weighted complete intersections.

use num_bigint::BigInt;
use num_traits::One;

use crate::basket::Basket;
use crate::error::{Error, Result};
use crate::geometry::WeightedSpace;
use crate::series::{format_rational, series_mul, to_i64, PowerSeries, Rational};

/// `prod (1 + a_i h) / prod (1 + d_j h)` up to `h^3`.
pub fn chern_quotient(weights: &[u32], degrees: &[u32]) -> PowerSeries {
    let mut s = PowerSeries::one(3);
    for &a in weights {
        s = series_mul(&s, &PowerSeries::from_terms(&[(0, 1), (1, a as i64)], 3));
    }
    for &d in degrees {
        let d = d as i64;
        s = series_mul(
            &s,
            &PowerSeries::from_terms(&[(0, 1), (1, -d), (2, d * d), (3, -d * d * d)], 3),
        );
    }
    s
}

/// `deg X = prod d_j / prod a_i`.
pub fn degree(ambient: &WeightedSpace, degrees: &[u32]) -> Rational {
    let num: BigInt = degrees.iter().map(|&d| BigInt::from(d)).product();
    let den: BigInt = ambient.weights().iter().map(|&a| BigInt::from(a)).product();
    Rational::new(num, den)
}

/// Orbifold Euler characteristic `coeff_{h^3}[prod(1+a_i h)/prod(1+d_j h)] · deg X`.
pub fn euler_orbifold_ci(ambient: &WeightedSpace, degrees: &[u32]) -> Rational {
    let top = chern_quotient(ambient.weights(), degrees).coefficients()[3].clone();
    top * degree(ambient, degrees)
}

/// `e = e_orb + Σ (r-1)/r`, which must be an integer.
pub fn euler_topological(e_orb: &Rational, basket: &Basket) -> Result<i64> {
    let e = e_orb + basket.orbifold_correction();
    to_i64(&e).ok_or_else(|| {
        Error::Inconsistent(format!(
            "e_orb {} plus basket correction is {}, not an integer",
            format_rational(e_orb),
            format_rational(&e)
        ))
    })
}

/// Euler characteristic of a smooth complete intersection in ordinary projective space.
pub fn euler_classical(ambient: &WeightedSpace, degrees: &[u32]) -> Result<i64> {
    if ambient.weights().iter().any(|&a| !a.is_one()) {
        return Err(Error::Model(format!(
            "{ambient} is not an ordinary projective space"
        )));
    }
    euler_topological(&euler_orbifold_ci(ambient, degrees), &Basket::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basket::normalize_quotient;
    use crate::series::{integer, rational};

    fn space(ws: &[u32]) -> WeightedSpace {
        WeightedSpace::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn x28() {
        let p = space(&[1, 4, 6, 7, 11]);
        let c: Vec<Rational> = chern_quotient(p.weights(), &[28]).coefficients().to_vec();
        assert_eq!(c, vec![integer(1), integer(1), integer(281), integer(-6385)]);
        let e_orb = euler_orbifold_ci(&p, &[28]);
        assert_eq!(e_orb, rational(-6385, 66));
        let b = Basket::from_entries([
            (normalize_quotient(2, [1, 1, 1]).unwrap(), 2),
            (normalize_quotient(6, [1, 1, 5]).unwrap(), 1),
            (normalize_quotient(11, [1, 4, 7]).unwrap(), 1),
        ]);
        assert_eq!(euler_topological(&e_orb, &b).unwrap(), -94);
        assert!(euler_topological(&e_orb, &Basket::new()).is_err());
    }

    #[test]
    fn smooth_cases() {
        assert_eq!(euler_orbifold_ci(&space(&[1; 5]), &[4]), integer(-56));
        assert_eq!(euler_classical(&space(&[1; 5]), &[4]).unwrap(), -56);
        assert_eq!(euler_classical(&space(&[1; 6]), &[2, 3]).unwrap(), -36);
        assert_eq!(euler_classical(&space(&[1; 7]), &[2, 2, 2]).unwrap(), -24);
        assert!(euler_classical(&space(&[1, 1, 1, 1, 2]), &[5]).is_err());
    }

    #[test]
    fn elephant_model() {
        let p = space(&[1, 2, 2, 2, 3, 3]);
        assert_eq!(
            chern_quotient(p.weights(), &[6, 6]).coefficients()[3],
            integer(-97)
        );
        let e_orb = euler_orbifold_ci(&p, &[6, 6]);
        assert_eq!(e_orb, rational(-97, 2));
        let b = Basket::from_entries([(normalize_quotient(2, [1, 1, 1]).unwrap(), 9)]);
        assert_eq!(euler_topological(&e_orb, &b).unwrap(), -44);
    }
}
