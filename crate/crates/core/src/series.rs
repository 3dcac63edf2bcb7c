//! Truncated power series with exact rational coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns the value as `i64` when the rational is an integer that fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Formats as `p/q`, or bare `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense power series `c_0 + c_1 t + ... + c_N t^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Builds a series from its coefficients; the truncation order is `len - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coefficients(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a power series needs at least one coefficient"
        );
        PowerSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coefficients(coeffs.iter().map(|&c| integer(c)).collect())
    }

    /// Polynomial given as sparse `(exponent, coefficient)` terms, truncated at `order`.
    pub fn from_terms(terms: &[(usize, i64)], order: usize) -> Self {
        let mut s = Self::zero(order);
        for &(k, c) in terms {
            if k <= order {
                s.coeffs[k] += integer(c);
            }
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Result<&Rational> {
        self.coeffs.get(k).ok_or(Error::Truncation {
            index: k,
            order: self.truncation_order(),
        })
    }

    /// Coefficient `k` as an integer; errors if out of range or fractional.
    pub fn integer_coefficient(&self, k: usize) -> Result<i64> {
        let c = self.coefficient(k)?;
        to_i64(c)
            .ok_or_else(|| Error::Inconsistent(format!("coefficient of t^{k} is {}", format_rational(c))))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.truncation_order());
        PowerSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    /// Multiplies in place by `1 - t^b`.
    pub fn mul_one_minus_power(&mut self, b: usize) {
        if b == 0 {
            self.coeffs.iter_mut().for_each(Zero::set_zero);
            return;
        }
        for k in (b..self.coeffs.len()).rev() {
            let prev = self.coeffs[k - b].clone();
            self.coeffs[k] -= prev;
        }
    }

    /// Divides in place by `1 - t^a`, i.e. multiplies by `1 + t^a + t^{2a} + ...`.
    ///
    /// # Panics
    /// If `a == 0`.
    pub fn div_one_minus_power(&mut self, a: usize) {
        assert!(a >= 1, "cannot divide by 1 - t^0");
        for k in a..self.coeffs.len() {
            let prev = self.coeffs[k - a].clone();
            self.coeffs[k] += prev;
        }
    }

    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Adds `other`, truncating to the smaller order.
    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.truncation_order().min(other.truncation_order());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.truncation_order().min(other.truncation_order());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }
}

/// Cauchy product truncated at the smaller of the two orders.
pub fn series_mul(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    let n = a.truncation_order().min(b.truncation_order());
    let mut out = PowerSeries::zero(n);
    for (i, ai) in a.coeffs.iter().take(n + 1).enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().take(n + 1 - i).enumerate() {
            out.coeffs[i + j] += ai * bj;
        }
    }
    out
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        series_mul(self, rhs)
    }
}

/// `prod (1 - t^b) / prod (1 - t^a)` truncated at `t^order`.
///
/// # Panics
/// If any denominator exponent is zero.
pub fn expand_product_quotient(numer: &[u32], denom: &[u32], order: usize) -> PowerSeries {
    let mut s = PowerSeries::one(order);
    for &b in numer {
        s.mul_one_minus_power(b as usize);
    }
    for &a in denom {
        s.div_one_minus_power(a as usize);
    }
    s
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format_rational(&mag);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coeff}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coeff}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.truncation_order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.coefficients().iter().map(|c| to_i64(c).unwrap()).collect()
    }

    #[test]
    fn geometric() {
        assert_eq!(ints(&expand_product_quotient(&[], &[1], 5)), vec![1; 6]);
    }

    #[test]
    fn cubic_quadric_in_p5() {
        let s = expand_product_quotient(&[2, 3], &[1; 6], 3);
        assert_eq!(ints(&s), vec![1, 6, 20, 49]);
    }

    #[test]
    fn products() {
        let a = PowerSeries::from_integers(&[1, 1, 0]);
        let b = PowerSeries::from_integers(&[1, -1, 0]);
        assert_eq!(ints(&series_mul(&a, &b)), vec![1, 0, -1]);

        let geo = expand_product_quotient(&[], &[1], 5);
        let mut one_minus_t = PowerSeries::from_integers(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(ints(&(&geo * &one_minus_t)), vec![1, 0, 0, 0, 0, 0]);
        one_minus_t = one_minus_t.truncate(2);
        assert_eq!(series_mul(&geo, &one_minus_t).truncation_order(), 2);

        let two = PowerSeries::from_integers(&[1, 2, 0, 0]);
        let three = PowerSeries::from_integers(&[1, 3, 0, 0]);
        let p = &(&(&two * &two) * &two) * &(&three * &three);
        assert_eq!(ints(&p), vec![1, 12, 57, 134]);
        assert_eq!(p.integer_coefficient(3).unwrap(), 134);
    }

    #[test]
    fn coefficient_bounds() {
        let one = PowerSeries::one(0);
        assert_eq!(one.coefficient(0).unwrap(), &integer(1));
        assert_eq!(one.coefficient(1), Err(Error::Truncation { index: 1, order: 0 }));
    }

    #[test]
    fn display() {
        let s = PowerSeries::from_coefficients(vec![integer(1), integer(-2), rational(1, 3)]);
        assert_eq!(s.to_string(), "1 - 2t + 1/3t^2 + O(t^3)");
        assert_eq!(format_rational(&rational(-6385, 66)), "-6385/66");
    }
}
