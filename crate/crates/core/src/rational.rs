//! Non-negative exact rationals.
//!
//! Every value is kept in lowest terms with a positive denominator; the
//! underlying `Ratio<BigUint>` reduces after each operation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<BigUint>);

impl Rational {
    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        Rational(Ratio::from_integer(n.into()))
    }

    /// Builds `numer/denom`, or `None` when the denominator is zero.
    pub fn new(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Option<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return None;
        }
        Some(Rational(Ratio::new(numer.into(), denom)))
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(Pow::pow(&self.0, exp))
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigUint> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    /// Returns `k` when the value is exactly `2^k`.
    pub fn exact_log2(&self) -> Option<u64> {
        let n = self.to_integer()?;
        if n.is_zero() {
            return None;
        }
        let k = n.bits() - 1;
        (n == BigUint::one() << k).then_some(k)
    }

    /// Larger of numerator and denominator bit lengths.
    pub fn bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }

    /// Checks the lowest-terms invariant explicitly.
    pub fn is_normalized(&self) -> bool {
        !self.denom().is_zero() && self.numer().gcd(self.denom()).is_one()
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(n)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Always `numer/denom`, even for integers.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}, expected <nonneg int>/<pos int>")]
pub struct ParseRationalError(pub String);

/// Parses the strict `<numer>/<denom>` form.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = s.split_once('/').ok_or_else(err)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(n) || !digits(d) {
            return Err(err());
        }
        let n: BigUint = n.parse().map_err(|_| err())?;
        let d: BigUint = d.parse().map_err(|_| err())?;
        Rational::new(n, d).ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn parse_reduces_to_lowest_terms() {
        let x: Rational = "6/4".parse().unwrap();
        assert_eq!(x, r(3, 2));
        assert_eq!(x.to_string(), "3/2");
        assert!(x.is_normalized());
        assert_eq!("0/7".parse::<Rational>().unwrap().to_string(), "0/1");
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in [
            "1", "1/0", "-1/2", "1/-2", "a/b", "/2", "1/", "1.5/2", " 1/2",
        ] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&r(1, 2) + &r(1, 3), r(5, 6));
        assert_eq!(&r(2, 3) * &r(3, 4), r(1, 2));
        assert_eq!(r(1, 2).checked_div(&r(1, 4)), Some(r(2, 1)));
        assert_eq!(r(1, 2).checked_div(&Rational::zero()), None);
        assert_eq!(r(2, 3).pow(3), r(8, 27));
    }

    #[test]
    fn exact_log2() {
        assert_eq!(Rational::from(1u64).exact_log2(), Some(0));
        assert_eq!(Rational::from(64u64).exact_log2(), Some(6));
        assert_eq!(Rational::from(12u64).exact_log2(), None);
        assert_eq!(r(1, 2).exact_log2(), None);
        assert_eq!(Rational::zero().exact_log2(), None);
    }
}
