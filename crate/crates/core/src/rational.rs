//! Exact rationals with denominator and p-adic valuation helpers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    Malformed(String),
}

/// A reduced fraction with positive denominator. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

/// p-adic valuation; zero has infinite valuation, which sorts above every
/// finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Rational {
    /// Reduces `n/d`; fails on `d = 0`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, RationalError> {
        let d = d.into();
        if d.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(n.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `1 / base^exp`.
    pub fn inverse_power(base: u64, exp: u32) -> Self {
        Rational(BigRational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(base), exp as usize),
        ))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// The denominator in lowest terms, `d(q)`.
    pub fn den(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `floor(self / other)` for `other > 0`.
    pub fn floor_div(&self, other: &Rational) -> BigInt {
        let q = &self.0 / &other.0;
        q.floor().to_integer()
    }

    pub fn mul_int(&self, k: u64) -> Self {
        Rational(&self.0 * BigInt::from(k))
    }

    pub fn div_int(&self, k: u64) -> Self {
        assert!(k != 0, "division by zero");
        Rational(&self.0 / BigInt::from(k))
    }

    /// Exponent of `p` in the factorisation of `self`.
    pub fn padic_val(&self, p: u64) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        Valuation::Finite(int_valuation(self.numer(), p) - int_valuation(self.den(), p))
    }

    /// Converts to an integer if `self` is integral and fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(p >= 2);
    if n.is_zero() {
        return 0;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || RationalError::Malformed(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, RationalError> {
            let t = t.trim();
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(malformed());
            }
            t.parse::<BigInt>().map_err(|_| malformed())
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying big rationals.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for building test and table values: `q(3, 4)` is `3/4`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(Rational::new(2, 4).unwrap().to_string(), "1/2");
        assert_eq!(Rational::new(-3, -6).unwrap().to_string(), "1/2");
        let z = Rational::new(0, 5).unwrap();
        assert_eq!((z.numer().clone(), z.den().clone()), (BigInt::zero(), BigInt::one()));
        assert_eq!(Rational::new(1, 0), Err(RationalError::ZeroDenominator));
        assert_eq!(Rational::new(3, -4).unwrap().to_string(), "-3/4");
    }

    #[test]
    fn den_examples() {
        assert_eq!(q(3, 4).den(), &BigInt::from(4));
        assert_eq!(q(5, 1).den(), &BigInt::from(1));
        // a_1 of prop51: (2*27 - 1) / (4 * 27)
        let a1 = q(2 * 27 - 1, 4 * 27);
        assert_eq!(a1, q(53, 108));
        assert_eq!(a1.den(), &BigInt::from(108));
    }

    #[test]
    fn padic_examples() {
        assert_eq!(q(3, 4).padic_val(2), Valuation::Finite(-2));
        assert_eq!(q(1, 6).padic_val(3), Valuation::Finite(-1));
        assert_eq!(q(1, 20).padic_val(5), Valuation::Finite(-1));
        assert_eq!(q(18, 1).padic_val(3), Valuation::Finite(2));
        assert_eq!(Rational::zero().padic_val(7), Valuation::Infinite);
        assert!(Valuation::Finite(100) < Valuation::Infinite);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/4".parse::<Rational>().unwrap().to_string(), "3/2");
        assert_eq!(" -7 ".parse::<Rational>().unwrap().to_string(), "-7");
        assert_eq!("4/2".parse::<Rational>().unwrap().to_string(), "2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
        assert!("1 2/3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn floor_div_matches_integer_division() {
        assert_eq!(q(1, 2).floor_div(&q(1, 6)), BigInt::from(3));
        assert_eq!(q(1, 2).floor_div(&q(1, 5)), BigInt::from(2));
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..500)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_additive(x in nonzero(), y in nonzero(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let lhs = (&x * &y).padic_val(p).finite().unwrap();
            prop_assert_eq!(lhs, x.padic_val(p).finite().unwrap() + y.padic_val(p).finite().unwrap());
        }

        #[test]
        fn valuation_of_sum_with_distinct_valuations(x in nonzero(), y in nonzero(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let (vx, vy) = (x.padic_val(p), y.padic_val(p));
            prop_assume!(vx != vy);
            prop_assert_eq!((&x + &y).padic_val(p), vx.min(vy));
        }

        #[test]
        fn den_is_product_of_negative_valuations(x in nonzero()) {
            let mut rebuilt = BigInt::one();
            for p in crate::arith::primes().take_while(|&p| p < 500) {
                if let Valuation::Finite(v) = x.padic_val(p) {
                    if v < 0 {
                        rebuilt *= num_traits::pow(BigInt::from(p), (-v) as usize);
                    }
                }
            }
            prop_assert_eq!(&rebuilt, x.den());
        }

        #[test]
        fn text_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = q(n, d);
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }
}
