//! Exact rational arithmetic.
//!
//! [`Rational`] wraps an arbitrary-precision fraction that is kept in lowest
//! terms with a positive denominator after every operation, so structural
//! equality is value equality and values can be used directly as set or map
//! keys during monochromaticity checks.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("value {0} does not fit in a machine integer")]
    Overflow(Rational),
}

/// An exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n/d` in lowest terms with the sign carried by the numerator.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, NumError> {
        let d = d.into();
        if d.is_zero() {
            return Err(NumError::ZeroDenominator);
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

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self, NumError> {
        if other.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    /// Exact `self^e`; `x^0 = 1` for every `x`, including zero.
    pub fn pow(&self, e: u32) -> Self {
        // square-and-multiply keeps intermediate products reduced
        let mut base = self.0.clone();
        let mut acc = BigRational::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Rational(acc)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Strict membership in the open interval `(lo, hi)`.
    pub fn in_open_interval(&self, lo: &Rational, hi: &Rational) -> bool {
        lo < self && self < hi
    }

    /// `max(|numerator|, denominator)`.
    pub fn height(&self) -> BigInt {
        let n = self.numer().abs();
        let d = self.denom();
        if &n > d {
            n
        } else {
            d.clone()
        }
    }

    /// The deterministic height order: height, then denominator, then
    /// numerator.
    pub fn height_cmp(&self, other: &Rational) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.denom().cmp(other.denom()))
            .then_with(|| self.numer().cmp(other.numer()))
    }

    /// Smallest integer strictly greater than `self`.
    pub fn next_integer_above(&self) -> BigInt {
        self.floor() + 1
    }

    pub fn to_u64(&self) -> Result<u64, NumError> {
        if !self.denom().is_one() {
            return Err(NumError::Overflow(self.clone()));
        }
        self.numer().to_u64().ok_or_else(|| NumError::Overflow(self.clone()))
    }

    /// Every rational of height at most `bound`, listed in height order.
    pub fn all_up_to_height(bound: u64) -> Vec<Rational> {
        let mut out = Vec::new();
        for h in 1..=bound {
            // denominator ascending, then numerator ascending
            for d in 1..=h {
                let nums: Vec<i64> = if d == h {
                    (-(h as i64)..=(h as i64)).collect()
                } else {
                    vec![-(h as i64), h as i64]
                };
                for n in nums {
                    if n.unsigned_abs().gcd(&d) == 1 {
                        out.push(Rational::new(n, d).expect("nonzero denominator"));
                    }
                }
            }
        }
        out
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, NumError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumError::Malformed(whole.to_string()));
    }
    s.parse::<BigInt>().map_err(|_| NumError::Malformed(whole.to_string()))
}

impl FromStr for Rational {
    type Err = NumError;

    /// Accepts `n/d` or `n`; the denominator must be unsigned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            Some((n, d)) => {
                if d.starts_with('-') {
                    return Err(NumError::Malformed(s.to_string()));
                }
                let n = parse_int(n, s)?;
                let d = parse_int(d, s)?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(parse_int(s, s)?)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}
