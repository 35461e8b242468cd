//! Scalar backends for method coefficients.
//!
//! Integer methods are checked in exact rational arithmetic, where an order
//! condition holds only if the coefficient is literally zero. Irrational
//! methods use binary floating point (or the double-double type in
//! [`crate::dd`]) and compare against a tolerance scaled by the size of the
//! method.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact rational coefficient type.
pub type Rational = BigRational;

/// Coefficient arithmetic used by every method-level algorithm.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and zero tests are literal.
    const EXACT: bool;

    /// Relative zero tolerance for inexact backends.
    fn tolerance() -> f64;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// Parses a signed integer, a decimal (`-0.25`) or a ratio (`3/4`).
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Canonical text used by the method notation. Must parse back to the same value.
    fn to_notation(&self) -> String;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powi(&self, p: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..p {
            out = out * self.clone();
        }
        out
    }

    /// Zero test. Exact backends require literal zero; inexact ones accept
    /// `|x| <= tolerance * scale`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= Self::tolerance() * scale
        }
    }
}

/// Real scalars with the roots needed by the closed-form irrational methods.
pub trait Real: Scalar + Copy {
    fn from_f64(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn cbrt(self) -> Self;
}

/// Splits `[sign] digits [. digits]` into (negative, integer digits, fraction digits).
fn split_decimal(text: &str) -> Option<(bool, &str, &str)> {
    let text = text.trim();
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((neg, int, frac))
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn tolerance() -> f64 {
        0.0
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            return Some(BigRational::new(num, den));
        }
        let (neg, int, frac) = split_decimal(text)?;
        let digits = format!("{int}{frac}");
        let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(num, den);
        Some(if neg { -q } else { q })
    }

    fn to_notation(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> f64 {
        1e-12
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let q = Rational::parse_decimal(&format!("{num}/{den}"))?;
            return Some(Scalar::to_f64(&q));
        }
        split_decimal(text)?;
        text.trim().parse().ok()
    }

    fn to_notation(&self) -> String {
        // Display for f64 is the shortest round-trip form and never uses an exponent.
        format!("{self}")
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> f64 {
        1e-5
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        <f64 as Scalar>::parse_decimal(text).map(|v| v as f32)
    }

    fn to_notation(&self) -> String {
        format!("{self}")
    }

    fn abs(&self) -> Self {
        f32::abs(*self)
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn cbrt(self) -> Self {
        f64::cbrt(self)
    }
}

/// Converts between scalar backends through the exact rational when possible.
pub fn convert<S: Scalar, T: Scalar>(value: &S) -> T {
    if S::EXACT || !T::EXACT {
        if let Some(v) = T::parse_decimal(&value.to_notation()) {
            return v;
        }
    }
    // Float -> exact: take the binary value exactly.
    let f = value.to_f64();
    match BigRational::from_float(f) {
        Some(q) => T::parse_decimal(&q.to_notation()).expect("rational notation parses"),
        None => T::parse_decimal("0").expect("zero parses"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parses_decimals_exactly() {
        let q = Rational::parse_decimal("-0.125").unwrap();
        assert_eq!(q, Rational::from_ratio(-1, 8));
        assert_eq!(Rational::parse_decimal("3/6").unwrap(), Rational::from_ratio(1, 2));
        assert_eq!(Rational::parse_decimal("+7").unwrap(), Rational::from_i64(7));
        assert!(Rational::parse_decimal("1/0").is_none());
        assert!(Rational::parse_decimal("abc").is_none());
        assert!(Rational::parse_decimal(".").is_none());
    }

    #[test]
    fn notation_round_trips() {
        for s in ["5", "-13", "7/3", "-1/2"] {
            let q = Rational::parse_decimal(s).unwrap();
            assert_eq!(q.to_notation(), s);
        }
        let x = 0.451_525_513_208_585_75_f64;
        assert_eq!(<f64 as Scalar>::parse_decimal(&x.to_notation()), Some(x));
        assert_eq!((1e-9_f64).to_notation(), "0.000000001");
    }

    #[test]
    fn negligible_is_literal_for_exact() {
        assert!(Rational::zero().is_negligible(1.0));
        assert!(!Rational::from_ratio(1, 1_000_000_000).is_negligible(1e9));
        assert!(1e-13_f64.is_negligible(1.0));
        assert!(!1e-11_f64.is_negligible(1.0));
        assert!(1e-11_f64.is_negligible(100.0));
    }

    #[test]
    fn convert_between_backends() {
        let q = Rational::from_ratio(3, 4);
        let f: f64 = convert(&q);
        assert_eq!(f, 0.75);
        let back: Rational = convert(&0.1_f64);
        assert_eq!(Scalar::to_f64(&back), 0.1);
    }
}
