//! Splitting methods as ordered sequences of fundamental units.
//!
//! A unit `(alpha, a)` stands for `(e^{a A_1} e^{a A_2} ... e^{a A_N})^alpha`
//! with `alpha = +-1`. The number of operator terms `N` is not part of a
//! method: every algebraic property here holds for all `N >= 2`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{convert, Scalar};

/// What a method approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `exp(A_1 + ... + A_N)`, scaled by `sigma^1`.
    Sum,
    /// `exp([A_1, A_2])`, scaled by `sigma^2`.
    Commutator,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Sum => "sum",
            Target::Commutator => "commutator",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(Target::Sum),
            "commutator" | "comm" => Ok(Target::Commutator),
            other => Err(format!("unknown target `{other}` (expected sum or commutator)")),
        }
    }
}

/// The exponent `alpha` of a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn apply<S: Scalar>(self, x: S) -> S {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MethodError {
    #[error("unit coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("a method needs at least one unit")]
    Empty,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("power must be at least 1")]
    ZeroPower,
}

/// One fundamental unit. Its displayed label is `c = alpha * a`; the
/// notation marks `alpha = -1` with a `^T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unit<S> {
    alpha: Sign,
    a: S,
}

impl<S: Scalar> Unit<S> {
    pub fn new(alpha: Sign, a: S) -> Result<Self, MethodError> {
        if a.is_zero() {
            return Err(MethodError::ZeroCoefficient);
        }
        Ok(Self { alpha, a })
    }

    /// Builds the unit written `(label)` or `(label)^T`.
    pub fn from_label(label: S, transposed: bool) -> Result<Self, MethodError> {
        if transposed {
            Self::new(Sign::Minus, -label)
        } else {
            Self::new(Sign::Plus, label)
        }
    }

    pub fn alpha(&self) -> Sign {
        self.alpha
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    /// `alpha * a`, the number shown in the notation.
    pub fn label(&self) -> S {
        self.alpha.apply(self.a.clone())
    }

    pub fn is_transposed(&self) -> bool {
        self.alpha == Sign::Minus
    }

    /// A unit with `alpha * a < 0` runs time backwards.
    pub fn is_inverse(&self) -> bool {
        self.label() < S::zero()
    }

    pub fn transposed(&self) -> Self {
        Self { alpha: self.alpha.flip(), a: -self.a.clone() }
    }

    pub fn inverted(&self) -> Self {
        Self { alpha: self.alpha.flip(), a: self.a.clone() }
    }

    pub fn convert<T: Scalar>(&self) -> Unit<T> {
        Unit { alpha: self.alpha, a: convert(&self.a) }
    }
}

#[derive(Serialize, Deserialize)]
struct UnitRecord {
    alpha: i64,
    a: String,
}

impl<S: Scalar> Serialize for Unit<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        UnitRecord { alpha: self.alpha.as_i64(), a: self.a.to_notation() }.serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Unit<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rec = UnitRecord::deserialize(deserializer)?;
        let alpha = Sign::from_i64(rec.alpha).ok_or_else(|| D::Error::custom("alpha must be +1 or -1"))?;
        let a = S::parse_decimal(&rec.a).ok_or_else(|| D::Error::custom(format!("bad coefficient `{}`", rec.a)))?;
        Unit::new(alpha, a).map_err(D::Error::custom)
    }
}

/// An ordered product of fundamental units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Method<S> {
    units: Vec<Unit<S>>,
    target: Target,
}

impl<S: Scalar> Method<S> {
    pub fn new(units: Vec<Unit<S>>, target: Target) -> Result<Self, MethodError> {
        if units.is_empty() {
            return Err(MethodError::Empty);
        }
        Ok(Self { units, target })
    }

    /// Builds a method from `(alpha, a)` pairs given as integers.
    pub fn from_pairs(pairs: &[(i64, i64)], target: Target) -> Result<Self, MethodError> {
        let units = pairs
            .iter()
            .map(|&(alpha, a)| Unit::new(Sign::from_i64(alpha).ok_or(MethodError::ZeroCoefficient)?, S::from_i64(a)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(units, target)
    }

    pub fn units(&self) -> &[Unit<S>] {
        &self.units
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    /// Number of fundamental units `I`.
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Total gate weight `L = sum |a_i|`.
    pub fn total_weight(&self) -> S {
        self.units.iter().fold(S::zero(), |acc, u| acc + u.a.abs())
    }

    /// Time advance per application, `D = sigma^1 = sum alpha_i a_i`.
    pub fn advance(&self) -> S {
        self.units.iter().fold(S::zero(), |acc, u| acc + u.label())
    }

    pub fn inverse_count(&self) -> usize {
        self.units.iter().filter(|u| u.is_inverse()).count()
    }

    /// Reversed order with every unit transposed; labels are preserved.
    pub fn transpose(&self) -> Self {
        Self {
            units: self.units.iter().rev().map(Unit::transposed).collect(),
            target: self.target,
        }
    }

    /// The operator inverse: reversed order with `alpha` negated and `a` kept.
    pub fn inverse(&self) -> Self {
        Self {
            units: self.units.iter().rev().map(Unit::inverted).collect(),
            target: self.target,
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut units = self.units.clone();
        units.extend(other.units.iter().cloned());
        Self { units, target: self.target }
    }

    /// Multiplies every `a_i` by `lambda`, keeping each `alpha_i`.
    pub fn scale(&self, lambda: &S) -> Result<Self, MethodError> {
        if lambda.is_zero() {
            return Err(MethodError::ZeroScale);
        }
        Ok(Self {
            units: self
                .units
                .iter()
                .map(|u| Unit { alpha: u.alpha, a: u.a.clone() * lambda.clone() })
                .collect(),
            target: self.target,
        })
    }

    pub fn power(&self, k: usize) -> Result<Self, MethodError> {
        if k == 0 {
            return Err(MethodError::ZeroPower);
        }
        let mut units = Vec::with_capacity(self.units.len() * k);
        for _ in 0..k {
            units.extend(self.units.iter().cloned());
        }
        Ok(Self { units, target: self.target })
    }

    pub fn is_self_transpose(&self) -> bool {
        *self == self.transpose()
    }

    pub fn convert<T: Scalar>(&self) -> Method<T> {
        Method { units: self.units.iter().map(Unit::convert).collect(), target: self.target }
    }

    /// The JSON form: a list of `{"alpha": +-1, "a": "<number>"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.units).expect("units serialize")
    }

    pub fn from_json(value: &serde_json::Value, target: Target) -> Result<Self, serde_json::Error> {
        let units: Vec<Unit<S>> = serde_json::from_value(value.clone())?;
        Self::new(units, target).map_err(serde_json::Error::custom)
    }
}

impl<S: Scalar> fmt::Display for Method<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::format_method(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn label_convention() {
        let u = Unit::from_label(q(5), true).unwrap();
        assert_eq!(u.alpha(), Sign::Minus);
        assert_eq!(*u.a(), q(-5));
        assert_eq!(u.label(), q(5));
        assert!(!u.is_inverse());
        assert!(Unit::new(Sign::Plus, q(0)).is_err());
        assert!(Unit::from_label(q(-2), true).unwrap().is_inverse());
    }

    #[test]
    fn transforms() {
        let m = Method::<Rational>::from_pairs(&[(1, 1), (-1, -1)], Target::Sum).unwrap();
        assert!(m.is_self_transpose());
        assert_eq!(m.power(4).unwrap().len(), 8);
        let s = m.scale(&q(-2)).unwrap();
        assert_eq!(s.units()[0].label(), q(-2));
        assert_eq!(s.units()[1].label(), q(-2));
        assert!(s.units()[1].is_transposed());
        assert_eq!(m.scale(&q(0)), Err(MethodError::ZeroScale));
        assert_eq!(m.power(0), Err(MethodError::ZeroPower));
        assert_eq!(Method::<Rational>::new(vec![], Target::Sum), Err(MethodError::Empty));
        let inv = m.inverse();
        assert_eq!(inv.units()[0], Unit::new(Sign::Plus, q(-1)).unwrap());
        assert_eq!(inv.units()[1], Unit::new(Sign::Minus, q(1)).unwrap());
    }

    #[test]
    fn json_shape() {
        let m = Method::<Rational>::from_pairs(&[(1, 3), (-1, 2)], Target::Sum).unwrap();
        let v = m.to_json();
        assert_eq!(v, serde_json::json!([{"alpha": 1, "a": "3"}, {"alpha": -1, "a": "2"}]));
        let back = Method::<Rational>::from_json(&v, Target::Sum).unwrap();
        assert_eq!(back, m);
        let bad = serde_json::json!([{"alpha": 2, "a": "3"}]);
        assert!(Method::<Rational>::from_json(&bad, Target::Sum).is_err());
        let zero = serde_json::json!([{"alpha": 1, "a": "0"}]);
        assert!(Method::<Rational>::from_json(&zero, Target::Sum).is_err());
    }
}
