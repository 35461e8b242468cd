//! Coefficients `sigma^X` of the logarithm of a method.
//!
//! For a method of `I` units the logarithm of the product is
//! `sum_X sigma^X B^X` where the `B^X` are fixed nested commutators of the
//! operator terms. `sigma^X` is computed from prefix sums of `alpha_i a_i^p`
//! through order five. Every recurrence is written in expanded form so no
//! division by a coefficient occurs and exact rationals stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::method::{Method, Target};
use crate::scalar::Scalar;

/// Highest order the engine can certify.
pub const ENGINE_CEILING: u32 = 5;

/// Basis labels `X`. The order of a label is the sum of its digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    S1,
    S2,
    S3,
    S12,
    S4,
    S13,
    S112,
    S5,
    S14,
    S23,
    S113,
    S221,
    S1112,
}

impl Label {
    pub const ALL: [Label; 13] = [
        Label::S1,
        Label::S2,
        Label::S3,
        Label::S12,
        Label::S4,
        Label::S13,
        Label::S112,
        Label::S5,
        Label::S14,
        Label::S23,
        Label::S113,
        Label::S221,
        Label::S1112,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::S1 => "1",
            Label::S2 => "2",
            Label::S3 => "3",
            Label::S12 => "12",
            Label::S4 => "4",
            Label::S13 => "13",
            Label::S112 => "112",
            Label::S5 => "5",
            Label::S14 => "14",
            Label::S23 => "23",
            Label::S113 => "113",
            Label::S221 => "221",
            Label::S1112 => "1112",
        }
    }

    pub fn order(self) -> u32 {
        self.as_str().bytes().map(|b| u32::from(b - b'0')).sum()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Labels of exactly the given order.
    pub fn of_order(order: u32) -> impl Iterator<Item = Label> {
        Label::ALL.into_iter().filter(move |l| l.order() == order)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = SigmaError;
    fn from_str(s: &str) -> Result<Self, SigmaError> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| SigmaError::InvalidLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("power {0} outside 1..=5")]
    PowerOutOfRange(u32),
    #[error("`{0}` is not a valid label here")]
    InvalidLabel(String),
}

/// All thirteen `sigma^X` of one method.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaVector<S> {
    entries: [S; 13],
}

impl<S: Scalar> SigmaVector<S> {
    pub fn get(&self, label: Label) -> &S {
        &self.entries[label.index()]
    }

    pub fn set(&mut self, label: Label, value: S) {
        self.entries[label.index()] = value;
    }

    pub fn zero() -> Self {
        Self { entries: std::array::from_fn(|_| S::zero()) }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &S)> {
        Label::ALL.into_iter().zip(self.entries.iter())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SigmaVector<T> {
        SigmaVector { entries: std::array::from_fn(|i| f(&self.entries[i])) }
    }

    /// JSON object keyed by label.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<&str, String> = self.iter().map(|(l, v)| (l.as_str(), v.to_notation())).collect();
        serde_json::to_value(map).expect("map serializes")
    }
}

/// `a^1 .. a^5` for one unit, each multiplied by `alpha`.
fn weighted_powers<S: Scalar>(alpha: crate::method::Sign, a: &S) -> [S; 5] {
    let mut out: [S; 5] = std::array::from_fn(|_| S::zero());
    let mut pw = a.clone();
    for slot in out.iter_mut() {
        *slot = alpha.apply(pw.clone());
        pw = pw * a.clone();
    }
    out
}

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

/// `sum_i alpha_i a_i^q (P_i + P_{i-1})` for prefix sums `P` of power `p`.
fn pair_sum<S: Scalar>(w: &[[S; 5]], p: usize, q: usize) -> S {
    let mut prev = S::zero();
    let mut acc = S::zero();
    for row in w {
        let cur = prev.clone() + row[p - 1].clone();
        acc = acc + row[q - 1].clone() * (cur.clone() + prev);
        prev = cur;
    }
    acc
}

/// `sum_i alpha_i a_i^q (P_i^2 + P_i P_{i-1} + P_{i-1}^2)`.
fn triple_sum<S: Scalar>(w: &[[S; 5]], p: usize, q: usize) -> S {
    let mut prev = S::zero();
    let mut acc = S::zero();
    for row in w {
        let cur = prev.clone() + row[p - 1].clone();
        let t = cur.clone() * cur.clone() + cur.clone() * prev.clone() + prev.clone() * prev;
        acc = acc + row[q - 1].clone() * t;
        prev = cur;
    }
    acc
}

/// `sum_i alpha_i a_i^2 (P^3 + P^2 P' + P P'^2 + P'^3)` with `P` the order-1 prefix sum.
fn quad_sum<S: Scalar>(w: &[[S; 5]]) -> S {
    let mut prev = S::zero();
    let mut acc = S::zero();
    for row in w {
        let cur = prev.clone() + row[0].clone();
        let c2 = cur.clone() * cur.clone();
        let p2 = prev.clone() * prev.clone();
        let t = c2.clone() * cur.clone() + c2 * prev.clone() + cur.clone() * p2.clone() + p2 * prev;
        acc = acc + row[1].clone() * t;
        prev = cur;
    }
    acc
}

/// Shared state of one evaluation.
struct Engine<S> {
    w: Vec<[S; 5]>,
    sp: [S; 5],
}

impl<S: Scalar> Engine<S> {
    fn from_method(m: &Method<S>) -> Self {
        let w: Vec<[S; 5]> = m.units().iter().map(|u| weighted_powers(u.alpha(), u.a())).collect();
        let mut sp: [S; 5] = std::array::from_fn(|_| S::zero());
        for row in &w {
            for (s, x) in sp.iter_mut().zip(row) {
                *s = s.clone() + x.clone();
            }
        }
        Self { w, sp }
    }

    fn s(&self, p: usize) -> S {
        self.sp[p - 1].clone()
    }

    fn pq(&self, p: usize, q: usize) -> S {
        half::<S>() * (pair_sum(&self.w, p, q) - self.s(p) * self.s(q))
    }

    /// `sigma^{ppq}` given `sigma^{pq}` (with `sigma^{21} = -sigma^{12}`).
    fn ppq(&self, p: usize, q: usize, s_pq: &S) -> S {
        let sp = self.s(p);
        let sixth = S::from_ratio(1, 6);
        -(half::<S>() * sp.clone() * s_pq.clone()) - sixth.clone() * sp.clone() * sp * self.s(q)
            + sixth * triple_sum(&self.w, p, q)
    }

    fn s1112(&self, s112: &S, s12: &S) -> S {
        let s1 = self.s(1);
        let s1sq = s1.clone() * s1.clone();
        let r24 = S::from_ratio(1, 24);
        -(half::<S>() * s1.clone() * s112.clone())
            - S::from_ratio(1, 6) * s1sq.clone() * s12.clone()
            - r24.clone() * s1sq * s1 * self.s(2)
            + r24 * quad_sum(&self.w)
    }

    fn vector(&self) -> SigmaVector<S> {
        let mut v = SigmaVector::zero();
        for (p, l) in [(1, Label::S1), (2, Label::S2), (3, Label::S3), (4, Label::S4), (5, Label::S5)] {
            v.set(l, self.s(p));
        }
        let s12 = self.pq(1, 2);
        v.set(Label::S13, self.pq(1, 3));
        v.set(Label::S14, self.pq(1, 4));
        v.set(Label::S23, self.pq(2, 3));
        let s112 = self.ppq(1, 2, &s12);
        v.set(Label::S113, self.ppq(1, 3, v.get(Label::S13)));
        v.set(Label::S221, self.ppq(2, 1, &-s12.clone()));
        v.set(Label::S1112, self.s1112(&s112, &s12));
        v.set(Label::S12, s12);
        v.set(Label::S112, s112);
        v
    }
}

/// `sigma^p = sum_i alpha_i a_i^p`.
pub fn sigma_p<S: Scalar>(m: &Method<S>, p: u32) -> Result<S, SigmaError> {
    if !(1..=5).contains(&p) {
        return Err(SigmaError::PowerOutOfRange(p));
    }
    Ok(Engine::from_method(m).s(p as usize))
}

/// `sigma^{pq}` for `pq` in {12, 13, 14, 23}.
pub fn sigma_pq<S: Scalar>(m: &Method<S>, label: Label) -> Result<S, SigmaError> {
    let (p, q) = match label {
        Label::S12 => (1, 2),
        Label::S13 => (1, 3),
        Label::S14 => (1, 4),
        Label::S23 => (2, 3),
        other => return Err(SigmaError::InvalidLabel(other.to_string())),
    };
    Ok(Engine::from_method(m).pq(p, q))
}

/// `sigma^{ppq}` for `ppq` in {112, 113, 221}.
pub fn sigma_ppq<S: Scalar>(m: &Method<S>, label: Label) -> Result<S, SigmaError> {
    let e = Engine::from_method(m);
    Ok(match label {
        Label::S112 => e.ppq(1, 2, &e.pq(1, 2)),
        Label::S113 => e.ppq(1, 3, &e.pq(1, 3)),
        Label::S221 => e.ppq(2, 1, &-e.pq(1, 2)),
        other => return Err(SigmaError::InvalidLabel(other.to_string())),
    })
}

pub fn sigma_1112<S: Scalar>(m: &Method<S>) -> S {
    let e = Engine::from_method(m);
    let s12 = e.pq(1, 2);
    e.s1112(&e.ppq(1, 2, &s12), &s12)
}

/// All labels in one pass over the units.
pub fn sigma_vector<S: Scalar>(m: &Method<S>) -> SigmaVector<S> {
    Engine::from_method(m).vector()
}

/// Result of checking the order conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub target: Target,
    /// 0 when the base conditions fail; capped at [`ENGINE_CEILING`].
    pub achieved_order: u32,
    /// Labels one order above `achieved_order` that do not vanish
    /// (for order 0, the base labels that failed).
    pub leading_nonzero_labels: Vec<String>,
    /// Commutator methods only: `sigma^2 < 0`, so the method realizes the
    /// reversed gate `exp([A_2, A_1])`.
    pub reversed: bool,
}

impl OrderReport {
    pub fn at_ceiling(&self) -> bool {
        self.achieved_order >= ENGINE_CEILING
    }

    /// "3", or "≥5" at the engine ceiling.
    pub fn order_text(&self) -> String {
        if self.at_ceiling() {
            format!(">={ENGINE_CEILING}")
        } else {
            self.achieved_order.to_string()
        }
    }
}

fn vanishes<S: Scalar>(v: &S, l_weight: f64, label: Label) -> bool {
    v.is_negligible(l_weight.powi(label.order() as i32).max(1.0))
}

/// Order check against the method's own target.
pub fn order_of<S: Scalar>(m: &Method<S>) -> OrderReport {
    order_of_sigma(&sigma_vector(m), m.total_weight().to_f64(), m.target())
}

/// Order check from precomputed coefficients. `l_weight` is `L = sum |a_i|`,
/// the scale for the float zero tolerance.
pub fn order_of_sigma<S: Scalar>(v: &SigmaVector<S>, l_weight: f64, target: Target) -> OrderReport {
    let zero = |l: Label| vanishes(v.get(l), l_weight, l);
    let (base_ok, failed, start, reversed) = match target {
        Target::Sum => {
            let ok = *v.get(Label::S1) > S::zero() && !zero(Label::S1);
            (ok, vec![Label::S1], 2, false)
        }
        Target::Commutator => {
            let s2 = v.get(Label::S2);
            let ok = zero(Label::S1) && !zero(Label::S2);
            let mut failed = Vec::new();
            if !zero(Label::S1) {
                failed.push(Label::S1);
            }
            if zero(Label::S2) {
                failed.push(Label::S2);
            }
            (ok, failed, 3, ok && *s2 < S::zero())
        }
    };
    if !base_ok {
        return OrderReport {
            target,
            achieved_order: 0,
            leading_nonzero_labels: failed.iter().map(|l| l.to_string()).collect(),
            reversed: false,
        };
    }
    let mut order = start - 1;
    let mut leading = Vec::new();
    for o in start..=ENGINE_CEILING {
        let bad: Vec<Label> = Label::of_order(o).filter(|&l| !zero(l)).collect();
        if bad.is_empty() {
            order = o;
        } else {
            leading = bad;
            break;
        }
    }
    OrderReport {
        target,
        achieved_order: order,
        leading_nonzero_labels: leading.iter().map(|l| l.to_string()).collect(),
        reversed,
    }
}
