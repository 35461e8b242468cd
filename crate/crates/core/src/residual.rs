//! Residual coefficients in the two-operator word basis, the scalar error
//! `R`, the selection metrics `L/D`, `R/D`, `Z`, and the computer-time model.
//!
//! Words are right-nested commutators of `A_1`, `A_2`:
//! `A_{klmn} = [A_k, [A_l, [A_m, A_n]]]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::method::{Method, Target};
use crate::scalar::{Rational, Scalar};
use crate::sigma::{order_of_sigma, sigma_vector, Label, OrderReport, SigmaVector, ENGINE_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    W1,
    W2,
    W12,
    W112,
    W221,
    W1221,
    W1112,
    W2221,
    W11112,
    W21112,
    W11221,
    W22112,
    W12221,
    W22221,
}

impl Word {
    pub const ALL: [Word; 14] = [
        Word::W1,
        Word::W2,
        Word::W12,
        Word::W112,
        Word::W221,
        Word::W1221,
        Word::W1112,
        Word::W2221,
        Word::W11112,
        Word::W21112,
        Word::W11221,
        Word::W22112,
        Word::W12221,
        Word::W22221,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Word::W1 => "1",
            Word::W2 => "2",
            Word::W12 => "12",
            Word::W112 => "112",
            Word::W221 => "221",
            Word::W1221 => "1221",
            Word::W1112 => "1112",
            Word::W2221 => "2221",
            Word::W11112 => "11112",
            Word::W21112 => "21112",
            Word::W11221 => "11221",
            Word::W22112 => "22112",
            Word::W12221 => "12221",
            Word::W22221 => "22221",
        }
    }

    /// Number of letters.
    pub fn order(self) -> u32 {
        self.as_str().len() as u32
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letters(self) -> Vec<usize> {
        self.as_str().bytes().map(|b| usize::from(b - b'1')).collect()
    }

    /// Words entering `R` for a method of the given order.
    pub fn residual_set(order: u32) -> Option<&'static [Word]> {
        match order {
            1 => Some(&[Word::W12]),
            2 => Some(&[Word::W112, Word::W221]),
            3 => Some(&[Word::W1112, Word::W1221, Word::W2221]),
            4 => Some(&[Word::W11112, Word::W21112, Word::W11221, Word::W22112, Word::W12221, Word::W22221]),
            _ => None,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Word {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Word::ALL.into_iter().find(|w| w.as_str() == s).ok_or_else(|| format!("unknown word `{s}`"))
    }
}

/// Expansion of each two-operator basis element `B_2^X` in words.
pub struct B2Table;

impl B2Table {
    /// Coefficients as `(word, numerator, denominator)`.
    pub fn row(label: Label) -> &'static [(Word, i64, i64)] {
        use Word::*;
        match label {
            Label::S1 => &[(W1, 1, 1), (W2, 1, 1)],
            Label::S2 => &[(W12, 1, 2)],
            Label::S3 => &[(W112, 1, 12), (W221, 1, 12)],
            Label::S12 => &[(W112, 1, 2), (W221, -1, 2)],
            Label::S4 => &[(W1221, 1, 24)],
            Label::S13 => &[(W1112, 1, 12), (W2221, 1, 12)],
            Label::S112 => &[(W1112, 1, 2), (W2221, -1, 2), (W1221, -1, 1)],
            Label::S5 => &[
                (W11112, -1, 720),
                (W21112, 2, 720),
                (W11221, 6, 720),
                (W22112, 6, 720),
                (W12221, 2, 720),
                (W22221, -1, 720),
            ],
            Label::S14 => &[(W11221, 1, 24), (W22112, -1, 24)],
            Label::S23 => &[(W21112, -1, 24), (W11221, -1, 24), (W22112, 1, 24), (W12221, 1, 24)],
            Label::S113 => &[(W11112, 1, 12), (W21112, 1, 12), (W12221, 1, 12), (W22221, 1, 12)],
            Label::S221 => &[(W21112, 1, 4), (W11221, 1, 4), (W22112, 1, 4), (W12221, 1, 4)],
            Label::S1112 => &[
                (W11112, 1, 2),
                (W21112, 1, 2),
                (W11221, -1, 1),
                (W22112, 1, 1),
                (W12221, -1, 2),
                (W22221, -1, 2),
            ],
        }
    }

    pub fn coefficient<S: Scalar>(label: Label, word: Word) -> S {
        Self::row(label)
            .iter()
            .find(|(w, _, _)| *w == word)
            .map(|&(_, n, d)| S::from_ratio(n, d))
            .unwrap_or_else(S::zero)
    }
}

/// Residual coefficients `rho_Y` for all fourteen words.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoVector<S> {
    entries: [S; 14],
}

impl<S: Scalar> RhoVector<S> {
    pub fn zero() -> Self {
        Self { entries: std::array::from_fn(|_| S::zero()) }
    }

    pub fn get(&self, w: Word) -> &S {
        &self.entries[w.index()]
    }

    pub fn set(&mut self, w: Word, v: S) {
        self.entries[w.index()] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &S)> {
        Word::ALL.into_iter().zip(self.entries.iter())
    }

    /// The same residual expressed for the method with `A_1` and `A_2`
    /// exchanged inside every unit.
    pub fn swap_entries(&self) -> Self {
        use Word::*;
        let mut out = Self::zero();
        let pairs = [
            (W1, W2, false),
            (W12, W12, true),
            (W112, W221, false),
            (W1221, W1221, true),
            (W1112, W2221, false),
            (W11112, W22221, false),
            (W21112, W12221, false),
            (W11221, W22112, false),
        ];
        for (a, b, negate) in pairs {
            let fix = |v: &S| if negate { -v.clone() } else { v.clone() };
            out.set(a, fix(self.get(b)));
            out.set(b, fix(self.get(a)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: std::collections::BTreeMap<&str, String> =
            self.iter().map(|(w, v)| (w.as_str(), v.to_notation())).collect();
        serde_json::to_value(map).expect("map serializes")
    }
}

/// Closed-form residuals.
pub fn rho_vector<S: Scalar>(s: &SigmaVector<S>) -> RhoVector<S> {
    use Label::*;
    use Word::*;
    let g = |l: Label| s.get(l).clone();
    let r = |n: i64, d: i64| S::from_ratio(n, d);
    let mut out = RhoVector::zero();
    out.set(W1, g(S1));
    out.set(W2, g(S1));
    out.set(W12, g(S2) * r(1, 2));
    out.set(W112, g(S3) * r(1, 12) + g(S12) * r(1, 2));
    out.set(W221, g(S3) * r(1, 12) - g(S12) * r(1, 2));
    out.set(W1112, g(S13) * r(1, 12) + g(S112) * r(1, 2));
    out.set(W1221, g(S4) * r(1, 24) - g(S112));
    out.set(W2221, g(S13) * r(1, 12) - g(S112) * r(1, 2));
    out.set(W11112, -(g(S5) * r(1, 720)) + g(S113) * r(1, 12) + g(S1112) * r(1, 2));
    out.set(
        W21112,
        g(S5) * r(1, 360) - g(S23) * r(1, 24) + g(S113) * r(1, 12) + g(S221) * r(1, 4) + g(S1112) * r(1, 2),
    );
    out.set(W11221, g(S5) * r(1, 120) + g(S14) * r(1, 24) - g(S23) * r(1, 24) + g(S221) * r(1, 4) - g(S1112));
    out.set(W22112, g(S5) * r(1, 120) - g(S14) * r(1, 24) + g(S23) * r(1, 24) + g(S221) * r(1, 4) + g(S1112));
    out.set(
        W12221,
        g(S5) * r(1, 360) + g(S23) * r(1, 24) + g(S113) * r(1, 12) + g(S221) * r(1, 4) - g(S1112) * r(1, 2),
    );
    out.set(W22221, -(g(S5) * r(1, 720)) + g(S113) * r(1, 12) - g(S1112) * r(1, 2));
    out
}

/// Residuals by contracting `sigma` with [`B2Table`].
pub fn rho_by_contraction<S: Scalar>(s: &SigmaVector<S>) -> RhoVector<S> {
    let mut out = RhoVector::<S>::zero();
    for (label, value) in s.iter() {
        for &(w, n, d) in B2Table::row(label) {
            let cur = out.get(w).clone();
            out.set(w, cur + value.clone() * S::from_ratio(n, d));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("residual norm is defined for orders 1..=4, got {0}")]
    UnsupportedOrder(u32),
    #[error("D must be positive (got {0})")]
    NonPositiveD(String),
    #[error("error budget E must be positive")]
    NonPositiveBudget,
    #[error("cost model parameter `{0}` must be positive")]
    BadParameter(&'static str),
    #[error("residual R is unavailable or zero, so no time step follows from the budget")]
    NoResidual,
}

/// `R = sqrt(sum rho_Y^2)` over the words one order above `order`.
pub fn scalar_r<S: Scalar>(rho: &RhoVector<S>, order: u32) -> Result<f64, MetricsError> {
    let words = Word::residual_set(order).ok_or(MetricsError::UnsupportedOrder(order))?;
    Ok(words.iter().map(|&w| rho.get(w).to_f64().powi(2)).sum::<f64>().sqrt())
}

/// Everything reported about one method.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodReport<S> {
    /// `sigma^1` for sum targets, `sigma^2` for commutator targets.
    pub d: S,
    pub l: S,
    pub i: usize,
    /// `None` at the engine ceiling, where no residual words are tracked.
    pub r: Option<f64>,
    pub l_over_d: f64,
    pub r_over_d: Option<f64>,
    /// Sum targets only.
    pub z: Option<f64>,
    pub order: OrderReport,
    pub sigma: SigmaVector<S>,
    pub rho: RhoVector<S>,
}

impl<S: Scalar> MethodReport<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.order.target,
            "order": self.order.achieved_order,
            "order_text": self.order.order_text(),
            "reversed": self.order.reversed,
            "D": self.d.to_notation(),
            "L": self.l.to_notation(),
            "I": self.i,
            "R": self.r,
            "L/D": self.l_over_d,
            "R/D": self.r_over_d,
            "Z": self.z,
            "sigma": self.sigma.to_json(),
            "rho": self.rho.to_json(),
        })
    }
}

/// Metrics for a method against its own target.
pub fn report<S: Scalar>(m: &Method<S>) -> Result<MethodReport<S>, MetricsError> {
    let sigma = sigma_vector(m);
    let l = m.total_weight();
    let order = order_of_sigma(&sigma, l.to_f64(), m.target());
    let d = match m.target() {
        Target::Sum => sigma.get(Label::S1).clone(),
        Target::Commutator => sigma.get(Label::S2).clone(),
    };
    if d <= S::zero() {
        return Err(MetricsError::NonPositiveD(d.to_notation()));
    }
    let rho = rho_vector(&sigma);
    let df = d.to_f64();
    let o = order.achieved_order;
    let r = if (1..ENGINE_CEILING).contains(&o) { Some(scalar_r(&rho, o)?) } else { None };
    let r_over_d = r.map(|r| r / df);
    let i = m.len();
    let z = match (m.target(), r_over_d) {
        (Target::Sum, Some(rd)) => Some(i as f64 / df * rd.powf(1.0 / f64::from(o))),
        _ => None,
    };
    Ok(MethodReport { l_over_d: l.to_f64() / df, d, l, i, r, r_over_d, z, order, sigma, rho })
}

/// Parameters of the computer-time model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Time to switch gates, in seconds.
    pub t_g: f64,
    /// Hardware coupling proportionality.
    pub b: f64,
    /// Physical evolution time.
    pub t_p: f64,
    /// Error budget.
    pub e: f64,
    /// Smallest usable time step.
    pub epsilon: Option<f64>,
    /// Operator terms per unit.
    pub n_terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    SwitchDominated,
    ApplicationDominated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputerTime {
    pub t_c: f64,
    pub regime: Regime,
    pub dt: f64,
    /// Number of method applications (may be fractional).
    pub n: f64,
}

/// `T_c = n (I N t_g + L N b dt)` with `n = T_p / (D dt)` and `dt` from the
/// error budget `E = n R dt^{o+1}`, clamped below by `epsilon`.
pub fn computer_time<S: Scalar>(rep: &MethodReport<S>, cm: &CostModel) -> Result<ComputerTime, MetricsError> {
    let d = rep.d.to_f64();
    if d <= 0.0 {
        return Err(MetricsError::NonPositiveD(rep.d.to_notation()));
    }
    if cm.e <= 0.0 {
        return Err(MetricsError::NonPositiveBudget);
    }
    if cm.t_p <= 0.0 {
        return Err(MetricsError::BadParameter("t_p"));
    }
    if cm.t_g < 0.0 || cm.b < 0.0 {
        return Err(MetricsError::BadParameter(if cm.t_g < 0.0 { "t_g" } else { "b" }));
    }
    if cm.n_terms == 0 {
        return Err(MetricsError::BadParameter("n_terms"));
    }
    if matches!(cm.epsilon, Some(eps) if eps <= 0.0) {
        return Err(MetricsError::BadParameter("epsilon"));
    }
    let r = match rep.r {
        Some(r) if r > 0.0 => r,
        _ => return Err(MetricsError::NoResidual),
    };
    let o = f64::from(rep.order.achieved_order);
    let dt_budget = (cm.e * d / (cm.t_p * r)).powf(1.0 / o);
    let (dt, regime) = match cm.epsilon {
        Some(eps) if dt_budget < eps => (eps, Regime::ApplicationDominated),
        _ => (dt_budget, Regime::SwitchDominated),
    };
    let n = cm.t_p / (d * dt);
    let nn = cm.n_terms as f64;
    let t_c = n * (rep.i as f64 * nn * cm.t_g + rep.l.to_f64() * nn * cm.b * dt);
    Ok(ComputerTime { t_c, regime, dt, n })
}

/// Rounds half away from zero to `decimals` places and prints with exactly
/// that many decimals. A result of zero never carries a minus sign.
pub fn format_fixed(q: &Rational, decimals: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), decimals);
    let scaled = q * Rational::from_integer(scale.clone());
    let (int, frac) = (scaled.trunc(), Signed::abs(&scaled.fract()));
    let mut n = int.to_integer();
    if frac >= Rational::new(BigInt::from(1), BigInt::from(2)) {
        if scaled.is_negative() {
            n -= 1;
        } else {
            n += 1;
        }
    }
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = if digits.len() <= decimals { format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits) } else { digits };
    let (ip, fp) = digits.split_at(digits.len() - decimals);
    let mut s = String::new();
    if neg && !n.is_zero() {
        s.push('-');
    }
    s.push_str(ip);
    if decimals > 0 {
        s.push('.');
        s.push_str(fp);
    }
    s
}

/// [`format_fixed`] on the exact binary value of `x`.
pub fn format_fixed_f64(x: f64, decimals: usize) -> String {
    match Rational::from_float(x) {
        Some(q) => format_fixed(&q, decimals),
        None => format!("{x}"),
    }
}

/// Rounds half away from zero, returned as `f64`.
pub fn round_half_up(x: f64, decimals: usize) -> f64 {
    format_fixed_f64(x, decimals).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_method;

    fn rep(s: &str) -> MethodReport<Rational> {
        report(&parse_method::<Rational>(s).unwrap()).unwrap()
    }

    #[test]
    fn contraction_matches_closed_form() {
        let m = parse_method::<Rational>("(3)(-4)^T(1)(5/2)(2)^T(1)(-7)").unwrap();
        let s = sigma_vector(&m);
        assert_eq!(rho_vector(&s), rho_by_contraction(&s));
    }

    #[test]
    fn first_catalog_row() {
        let r = rep("(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)");
        assert_eq!(r.order.achieved_order, 3);
        assert_eq!(r.d, Rational::from_i64(6));
        assert_eq!(r.l, Rational::from_i64(10));
        assert_eq!(r.i, 9);
        assert_eq!(*r.rho.get(Word::W1112), Rational::from_i64(-1));
        assert_eq!(*r.rho.get(Word::W1221), Rational::from_ratio(1, 2));
        assert_eq!(*r.rho.get(Word::W2221), Rational::from_i64(0));
        assert!((r.r.unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(format_fixed_f64(r.r_over_d.unwrap(), 1), "0.2");
        assert_eq!(format_fixed_f64(r.z.unwrap(), 1), "0.9");
    }

    #[test]
    fn constant_sigma_only() {
        let mut s = SigmaVector::<Rational>::zero();
        s.set(Label::S1, Rational::from_i64(3));
        let r = rho_vector(&s);
        for (w, v) in r.iter() {
            let expect = if matches!(w, Word::W1 | Word::W2) { 3 } else { 0 };
            assert_eq!(*v, Rational::from_i64(expect));
        }
        assert_eq!(scalar_r(&r, 3).unwrap(), 0.0);
        assert_eq!(scalar_r(&r, 5), Err(MetricsError::UnsupportedOrder(5)));
    }

    #[test]
    fn swap_is_involution() {
        let m = parse_method::<Rational>("(1)^T(2)(3)^T(1)^T(-4)(3)^T(3)(-4)^T(1)(3)(2)^T(1)").unwrap();
        let rho = rho_vector(&sigma_vector(&m));
        assert_eq!(rho.swap_entries().swap_entries(), rho);
        assert_eq!(rho.swap_entries().get(Word::W11112), rho.get(Word::W22221));
    }

    #[test]
    fn rounding() {
        let q = |n, d| Rational::from_ratio(n, d);
        assert_eq!(format_fixed(&q(1, 20), 1), "0.1");
        assert_eq!(format_fixed(&q(-1, 20), 1), "-0.1");
        assert_eq!(format_fixed(&q(-1, 30), 1), "0.0");
        assert_eq!(format_fixed(&q(5, 3), 2), "1.67");
        assert_eq!(format_fixed(&q(12, 1), 0), "12");
        assert_eq!(format_fixed(&q(-414, 1_000_000), 6), "-0.000414");
        assert_eq!(round_half_up(0.186, 1), 0.2);
    }

    #[test]
    fn cost_model_limits() {
        let r = rep("(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)");
        let base = CostModel { t_g: 0.0, b: 2.0, t_p: 5.0, e: 1e-3, epsilon: None, n_terms: 3 };
        let t = computer_time(&r, &base).unwrap();
        assert!((t.t_c - 10.0 * 2.0 * 5.0 / 6.0 * 3.0).abs() < 1e-9);
        let sw = CostModel { t_g: 1.0, b: 0.0, ..base.clone() };
        let t = computer_time(&r, &sw).unwrap();
        let z = r.z.unwrap();
        let expect = (5.0f64.powi(4) / 1e-3).powf(1.0 / 3.0) * z * 3.0;
        assert!((t.t_c - expect).abs() < 1e-9 * expect);
        assert_eq!(t.regime, Regime::SwitchDominated);
        let clamp = CostModel { epsilon: Some(1.0), ..sw };
        assert_eq!(computer_time(&r, &clamp).unwrap().regime, Regime::ApplicationDominated);
        let bad = CostModel { e: 0.0, ..base };
        assert_eq!(computer_time(&r, &bad), Err(MetricsError::NonPositiveBudget));
    }
}
