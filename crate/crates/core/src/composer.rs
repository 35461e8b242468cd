//! Building higher-order methods from lower-order ones.
//!
//! Doubling: an odd-order method followed by its transpose gains one order.
//! Raising: a method `M` of order `o` composed as blocks `M(b_j)` (or their
//! inverses for `beta_j = -1`) gains at least one order when
//! `sum beta_j b_j > 0` and `sum beta_j b_j^{o+1} = 0`. A palindromic
//! schedule over a self-transpose `M` gains two.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::method::{Method, MethodError, Sign};
use crate::scalar::{convert, Rational, Scalar};
use crate::sigma::{order_of, OrderReport, ENGINE_CEILING};

/// One block of a schedule: `(beta_j, b_j)`.
pub type Step = (Sign, Rational);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComposeError {
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule needs sum beta b > 0, got {0}")]
    NonPositiveSum(String),
    #[error("schedule needs sum beta b^{power} = 0, got {value}")]
    NonVanishingPower { power: u32, value: String },
    #[error("base method has order 0")]
    NoOrder,
    #[error("no palindromic arrangement: {0} values occur an odd number of times")]
    NotPalindromic(usize),
    #[error("target order {0} is beyond what can be certified")]
    Unreachable(u32),
    #[error(transparent)]
    Method(#[from] MethodError),
}

/// `m` followed by its transpose.
pub fn double_to_even<S: Scalar>(m: &Method<S>) -> Method<S> {
    let o = order_of(m).achieved_order;
    if o.is_multiple_of(2) {
        log::warn!("doubling a method of even order {o}; the order will not improve");
    }
    m.concat(&m.transpose())
}

fn check_schedule(schedule: &[Step], order: u32) -> Result<(), ComposeError> {
    if schedule.is_empty() {
        return Err(ComposeError::EmptySchedule);
    }
    let sum = schedule.iter().fold(Rational::zero(), |acc, (s, b)| acc + s.apply(b.clone()));
    if !sum.is_positive() {
        return Err(ComposeError::NonPositiveSum(sum.to_string()));
    }
    let power = order + 1;
    let pw = schedule
        .iter()
        .fold(Rational::zero(), |acc, (s, b)| acc + s.apply(num_traits::pow(b.clone(), power as usize)));
    if !pw.is_zero() {
        return Err(ComposeError::NonVanishingPower { power, value: pw.to_string() });
    }
    Ok(())
}

/// Composes `m` (of order `order`) over `schedule`, validated exactly.
pub fn raise_order_from<S: Scalar>(m: &Method<S>, order: u32, schedule: &[Step]) -> Result<Method<S>, ComposeError> {
    if order == 0 {
        return Err(ComposeError::NoOrder);
    }
    check_schedule(schedule, order)?;
    let mut out: Option<Method<S>> = None;
    for (beta, b) in schedule {
        let scaled = m.scale(&convert::<Rational, S>(b))?;
        let block = match beta {
            Sign::Plus => scaled,
            Sign::Minus => scaled.inverse(),
        };
        out = Some(match out {
            None => block,
            Some(acc) => acc.concat(&block),
        });
    }
    Ok(out.expect("schedule is nonempty"))
}

/// [`raise_order_from`] with the order measured by the engine.
pub fn raise_order<S: Scalar>(m: &Method<S>, schedule: &[Step]) -> Result<Method<S>, ComposeError> {
    raise_order_from(m, order_of(m).achieved_order, schedule)
}

/// Orders a schedule so it reads the same backwards.
pub fn make_palindromic(schedule: &[Step]) -> Result<Vec<Step>, ComposeError> {
    let mut sorted: Vec<Step> = schedule.to_vec();
    sorted.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    let mut groups: Vec<(Step, usize)> = Vec::new();
    for s in sorted {
        match groups.last_mut() {
            Some((g, k)) if *g == s => *k += 1,
            _ => groups.push((s, 1)),
        }
    }
    let odd: Vec<&Step> = groups.iter().filter(|(_, k)| k % 2 == 1).map(|(s, _)| s).collect();
    if odd.len() > 1 {
        return Err(ComposeError::NotPalindromic(odd.len()));
    }
    let mut half = Vec::new();
    for (s, k) in &groups {
        for _ in 0..k / 2 {
            half.push(s.clone());
        }
    }
    let mut out = half.clone();
    if let Some(c) = odd.first() {
        out.push((*c).clone());
    }
    out.extend(half.into_iter().rev());
    Ok(out)
}

/// `2^{o+1}` unit blocks plus one block of size 2 that cancels order `o+1`.
pub fn default_schedule(order: u32) -> Vec<Step> {
    let copies = 1usize << (order + 1);
    let mut out = vec![(Sign::Plus, Rational::one()); copies];
    if order.is_multiple_of(2) {
        out.push((Sign::Plus, Rational::from_i64(-2)));
    } else {
        out.push((Sign::Minus, Rational::from_i64(2)));
    }
    make_palindromic(&out).expect("one odd group")
}

#[derive(Clone, Debug)]
pub struct Composition {
    pub method: Method<Rational>,
    pub engine: OrderReport,
    /// Order known from construction. Equals the engine order below the
    /// ceiling; above it, the parity argument for self-transpose methods.
    pub certified_order: u32,
}

/// Certified order of a method whose engine report is `report`.
pub fn certify(m: &Method<Rational>, report: &OrderReport) -> u32 {
    if report.at_ceiling() && m.is_self_transpose() {
        // Self-transpose methods have even order.
        ENGINE_CEILING + 1
    } else {
        report.achieved_order
    }
}

/// Doubles or raises `base` until it reaches `target` order.
pub fn compose_auto(base: &Method<Rational>, target: u32) -> Result<Composition, ComposeError> {
    let mut m = base.clone();
    let mut report = order_of(&m);
    let mut known = certify(&m, &report);
    if known == 0 {
        return Err(ComposeError::NoOrder);
    }
    if target > ENGINE_CEILING + 1 {
        return Err(ComposeError::Unreachable(target));
    }
    while known < target {
        let symmetric = m.is_self_transpose();
        let next = if known % 2 == 1 && !symmetric {
            double_to_even(&m)
        } else {
            raise_order_from(&m, known, &default_schedule(known))?
        };
        let gain = if next.is_self_transpose() && known.is_multiple_of(2) { 2 } else { 1 };
        m = next;
        report = order_of(&m);
        known = if report.at_ceiling() { (known + gain).max(certify(&m, &report)) } else { report.achieved_order };
    }
    Ok(Composition { certified_order: known, method: m, engine: report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{format_method, parse_method};
    use crate::sigma::{sigma_vector, Label};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn doubling_first_order() {
        let m = parse_method::<Rational>("(1)").unwrap();
        assert_eq!(format_method(&double_to_even(&m)), "(1)(1)^T");
    }

    #[test]
    fn palindrome() {
        let mut s = vec![(Sign::Plus, q(1)); 8];
        s.insert(0, (Sign::Plus, q(-2)));
        let p = make_palindromic(&s).unwrap();
        let vals: Vec<i64> = p.iter().map(|(_, b)| Scalar::to_f64(b) as i64).collect();
        assert_eq!(vals, vec![1, 1, 1, 1, -2, 1, 1, 1, 1]);
        assert_eq!(make_palindromic(&[(Sign::Plus, q(1))]).unwrap().len(), 1);
        assert!(make_palindromic(&[(Sign::Plus, q(1)), (Sign::Plus, q(2))]).is_err());
    }

    #[test]
    fn fourth_order_from_pairs() {
        let base = parse_method::<Rational>("(1)(1)^T").unwrap();
        let m = raise_order(&base, &default_schedule(2)).unwrap();
        assert_eq!(m.len(), 18);
        assert_eq!(order_of(&m).achieved_order, 4);
        assert_eq!(
            format_method(&m),
            format_method(&parse_method::<Rational>("[(1)(1)^T]^4(-2)(-2)^T[(1)(1)^T]^4").unwrap())
        );
    }

    #[test]
    fn invalid_schedules() {
        let base = parse_method::<Rational>("(1)(1)^T").unwrap();
        assert!(matches!(raise_order(&base, &[(Sign::Plus, q(1))]), Err(ComposeError::NonVanishingPower { .. })));
        assert_eq!(raise_order(&base, &[]).unwrap_err(), ComposeError::EmptySchedule);
        let neg = vec![(Sign::Plus, q(-1)); 1];
        assert!(matches!(raise_order_from(&base, 2, &neg), Err(ComposeError::NonPositiveSum(_))));
    }

    #[test]
    fn odd_base_uses_inverse_block() {
        let z31 = parse_method::<Rational>("(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)").unwrap();
        let m = raise_order(&z31, &default_schedule(3)).unwrap();
        assert_eq!(m.len(), 9 * 17);
        assert!(order_of(&m).achieved_order >= 4);
    }

    #[test]
    fn auto_reaches_sixth_order() {
        let c = compose_auto(&parse_method::<Rational>("(1)").unwrap(), 6).unwrap();
        assert_eq!(c.method.len(), 594);
        assert_eq!(c.certified_order, 6);
        assert!(c.method.is_self_transpose());
        let v = sigma_vector(&c.method);
        for l in Label::ALL.into_iter().filter(|l| l.order() >= 2) {
            assert!(v.get(l).is_zero(), "{l}");
        }
    }
}
