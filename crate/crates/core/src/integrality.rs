//! Necessary conditions every integer method satisfies.
//!
//! A method of sum order 3 or more contains a unit running backwards
//! (`alpha a < 0`); order 4 or more contains at least two. For integer
//! coefficients `D = sigma^1` is a multiple of 2 at order 2, of 6 at
//! orders 3 and 4, and of 30 at order 5.

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::method::{Method, Target};
use crate::scalar::Rational;
use crate::sigma::order_of;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("order {order} needs at least {need} inverse unit(s), found {found}")]
    TooFewInverses { order: u32, need: usize, found: usize },
    #[error("order {order} with integer coefficients needs D divisible by {modulus}, D = {d}")]
    Divisibility { order: u32, modulus: u32, d: String },
}

/// Minimum number of units with `alpha a < 0`.
pub fn min_inverses(order: u32) -> usize {
    match order {
        0..=2 => 0,
        3 => 1,
        _ => 2,
    }
}

/// Divisor of `D` forced by integrality, if any.
pub fn d_modulus(order: u32) -> Option<u32> {
    match order {
        0 | 1 => None,
        2 => Some(2),
        3 | 4 => Some(6),
        _ => Some(30),
    }
}

/// `true` when `d` is an integer multiple of `k`.
pub fn d_multiple_of(d: &Rational, k: u32) -> bool {
    d.is_integer() && d.to_integer().is_multiple_of(&BigInt::from(k))
}

/// Checks the inverse-count and divisibility conditions for a sum method at
/// its achieved order. Divisibility is checked only for integer coefficients.
pub fn check(m: &Method<Rational>) -> Result<u32, Violation> {
    let order = order_of(m).achieved_order;
    if m.target() != Target::Sum {
        return Ok(order);
    }
    let need = min_inverses(order);
    let found = m.inverse_count();
    if found < need {
        return Err(Violation::TooFewInverses { order, need, found });
    }
    let integer = m.units().iter().all(|u| u.a().is_integer());
    if let (true, Some(k)) = (integer, d_modulus(order)) {
        let d = m.units().iter().fold(Rational::from_integer(0.into()), |acc, u| acc + u.label());
        if !d_multiple_of(&d, k) {
            return Err(Violation::Divisibility { order, modulus: k, d: d.to_string() });
        }
    }
    Ok(order)
}
