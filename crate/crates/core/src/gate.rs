//! Product formulas for the commutator gate `exp([A_1, A_2])`.
//!
//! A commutator method has `sigma^1 = 0` and `sigma^2 != 0`; its logarithm
//! starts at `sigma^2 B^2 = (sigma^2 / 2) [A_1, A_2]`. The meaning is tied to
//! two operator terms.

use crate::method::{Method, Target};
use crate::notation::parse_method_with_target;
use crate::scalar::{Rational, Scalar};
use crate::sigma::{order_of, OrderReport};

pub const COMMUTATOR_4: &str = "(-2)^T(2)^T[(-1)(1)]^{12}[(1)(-1)]^4";

/// The 34-unit fourth-order commutator method.
pub fn commutator_method_4() -> Method<Rational> {
    parse_method_with_target(COMMUTATOR_4, Target::Commutator).expect("bundled notation parses")
}

/// Fifth order: the fourth-order method followed by its time reversal
/// `scale(M, -1)`, which keeps `sigma^2` and cancels the odd-order residue.
pub fn commutator_method_5() -> Method<Rational> {
    let m = commutator_method_4();
    let back = m.scale(&Rational::from_i64(-1)).expect("nonzero scale");
    m.concat(&back)
}

/// Order report against the commutator target, whatever `m`'s own target.
pub fn verify_commutator<S: Scalar>(m: &Method<S>) -> OrderReport {
    order_of(&m.clone().with_target(Target::Commutator))
}
