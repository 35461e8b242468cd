//! Product formulas for `exp(A_1 + ... + A_N)` and `exp([A_1, A_2])`.
//!
//! A method is an ordered list of fundamental units `(alpha, a)`. This crate
//! parses and prints the compact notation, computes the logarithm
//! coefficients `sigma^X` through fifth order, derives residuals and cost
//! metrics, searches for integer methods, solves for irrational ones,
//! composes higher orders, and runs dense-matrix benchmarks.
//!
//! All method-level algorithms are generic over [`Scalar`]. Integer methods
//! use [`Rational`] so order conditions are exact.

pub mod catalog;
pub mod composer;
pub mod dd;
pub mod gate;
pub mod harness;
pub mod integrality;
pub mod irrational;
pub mod method;
pub mod notation;
pub mod residual;
pub mod scalar;
pub mod search;
pub mod sigma;
pub mod tables;

pub use catalog::{catalog, lookup, Entry};
pub use dd::DoubleDouble;
pub use method::{Method, MethodError, Sign, Target, Unit};
pub use notation::{format_method, parse_method, parse_method_with_target, ParseError};
pub use residual::{
    computer_time, report, rho_vector, scalar_r, B2Table, CostModel, MethodReport, Regime, RhoVector, Word,
};
pub use scalar::{Rational, Real, Scalar};
pub use sigma::{order_of, sigma_vector, Label, OrderReport, SigmaVector, ENGINE_CEILING};

/// Method with exact rational coefficients.
pub type ExactMethod = Method<Rational>;
/// Method with double-precision coefficients.
pub type FloatMethod = Method<f64>;
/// Method with double-double coefficients.
pub type WideMethod = Method<DoubleDouble>;
pub type ExactSigma = SigmaVector<Rational>;
pub type FloatSigma = SigmaVector<f64>;
pub type ExactReport = MethodReport<Rational>;
pub type FloatReport = MethodReport<f64>;
