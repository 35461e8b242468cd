//! Named methods with their published metrics and residual rows.
//!
//! Printed values are stored as strings so their precision is known. The
//! fourth-order integer residual rows appear in print under the labels of
//! the irrational family; they are filed here under `Z4_n`.

use crate::composer::{certify, compose_auto};
use crate::dd::DoubleDouble;
use crate::gate::{commutator_method_4, commutator_method_5};
use crate::irrational::{r3_shortest, r4_symmetric};
use crate::method::{Method, Target};
use crate::notation::parse_method;
use crate::residual::Word;
use crate::scalar::{convert, Rational, Real, Scalar};
use crate::sigma::{order_of, OrderReport};

/// How an entry's coefficients are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Notation(&'static str),
    /// Shortest third-order method.
    R3,
    /// [`Source::R3`] followed by its transpose.
    R3Doubled,
    /// Six-unit symmetric fourth-order variant.
    R4(u32),
    Commutator4,
    Commutator5,
    /// [`compose_auto`] from a base method.
    Composed { base: &'static str, order: u32 },
}

/// Published `D, L, I, L/D, R/D, Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintedMetrics {
    pub d: i64,
    pub l: i64,
    pub i: usize,
    pub l_over_d: &'static str,
    pub r_over_d: &'static str,
    pub z: &'static str,
}

/// A published residual row: the leading entry (`rho_1`, or `rho_12` for
/// gates) and the words of the order-3 and order-4 residual sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintedResiduals {
    pub lead: &'static str,
    pub third: Option<[&'static str; 3]>,
    pub fourth: Option<[&'static str; 6]>,
    /// Printed for the method with `A_1` and `A_2` exchanged in every unit.
    pub swapped: bool,
}

impl PrintedResiduals {
    pub const THIRD_WORDS: [Word; 3] = [Word::W1112, Word::W1221, Word::W2221];
    pub const FOURTH_WORDS: [Word; 6] =
        [Word::W11112, Word::W21112, Word::W11221, Word::W22112, Word::W12221, Word::W22221];

    /// `(word, printed value)` for every printed entry after the lead.
    pub fn entries(&self) -> Vec<(Word, &'static str)> {
        let mut out = Vec::new();
        if let Some(t) = self.third {
            out.extend(Self::THIRD_WORDS.into_iter().zip(t));
        }
        if let Some(f) = self.fourth {
            out.extend(Self::FOURTH_WORDS.into_iter().zip(f));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub id: &'static str,
    pub description: &'static str,
    /// Claimed order.
    pub order: u32,
    pub target: Target,
    pub source: Source,
    pub metrics: Option<PrintedMetrics>,
    /// Printed `Z` for entries without a full metrics row.
    pub z: Option<&'static str>,
    pub residuals: Option<PrintedResiduals>,
}

impl Entry {
    pub fn is_exact(&self) -> bool {
        !matches!(self.source, Source::R3 | Source::R3Doubled | Source::R4(_))
    }

    /// Rational coefficients, for entries that have them.
    pub fn exact(&self) -> Option<Method<Rational>> {
        let m = match self.source {
            Source::Notation(s) => parse_method::<Rational>(s).expect("catalog notation parses"),
            Source::Commutator4 => commutator_method_4(),
            Source::Commutator5 => commutator_method_5(),
            Source::Composed { base, order } => {
                compose_auto(&parse_method(base).expect("catalog notation parses"), order).expect("composable").method
            }
            Source::R3 | Source::R3Doubled | Source::R4(_) => return None,
        };
        Some(m.with_target(self.target))
    }

    /// Coefficients in `T`. Irrational entries are evaluated in double-double
    /// and rounded, so narrower types get correctly rounded values.
    pub fn real<T: Real>(&self) -> Method<T> {
        let wide = match self.source {
            Source::R3 => r3_shortest::<DoubleDouble>(),
            Source::R3Doubled => {
                let m = r3_shortest::<DoubleDouble>();
                m.concat(&m.transpose())
            }
            Source::R4(v) => r4_symmetric::<DoubleDouble>(v).expect("catalog variant"),
            _ => return self.exact().expect("exact source").convert(),
        };
        wide.convert()
    }

    pub fn float(&self) -> Method<f64> {
        self.real()
    }

    pub fn wide(&self) -> Method<DoubleDouble> {
        self.real()
    }

    pub fn printed_z(&self) -> Option<&'static str> {
        self.metrics.map(|m| m.z).or(self.z)
    }

    /// Checks the claimed order: exactly for rational entries, in
    /// double-double arithmetic otherwise.
    pub fn verify(&self) -> Verification {
        let (report, certified) = match self.exact() {
            Some(m) => {
                let r = order_of(&m);
                let c = certify(&m, &r);
                (r, c)
            }
            None => {
                let r = order_of(&self.wide());
                let c = r.achieved_order;
                (r, c)
            }
        };
        Verification { claimed: self.order, certified_order: certified, report }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub claimed: u32,
    /// Engine order, or the parity-certified order above the engine ceiling.
    pub certified_order: u32,
    pub report: OrderReport,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.certified_order >= self.claimed
    }
}

const fn metrics(d: i64, l: i64, i: usize, l_over_d: &'static str, r_over_d: &'static str, z: &'static str) -> Option<PrintedMetrics> {
    Some(PrintedMetrics { d, l, i, l_over_d, r_over_d, z })
}

const fn third(lead: &'static str, t: [&'static str; 3], f: [&'static str; 6]) -> Option<PrintedResiduals> {
    Some(PrintedResiduals { lead, third: Some(t), fourth: Some(f), swapped: false })
}

const fn fourth(lead: &'static str, f: [&'static str; 6], swapped: bool) -> Option<PrintedResiduals> {
    Some(PrintedResiduals { lead, third: None, fourth: Some(f), swapped })
}

const fn entry(id: &'static str, description: &'static str, order: u32, source: Source) -> Entry {
    Entry { id, description, order, target: Target::Sum, source, metrics: None, z: None, residuals: None }
}

pub fn catalog() -> Vec<Entry> {
    use Source::*;
    vec![
        entry("Z1_1", "first order, one unit", 1, Notation("(1)")),
        entry("Z2_1", "second order, symmetric pair", 2, Notation("(1)(1)^T")),
        Entry {
            metrics: metrics(6, 10, 9, "1.67", "0.2", "0.9"),
            residuals: third("6.0", ["-1.0", "0.5", "0.0"], ["2.2", "3.1", "-3.2", "5.3", "0.1", "-1.3"]),
            ..entry("Z3_1", "third order, unit coefficients", 3, Notation("(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)"))
        },
        Entry {
            metrics: metrics(12, 22, 9, "1.83", "0.6", "0.6"),
            residuals: third("12.0", ["-4.0", "-3.0", "5.0"], ["13.4", "104.2", "105.6", "26.1", "84.2", "28.9"]),
            ..entry("Z3_2", "third order, smallest Z", 3, Notation("(1)^T(4)(2)(-5)^T(2)^T(3)(2)(2)^T(1)"))
        },
        Entry {
            metrics: metrics(6, 12, 7, "2.00", "0.4", "0.9"),
            residuals: third("6.0", ["-2.0", "1.5", "1.0"], ["0.7", "5.1", "3.3", "1.8", "3.1", "1.2"]),
            ..entry("Z3_3", "third order, seven units", 3, Notation("(1)^T(2)(2)(-3)^T(1)^T(2)(1)^T"))
        },
        Entry {
            metrics: metrics(6, 14, 6, "2.33", "1.7", "1.2"),
            residuals: third("6.0", ["0.0", "4.5", "9.0"], ["2.7", "8.1", "-2.7", "10.8", "-6.9", "-13.8"]),
            ..entry("Z3_4", "third order, six units", 3, Notation("(3)(-4)^T(1)(3)(2)^T(1)"))
        },
        Entry {
            metrics: metrics(12, 38, 5, "3.17", "98.8", "1.9"),
            residuals: third(
                "12.0",
                ["-864.0", "792.0", "180.0"],
                ["-3801.6", "-1900.8", "2505.6", "-1166.4", "499.2", "206.4"],
            ),
            ..entry("Z3_5", "third order, five units", 3, Notation("(5)^T(7)(12)(-13)^T(1)"))
        },
        Entry {
            metrics: metrics(12, 20, 18, "1.67", "0.6", "1.3"),
            residuals: fourth("12.0", ["-1.6", "0.2", "-3.4", "5.6", "-1.8", "-2.6"], false),
            ..entry(
                "Z4_1",
                "fourth order, unit coefficients",
                4,
                Notation("(1)^T(1)(1)^T(-2)(1)^T(1)^T(1)^T(1)^T(1)(1)^T(1)(1)(1)(1)(-2)^T(1)(1)^T(1)"),
            )
        },
        Entry {
            metrics: metrics(12, 24, 14, "2.00", "0.8", "1.1"),
            residuals: fourth("12.0", ["3.4", "6.2", "3.6", "3.6", "2.2", "-4.6"], false),
            ..entry("Z4_2", "fourth order, fourteen units", 4, Notation("(1)^T(2)(1)^T(-3)^T(2)(2)(1)(2)^T(2)^T(-3)(2)^T(1)(1)(1)^T"))
        },
        Entry {
            metrics: metrics(12, 28, 12, "2.33", "4.6", "1.5"),
            residuals: fourth("12.0", ["26.4", "40.2", "-5.4", "21.6", "16.2", "5.4"], true),
            ..entry("Z4_3", "fourth order, twelve units", 4, Notation("(1)^T(2)(3)^T(1)^T(-4)(3)^T(3)(-4)^T(1)(3)(2)^T(1)"))
        },
        Entry {
            metrics: metrics(12, 40, 10, "3.33", "50.2", "2.2"),
            residuals: fourth("12.0", ["-369.6", "-220.8", "309.6", "-86.4", "259.2", "86.4"], false),
            ..entry("Z4_4", "fourth order, ten units", 4, Notation("(6)^T(-7)(1)^T(1)(5)^T(5)(1)^T(1)(-7)^T(6)"))
        },
        Entry {
            z: Some("1.7"),
            residuals: third(
                "1.0",
                ["0.012008", "-0.052816", "-0.058414"],
                ["0.001754", "0.003500", "-0.009304", "0.017412", "-0.014311", "-0.026310"],
            ),
            ..entry("R3_1", "third order, four irrational units", 3, R3)
        },
        entry("R3_1D", "R3_1 followed by its transpose", 4, R3Doubled),
        Entry {
            z: Some("2.67"),
            residuals: fourth(
                "1.0",
                ["-0.000414", "-0.008682", "-0.007027", "-0.026045", "-0.026732", "-0.004684"],
                false,
            ),
            ..entry("R4_1", "fourth order, symmetric six units, signs (+,-,+)", 4, R4(1))
        },
        Entry {
            z: Some("2.53"),
            residuals: fourth("1.0", ["-0.022171", "-0.013256", "0.014902", "-0.009176", "0.002796", "0.001717"], false),
            ..entry("R4_2", "fourth order, symmetric six units, signs (+,-,-)", 4, R4(2))
        },
        Entry {
            z: Some("3.56"),
            residuals: fourth("1.0", ["-0.001297", "0.038072", "0.035227", "-0.080082", "-0.079215", "0.001270"], false),
            ..entry("R4_3", "fourth order, symmetric six units, signs (+,+,-)", 4, R4(3))
        },
        Entry {
            z: Some("4.39"),
            residuals: fourth("1.0", ["0.002074", "0.196582", "0.194095", "-0.052861", "-0.050727", "-0.002155"], false),
            ..entry("R4_4", "fourth order, symmetric six units, signs (+,+,+)", 4, R4(4))
        },
        Entry {
            target: Target::Commutator,
            residuals: fourth("12.0", ["1.0", "2.0", "0.0", "0.0", "-2.0", "-1.0"], false),
            ..entry("COMM4", "fourth-order commutator gate", 4, Commutator4)
        },
        Entry { target: Target::Commutator, ..entry("COMM5", "fifth-order commutator gate", 5, Commutator5) },
        entry("C4_18", "second-order pair raised to fourth order", 4, Notation("[(1)(1)^T]^4(-2)(-2)^T[(1)(1)^T]^4")),
        entry("C6_594", "first-order unit composed up to sixth order", 6, Composed { base: "(1)", order: 6 }),
    ]
}

/// Case-insensitive lookup by id.
pub fn lookup(id: &str) -> Option<Entry> {
    catalog().into_iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

/// Parses a printed decimal exactly.
pub fn printed_value(s: &str) -> Rational {
    Rational::parse_decimal(s).expect("printed value parses")
}

/// Number of digits after the decimal point.
pub fn printed_decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, f)| f.len())
}

/// `|value - printed| <= 0.5` in the last printed digit.
pub fn matches_printed<S: Scalar>(value: &S, printed: &str) -> bool {
    let p = printed_value(printed);
    let v: Rational = convert(value);
    let scale: num_bigint::BigInt = num_traits::pow(num_bigint::BigInt::from(10), printed_decimals(printed));
    let half_ulp = Rational::new(1.into(), scale * 2);
    let diff = if v > p { v - p } else { p - v };
    diff <= half_ulp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_found() {
        let all = catalog();
        for e in &all {
            assert_eq!(all.iter().filter(|f| f.id == e.id).count(), 1);
            assert_eq!(lookup(&e.id.to_lowercase()).unwrap().id, e.id);
        }
        assert!(lookup("Z9_9").is_none());
    }

    #[test]
    fn printed_precision() {
        assert_eq!(printed_decimals("-0.000414"), 6);
        assert_eq!(printed_decimals("12"), 0);
        assert!(matches_printed(&Rational::from_ratio(-3, 20), "-0.1"));
        assert!(matches_printed(&Rational::from_ratio(-3, 20), "-0.2"));
        assert!(!matches_printed(&0.26f64, "0.2"));
        assert!(!matches_printed(&0.0000006f64, "0.000000"));
    }

    #[test]
    fn every_entry_verifies() {
        for e in catalog() {
            let v = e.verify();
            assert!(v.passed(), "{}: {:?}", e.id, v);
        }
    }
}
