#![allow(dead_code)]

use std::collections::BTreeSet;

use splitting::search::{search, SearchSpec};
use splitting::{format_method, order_of, report, Method, Rational, Scalar, Target, Unit};

/// Every sequence of `units` integer units with `|c| <= a_max`, positive `D`
/// and order against `target` at least `order`.
pub fn brute_force(order: u32, units: usize, a_max: i64, target: Target) -> BTreeSet<String> {
    let choices: Vec<Unit<Rational>> = (-a_max..=a_max)
        .filter(|&c| c != 0)
        .flat_map(|c| [false, true].map(|t| Unit::from_label(Rational::from_i64(c), t).unwrap()))
        .collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; units];
    loop {
        let m = Method::new(idx.iter().map(|&i| choices[i].clone()).collect(), target).unwrap();
        if order_of(&m).achieved_order >= order && report(&m).is_ok() {
            out.insert(format_method(&m));
        }
        let mut k = 0;
        loop {
            if k == units {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The staged search without transpose deduplication.
pub fn pipeline(order: u32, units: usize, a_max: u32, target: Target) -> BTreeSet<String> {
    let mut spec = SearchSpec::new(order, units, a_max);
    spec.target = target;
    spec.dedup = false;
    search(&spec).unwrap().hits.iter().map(|h| format_method(&h.method)).collect()
}
