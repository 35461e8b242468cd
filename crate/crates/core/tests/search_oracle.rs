mod common;

use std::collections::BTreeSet;

use splitting::integrality::{check, d_modulus, d_multiple_of, min_inverses};
use splitting::search::{search, SearchSpec};
use splitting::{format_method, parse_method, ExactMethod, Rational, Scalar, Target};

#[test]
fn commutator_search_matches_brute_force() {
    for order in [2, 3] {
        for units in 1..=5 {
            let brute = common::brute_force(order, units, 2, Target::Commutator);
            let fast = common::pipeline(order, units, 2, Target::Commutator);
            assert_eq!(brute, fast, "order {order}, I = {units}");
        }
    }
}

#[test]
fn five_unit_sum_search_matches_brute_force() {
    for order in [3, 4] {
        let brute = common::brute_force(order, 5, 2, Target::Sum);
        let fast = common::pipeline(order, 5, 2, Target::Sum);
        assert_eq!(brute, fast, "order {order}");
    }
}

#[test]
fn dedup_keeps_one_of_each_transpose_pair() {
    let all = common::pipeline(2, 4, 3, Target::Sum);
    let kept: BTreeSet<String> = search(&SearchSpec::new(2, 4, 3))
        .unwrap()
        .hits
        .iter()
        .map(|h| format_method(&h.method))
        .collect();
    assert!(!kept.is_empty() && kept.is_subset(&all));
    let mut orbits = BTreeSet::new();
    for text in &all {
        let m: ExactMethod = parse_method(text).unwrap();
        let t = format_method(&m.transpose());
        orbits.insert(std::cmp::min(text.clone(), t));
    }
    assert_eq!(kept.len(), orbits.len());
}

#[test]
fn search_hits_satisfy_integrality() {
    for (order, units, a_max) in [(2, 4, 3), (3, 6, 4), (3, 5, 13)] {
        let out = search(&SearchSpec::new(order, units, a_max)).unwrap();
        assert!(!out.hits.is_empty());
        for hit in &out.hits {
            let m = &hit.method;
            assert_eq!(check(m), Ok(hit.report.order.achieved_order), "{}", format_method(m));
            assert!(m.inverse_count() >= min_inverses(order));
            let d = m.advance();
            assert!(d > Rational::from_i64(0));
            assert!(d_multiple_of(&d, d_modulus(order).unwrap()), "{}", format_method(m));
        }
    }
}
