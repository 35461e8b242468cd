//! Staged search for integer-coefficient methods.
//!
//! 1. Signed magnitudes: odd powers only see `sign(alpha a) |a|`, so pick a
//!    multiset of signed magnitudes solving the odd conditions.
//! 2. Even assignments: choose `alpha` per unit (which fixes the sign of `a`)
//!    so the even power sums vanish.
//! 3. Orderings: enumerate distinct permutations and test the remaining
//!    conditions with exact integer arithmetic.
//!
//! Survivors are re-checked with [`crate::sigma::order_of`] in rationals and
//! ranked by `Z`, then `L/D`, then notation.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::method::{Method, Sign, Target, Unit};
use crate::notation::format_method;
use crate::residual::{report, MethodReport};
use crate::scalar::{Rational, Scalar};
use crate::sigma::order_of;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub target_order: u32,
    /// Number of units `I`.
    pub units: usize,
    pub a_max: u32,
    pub target: Target,
    pub max_results: usize,
    /// Keep one of each transpose pair (sum targets).
    pub dedup: bool,
    #[serde(default)]
    pub time_limit: Option<Duration>,
}

impl SearchSpec {
    pub fn new(target_order: u32, units: usize, a_max: u32) -> Self {
        Self { target_order, units, a_max, target: Target::Sum, max_results: 1_000_000, dedup: true, time_limit: None }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(2..=5).contains(&self.target_order) {
            return Err(SearchError::BadSpec(format!("target order {} outside 2..=5", self.target_order)));
        }
        if self.units == 0 || self.units > 40 {
            return Err(SearchError::BadSpec(format!("unit count {} outside 1..=40", self.units)));
        }
        if self.a_max == 0 || self.a_max > 1000 {
            return Err(SearchError::BadSpec(format!("a_max {} outside 1..=1000", self.a_max)));
        }
        if self.max_results == 0 {
            return Err(SearchError::BadSpec("max_results must be positive".into()));
        }
        Ok(())
    }

    /// Required divisor of `D = sigma^1` for sum targets.
    fn d_modulus(&self) -> i64 {
        match (self.target, self.target_order) {
            (Target::Commutator, _) => 1,
            (_, 2) => 2,
            (_, 3 | 4) => 6,
            _ => 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    BadSpec(String),
}

/// `(sign of alpha a, |a|)`, sorted.
pub type SignedMultiset = Vec<(i64, i64)>;

/// Units as `(alpha, a)` with multiplicities, sorted by unit.
pub type Assignment = Vec<((i64, i64), usize)>;

fn pow(x: i64, p: u32) -> i128 {
    i128::from(x).pow(p)
}

fn odd_sum(ms: &[(i64, i64)], p: u32) -> i128 {
    ms.iter().map(|&(s, m)| i128::from(s) * pow(m, p)).sum()
}

/// Stage 1: multisets of signed magnitudes meeting the odd-power conditions.
pub fn stage_signs(spec: &SearchSpec) -> Vec<SignedMultiset> {
    let values: Vec<(i64, i64)> = (1..=i64::from(spec.a_max))
        .rev()
        .map(|m| (-1, m))
        .chain((1..=i64::from(spec.a_max)).map(|m| (1, m)))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(spec.units);
    fn rec(values: &[(i64, i64)], start: usize, left: usize, cur: &mut Vec<(i64, i64)>, spec: &SearchSpec, out: &mut Vec<SignedMultiset>) {
        if left == 0 {
            if accept_signs(spec, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            rec(values, i, left - 1, cur, spec, out);
            cur.pop();
        }
    }
    rec(&values, 0, spec.units, &mut cur, spec, &mut out);
    out
}

fn accept_signs(spec: &SearchSpec, ms: &[(i64, i64)]) -> bool {
    let d = odd_sum(ms, 1);
    let base = match spec.target {
        Target::Sum => d > 0 && d % i128::from(spec.d_modulus()) == 0,
        Target::Commutator => d == 0,
    };
    base && (spec.target_order < 3 || odd_sum(ms, 3) == 0) && (spec.target_order < 5 || odd_sum(ms, 5) == 0)
}

/// Stage 2: choices of `alpha` (keeping `sign(alpha a)`) with vanishing even sums.
pub fn stage_even(spec: &SearchSpec, ms: &SignedMultiset) -> Vec<Assignment> {
    // Group equal entries; within a group only the number of alpha = +1 matters.
    let mut groups: Vec<((i64, i64), usize)> = Vec::new();
    for &e in ms {
        match groups.last_mut() {
            Some((g, k)) if *g == e => *k += 1,
            _ => groups.push((e, 1)),
        }
    }
    let mut out = Vec::new();
    let mut plus = vec![0usize; groups.len()];
    loop {
        let mut s2: i128 = 0;
        let mut s4: i128 = 0;
        for (((_, m), k), &p) in groups.iter().zip(&plus) {
            let net = p as i128 * 2 - *k as i128;
            s2 += net * pow(*m, 2);
            s4 += net * pow(*m, 4);
        }
        let ok2 = match spec.target {
            Target::Sum => s2 == 0,
            Target::Commutator => s2 > 0,
        };
        if ok2 && (spec.target_order < 4 || s4 == 0) {
            let mut units: Vec<((i64, i64), usize)> = Vec::new();
            for (((s, m), k), &p) in groups.iter().zip(&plus) {
                // alpha = +1 gives a = s m; alpha = -1 gives a = -s m.
                if p > 0 {
                    units.push(((1, s * m), p));
                }
                if *k > p {
                    units.push(((-1, -s * m), k - p));
                }
            }
            units.sort();
            out.push(units);
        }
        // Odometer over 0..=k per group.
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if plus[i] < groups[i].1 {
                plus[i] += 1;
                break;
            }
            plus[i] = 0;
            i += 1;
        }
    }
}

/// Running sums of one partial ordering.
#[derive(Clone, Copy, Default)]
struct Acc {
    p1: i128,
    p2: i128,
    a12: i128,
    a13: i128,
    a14: i128,
    a23: i128,
    t112: i128,
    t113: i128,
    t221: i128,
    q: i128,
}

impl Acc {
    fn push(&self, w: &[i128; 5], deep: bool) -> Acc {
        let p1 = self.p1 + w[0];
        let p2 = self.p2 + w[1];
        let s1 = p1 + self.p1;
        let mut n = Acc { p1, p2, a12: self.a12 + w[1] * s1, ..*self };
        if deep {
            let t1 = p1 * p1 + p1 * self.p1 + self.p1 * self.p1;
            n.a13 = self.a13 + w[2] * s1;
            n.t112 = self.t112 + w[1] * t1;
            n.a14 = self.a14 + w[3] * s1;
            n.a23 = self.a23 + w[2] * (p2 + self.p2);
            n.t113 = self.t113 + w[2] * t1;
            n.t221 = self.t221 + w[0] * (p2 * p2 + p2 * self.p2 + self.p2 * self.p2);
            n.q = self.q + w[1] * (p1 * t1 + self.p1 * self.p1 * self.p1);
        }
        n
    }
}

/// Scaled integer forms of the ordering-dependent conditions.
fn conditions_hold(acc: &Acc, s: &[i128; 5], order: u32) -> bool {
    let (s1, s2, s3, s4) = (s[0], s[1], s[2], s[3]);
    let n12 = acc.a12 - s1 * s2;
    if order >= 3 && n12 != 0 {
        return false;
    }
    if order < 4 {
        return true;
    }
    let n13 = acc.a13 - s1 * s3;
    let n112 = -3 * s1 * n12 - 2 * s1 * s1 * s2 + 2 * acc.t112;
    if n13 != 0 || n112 != 0 {
        return false;
    }
    if order < 5 {
        return true;
    }
    let n14 = acc.a14 - s1 * s4;
    let n23 = acc.a23 - s2 * s3;
    let n113 = -3 * s1 * n13 - 2 * s1 * s1 * s3 + 2 * acc.t113;
    let n221 = 3 * s2 * n12 - 2 * s2 * s2 * s1 + 2 * acc.t221;
    let n1112 = -s1 * n112 - 2 * s1 * s1 * n12 - s1 * s1 * s1 * s2 + acc.q;
    n14 == 0 && n23 == 0 && n113 == 0 && n221 == 0 && n1112 == 0
}

/// Shared stop conditions.
struct Control {
    deadline: Option<Instant>,
    max_results: usize,
    found: AtomicUsize,
    stop: AtomicBool,
    timed_out: AtomicBool,
}

impl Control {
    fn unlimited() -> Self {
        Self {
            deadline: None,
            max_results: usize::MAX,
            found: AtomicUsize::new(0),
            stop: AtomicBool::new(false),
            timed_out: AtomicBool::new(false),
        }
    }

    fn check_time(&self) -> bool {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        self.stop.load(Ordering::Relaxed)
    }

    fn record(&self) -> bool {
        let n = self.found.fetch_add(1, Ordering::Relaxed) + 1;
        if n >= self.max_results {
            self.stop.store(true, Ordering::Relaxed);
        }
        n <= self.max_results
    }
}

struct Permuter<'a> {
    types: Vec<(i64, i64)>,
    w: Vec<[i128; 5]>,
    counts: Vec<usize>,
    s: [i128; 5],
    order: u32,
    deep: bool,
    seq: Vec<usize>,
    out: Vec<Vec<usize>>,
    ctl: &'a Control,
    visits: u64,
}

impl Permuter<'_> {
    fn dfs(&mut self, acc: Acc, left: usize) {
        if left == 0 {
            self.visits += 1;
            if self.visits.is_multiple_of(4096) && self.ctl.check_time() {
                return;
            }
            if conditions_hold(&acc, &self.s, self.order) && self.ctl.record() {
                self.out.push(self.seq.clone());
            }
            return;
        }
        if self.ctl.stop.load(Ordering::Relaxed) {
            return;
        }
        for t in 0..self.types.len() {
            if self.counts[t] == 0 {
                continue;
            }
            self.counts[t] -= 1;
            self.seq.push(t);
            let next = acc.push(&self.w[t], self.deep);
            self.dfs(next, left - 1);
            self.seq.pop();
            self.counts[t] += 1;
        }
    }
}

fn permute_with(spec: &SearchSpec, assignment: &Assignment, ctl: &Control) -> Vec<Method<Rational>> {
    let types: Vec<(i64, i64)> = assignment.iter().map(|&(u, _)| u).collect();
    let counts: Vec<usize> = assignment.iter().map(|&(_, k)| k).collect();
    let w: Vec<[i128; 5]> = types
        .iter()
        .map(|&(alpha, a)| std::array::from_fn(|q| i128::from(alpha) * pow(a, q as u32 + 1)))
        .collect();
    let mut s = [0i128; 5];
    for (wt, &k) in w.iter().zip(&counts) {
        for q in 0..5 {
            s[q] += wt[q] * k as i128;
        }
    }
    let total = counts.iter().sum();
    let mut p = Permuter {
        types,
        w,
        counts,
        s,
        order: spec.target_order,
        deep: spec.target_order >= 4,
        seq: Vec::with_capacity(total),
        out: Vec::new(),
        ctl,
        visits: 0,
    };
    p.dfs(Acc::default(), total);
    let types = p.types;
    p.out
        .into_iter()
        .map(|seq| {
            let units = seq
                .iter()
                .map(|&t| {
                    let (alpha, a) = types[t];
                    Unit::new(Sign::from_i64(alpha).expect("sign"), Rational::from_i64(a)).expect("nonzero")
                })
                .collect();
            Method::new(units, spec.target).expect("nonempty")
        })
        .collect()
}

/// Stage 3: distinct orderings satisfying every remaining condition.
pub fn stage_permute(spec: &SearchSpec, assignment: &Assignment) -> Vec<Method<Rational>> {
    permute_with(spec, assignment, &Control::unlimited())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The whole space was searched.
    Exhausted,
    ResultCapReached,
    TimeLimitReached,
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub method: Method<Rational>,
    pub report: MethodReport<Rational>,
}

impl SearchHit {
    /// One JSON line: `{method, D, L, I, Z, rho}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": format_method(&self.method),
            "D": self.report.d.to_notation(),
            "L": self.report.l.to_notation(),
            "I": self.report.i,
            "Z": self.report.z,
            "order": self.report.order.achieved_order,
            "rho": self.report.rho.to_json(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub hits: Vec<SearchHit>,
    pub status: SearchStatus,
    pub multisets: usize,
    pub assignments: usize,
    pub elapsed: Duration,
}

fn canonical_key(m: &Method<Rational>, dedup: bool) -> String {
    let a = format_method(m);
    if !dedup || m.target() == Target::Commutator {
        return a;
    }
    let b = format_method(&m.transpose());
    a.min(b)
}

/// Runs all three stages, in parallel over stage-1 multisets.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    spec.validate()?;
    let start = Instant::now();
    let ctl = Control {
        deadline: spec.time_limit.map(|t| start + t),
        max_results: spec.max_results,
        ..Control::unlimited()
    };
    let multisets = stage_signs(spec);
    let assignments = AtomicUsize::new(0);
    let found: Mutex<Vec<Method<Rational>>> = Mutex::new(Vec::new());
    multisets.par_iter().for_each(|ms| {
        if ctl.check_time() {
            return;
        }
        for asg in stage_even(spec, ms) {
            assignments.fetch_add(1, Ordering::Relaxed);
            let ms = permute_with(spec, &asg, &ctl);
            if !ms.is_empty() {
                found.lock().expect("no poisoned lock").extend(ms);
            }
            if ctl.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    });
    let status = if ctl.timed_out.load(Ordering::Relaxed) {
        SearchStatus::TimeLimitReached
    } else if ctl.found.load(Ordering::Relaxed) >= spec.max_results && ctl.stop.load(Ordering::Relaxed) {
        SearchStatus::ResultCapReached
    } else {
        SearchStatus::Exhausted
    };
    let mut seen = BTreeSet::new();
    let mut hits = Vec::new();
    for m in found.into_inner().expect("no poisoned lock") {
        if !seen.insert(canonical_key(&m, spec.dedup)) {
            continue;
        }
        let rep = order_of(&m);
        assert!(rep.achieved_order >= spec.target_order, "search emitted {} at order {}", format_method(&m), rep.achieved_order);
        let report = report(&m).expect("search results have positive D");
        if spec.target == Target::Sum && spec.target_order == 4 && !crate::integrality::d_multiple_of(&report.d, 12) {
            log::warn!("order-4 result {} has D = {} (not a multiple of 12)", format_method(&m), report.d);
        }
        hits.push(SearchHit { method: m, report });
    }
    hits.sort_by(|x, y| {
        let z = |h: &SearchHit| h.report.z.unwrap_or(f64::INFINITY);
        z(x).total_cmp(&z(y))
            .then(x.report.l_over_d.total_cmp(&y.report.l_over_d))
            .then_with(|| format_method(&x.method).cmp(&format_method(&y.method)))
    });
    Ok(SearchOutcome {
        hits,
        status,
        multisets: multisets.len(),
        assignments: assignments.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}
