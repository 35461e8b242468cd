//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitting::catalog::{matches_printed, printed_value, Entry};
use splitting::composer::{compose_auto, default_schedule, raise_order};
use splitting::harness::lie::{product_exp, sigma_generator};
use splitting::harness::linalg::unitary_log;
use splitting::harness::{
    build_ising_nnn, build_pauli_set, envelope_slope, loglog_slope, scaling_experiment, trajectory, CMatrix, Horizon,
    OperatorSet,
};
use splitting::integrality;
use splitting::irrational::{R3_PRINTED, R4_PRINTED};
use splitting::residual::Word;
use splitting::search::{search, SearchSpec};
use splitting::tables::printed_form;
use splitting::{
    format_method, lookup, order_of, parse_method, report, sigma_vector, DoubleDouble, Label, Method, Rational, Scalar,
    Sign, Target, Unit,
};

type Outcome = Result<String, String>;

fn entry(id: &str) -> Entry {
    lookup(id).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(x: f64, printed: &str, tol: f64) -> bool {
    (x - printed.parse::<f64>().unwrap()).abs() <= tol
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let t = start.elapsed();
    match r {
        Ok(detail) if t <= limit => Ok(format!("{detail}; {t:.2?}")),
        Ok(detail) => Err(format!("{detail}; took {t:.2?}, limit {limit:?}")),
        Err(e) => Err(format!("{e}; {t:.2?}")),
    }
}

fn catalog_verification() -> Outcome {
    let ids = ["Z3_1", "Z3_2", "Z3_3", "Z3_4", "Z3_5", "Z4_1", "Z4_2", "Z4_3", "Z4_4"];
    for id in ids {
        let e = entry(id);
        let m = e.exact().unwrap();
        let r = report(&m).map_err(|x| x.to_string())?;
        ensure(r.order.achieved_order == e.order, || format!("{id}: order {}", r.order.achieved_order))?;
        let p = e.metrics.unwrap();
        ensure(r.d == Rational::from_i64(p.d) && r.l == Rational::from_i64(p.l) && r.i == p.i, || {
            format!("{id}: D, L, I = {}, {}, {}", r.d, r.l, r.i)
        })?;
        let z = r.z.unwrap();
        let rd = r.r_over_d.unwrap();
        ensure(
            within(r.l_over_d, p.l_over_d, 0.05) && within(rd, p.r_over_d, 0.05) && within(z, p.z, 0.05),
            || format!("{id}: L/D {} R/D {rd} Z {z}", r.l_over_d),
        )?;
    }
    Ok(format!("{} methods", ids.len()))
}

fn residual_tables() -> Outcome {
    let ids = [
        "Z3_1", "Z3_2", "Z3_3", "Z3_4", "Z3_5", "Z4_1", "Z4_2", "Z4_3", "Z4_4", "R3_1", "R4_1", "R4_2", "R4_3", "R4_4",
        "COMM4",
    ];
    let mut cells = 0;
    for id in ids {
        let e = entry(id);
        let printed = e.residuals.unwrap();
        let rho = match e.exact() {
            Some(m) => {
                let rho = report(&m).unwrap().rho;
                let mut out = splitting::RhoVector::<f64>::zero();
                for (w, v) in rho.iter() {
                    out.set(w, v.to_f64());
                }
                out
            }
            None => {
                let rho = report(&e.wide()).unwrap().rho;
                let mut out = splitting::RhoVector::<f64>::zero();
                for (w, v) in rho.iter() {
                    out.set(w, v.to_f64());
                }
                out
            }
        };
        let rho = printed_form(rho, &printed);
        let lead = if e.target == Target::Commutator { Word::W12 } else { Word::W1 };
        for (w, p) in std::iter::once((lead, printed.lead)).chain(printed.entries()) {
            let v = *rho.get(w);
            let tight = e.is_exact() || (v - printed_value(p).to_f64()).abs() <= 1e-6;
            ensure(matches_printed(&v, p) && tight, || format!("{id} rho_{w}: {v} vs printed {p}"))?;
            cells += 1;
        }
    }
    Ok(format!("{} rows, {cells} cells", ids.len()))
}

/// Id, double and double-double coefficients, printed digits.
type ConstantRow<'a> = (&'a str, Method<f64>, Method<DoubleDouble>, Vec<&'a str>);

fn irrational_constants() -> Outcome {
    let mut rows: Vec<ConstantRow> =
        vec![("R3_1", entry("R3_1").float(), entry("R3_1").wide(), R3_PRINTED.to_vec())];
    for v in 1..=4 {
        let id = ["R4_1", "R4_2", "R4_3", "R4_4"][v - 1];
        // The printed half-method; the second half is its transpose.
        rows.push((id, entry(id).float(), entry(id).wide(), R4_PRINTED[v - 1].to_vec()));
    }
    let mut worst_double = 0f64;
    let mut worst_wide = 0f64;
    for (id, f, w, printed) in &rows {
        for (k, p) in printed.iter().enumerate() {
            let want = DoubleDouble::parse_decimal(p).unwrap();
            let rel = ((*f.units()[k].a() - want.to_f64()) / want.to_f64()).abs();
            worst_double = worst_double.max(rel);
            ensure(rel <= 1e-15, || format!("{id} a{}: double relative error {rel:e}", k + 1))?;
            let abs = (*w.units()[k].a() - want).abs().to_f64();
            worst_wide = worst_wide.max(abs);
            ensure(abs <= 1e-27, || format!("{id} a{}: double-double error {abs:e}", k + 1))?;
        }
        let order = entry(id).order;
        let s = sigma_vector(f);
        for l in Label::ALL.into_iter().filter(|l| (2..=order).contains(&l.order())) {
            let v = s.get(l).abs();
            ensure(v < 1e-12, || format!("{id} sigma^{l} = {v:e}"))?;
        }
        let z = report(w).unwrap().z.unwrap();
        let pz = entry(id).printed_z().unwrap();
        ensure(within(z, pz, 0.05), || format!("{id}: Z {z} vs {pz}"))?;
    }
    Ok(format!("worst relative error {worst_double:.1e} (double), {worst_wide:.1e} absolute (double-double)"))
}

fn contains_up_to_transpose(hits: &[Method<Rational>], m: &Method<Rational>) -> bool {
    let (a, b) = (format_method(m), format_method(&m.transpose()));
    hits.iter().any(|h| {
        let s = format_method(h);
        s == a || s == b
    })
}

fn search_hits(order: u32, units: usize, a_max: u32) -> Vec<Method<Rational>> {
    search(&SearchSpec::new(order, units, a_max)).unwrap().hits.into_iter().map(|h| h.method).collect()
}

fn search_rediscovery() -> Outcome {
    let t = Instant::now();
    let z34 = search_hits(3, 6, 4);
    let t34 = t.elapsed();
    ensure(contains_up_to_transpose(&z34, &entry("Z3_4").exact().unwrap()), || "Z3_4 not found".into())?;
    ensure(t34 < Duration::from_secs(10), || format!("Z3_4 search took {t34:?}"))?;
    let t = Instant::now();
    let z35 = search_hits(3, 5, 13);
    let t35 = t.elapsed();
    ensure(contains_up_to_transpose(&z35, &entry("Z3_5").exact().unwrap()), || "Z3_5 not found".into())?;
    ensure(t35 < Duration::from_secs(60), || format!("Z3_5 search took {t35:?}"))?;
    let mut compared = 0;
    for order in [2, 3] {
        for units in 1..=4 {
            let brute = common::brute_force(order, units, 3, Target::Sum);
            let fast = common::pipeline(order, units, 3, Target::Sum);
            ensure(brute == fast, || format!("order {order}, I = {units}: oracle {} vs search {}", brute.len(), fast.len()))?;
            compared += brute.len();
        }
    }
    Ok(format!("Z3_4 in {t34:.2?}, Z3_5 in {t35:.2?}, oracle agrees on {compared} methods"))
}

fn integrality_properties() -> Outcome {
    let mut methods: Vec<Method<Rational>> = ["Z1_1", "Z2_1", "Z3_1", "Z3_2", "Z3_3", "Z3_4", "Z3_5", "Z4_1", "Z4_2", "Z4_3", "Z4_4", "C4_18"]
        .iter()
        .map(|id| entry(id).exact().unwrap())
        .collect();
    methods.extend(search_hits(3, 6, 4));
    methods.extend(search_hits(3, 7, 3));
    methods.extend(search_hits(4, 10, 3));
    for m in &methods {
        let order = integrality::check(m).map_err(|e| format!("{}: {e}", format_method(m)))?;
        let d = m.advance();
        if (3..=4).contains(&order) {
            ensure(integrality::d_multiple_of(&d, 6), || format!("{}: D = {d}", format_method(m)))?;
        }
    }
    Ok(format!("{} methods", methods.len()))
}

fn composer() -> Outcome {
    let pair = parse_method::<Rational>("(1)(1)^T").unwrap();
    let c4 = raise_order(&pair, &default_schedule(2)).map_err(|e| e.to_string())?;
    ensure(c4.len() == 18 && order_of(&c4).achieved_order == 4 && c4.is_self_transpose(), || {
        format!("fourth-order composition: I = {}", c4.len())
    })?;
    let c6 = compose_auto(&parse_method("(1)").unwrap(), 6).map_err(|e| e.to_string())?;
    let s = sigma_vector(&c6.method);
    let nonzero: Vec<Label> = Label::ALL.into_iter().filter(|l| l.order() >= 2 && *s.get(*l) != Rational::from_i64(0)).collect();
    ensure(c6.method.len() == 594 && nonzero.is_empty() && c6.method.is_self_transpose(), || {
        format!("sixth-order composition: I = {}, nonzero {nonzero:?}", c6.method.len())
    })?;
    ensure(c6.certified_order == 6, || format!("certified order {}", c6.certified_order))?;
    Ok("I = 18 and I = 594".into())
}

fn random_anti_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let x = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let a = (&x - x.adjoint()) * Complex::new(0.5, 0.0);
    let norm = a.norm();
    a / Complex::new(norm, 0.0)
}

fn matrix_log_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hs = [0.1, 0.05, 0.025];
    let mut worst = f64::INFINITY;
    for trial in 0..20 {
        let len = rng.gen_range(2..=6);
        let units = (0..len)
            .map(|_| {
                let a: f64 = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                Unit::new(if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }, a).unwrap()
            })
            .collect();
        let m = Method::new(units, Target::Sum).unwrap();
        let a = [random_anti_hermitian(&mut rng, 4), random_anti_hermitian(&mut rng, 4)];
        let sigma = sigma_vector(&m);
        let pts: Vec<(f64, f64)> = hs
            .iter()
            .map(|&h| {
                let ah = [&a[0] * Complex::new(h, 0.0), &a[1] * Complex::new(h, 0.0)];
                let log = unitary_log(&product_exp(&m, &ah)).unwrap();
                (h, (log - sigma_generator(&sigma, &ah)).norm())
            })
            .collect();
        let (slope, _) = loglog_slope(&pts).unwrap();
        worst = worst.min(slope);
        ensure(slope >= 5.7, || format!("trial {trial} ({}): slope {slope:.3}", format_method(&m)))?;
    }
    Ok(format!("20 methods, smallest slope {worst:.3}"))
}

fn fixed_n_slope(id: &str, ops: &OperatorSet, dts: &[f64]) -> f64 {
    let rows = scaling_experiment(id, &entry(id).float(), ops, dts, Horizon::Steps(1)).unwrap();
    loglog_slope(&rows.iter().map(|r| (r.dt, r.error())).collect::<Vec<_>>()).unwrap().0
}

fn pauli_experiment() -> Outcome {
    let ops = build_pauli_set();
    let ids = ["Z1_1", "Z2_1", "Z3_1", "Z4_1"];
    let dts = [0.01, 0.005, 0.0025];
    let mut notes = Vec::new();
    // (a) one application, shrinking dt.
    for (k, id) in ids.iter().enumerate() {
        let s = fixed_n_slope(id, &ops, &dts);
        let want = k as f64 + 2.0;
        ensure((s - want).abs() <= 0.1, || format!("(a) {id}: slope {s:.3}, want {want}"))?;
        notes.push(format!("{s:.2}"));
    }
    // (b)-(d) repeated application at dt = 0.01 up to t = 1000.
    let dt = 0.01;
    let mut curves = Vec::new();
    for id in ids {
        let m = entry(id).float();
        let d = m.advance();
        let n_max = (1000.0 / (d * dt)).round() as usize;
        let rows = trajectory(id, &m, &ops, dt, n_max, 1).unwrap();
        curves.push((d, rows.iter().map(|r| (r.t, r.error())).collect::<Vec<_>>()));
    }
    let mut env = Vec::new();
    for (k, (_, pts)) in curves.iter().enumerate().skip(1) {
        let s = envelope_slope(pts, 2.0, 1000.0, 15).unwrap();
        ensure((s - 1.0).abs() <= 0.1, || format!("(b) {}: envelope slope {s:.3}", ids[k]))?;
        env.push(format!("{s:.2}"));
    }
    let max4 = curves[3].1.iter().map(|p| p.1).fold(0.0, f64::max);
    ensure(max4 < 1e-3, || format!("(c) Z4_1 max error {max4:e}"))?;
    let max1 = curves[0].1.iter().map(|p| p.1).fold(0.0, f64::max);
    ensure((0.5..=2.5).contains(&max1), || format!("first-order max error {max1}"))?;
    // (d) pointwise ordering on a grid every curve hits exactly.
    for k in 1..=41 {
        let t = 0.12 * k as f64;
        let e: Vec<f64> = curves
            .iter()
            .map(|(d, pts)| pts[(t / (d * dt)).round() as usize - 1].1)
            .collect();
        ensure(e.windows(2).all(|w| w[0] > w[1]), || format!("(d) ordering fails at t = {t:.2}: {e:?}"))?;
    }
    Ok(format!("fixed-n slopes {}, envelope slopes {}, Z4_1 max {max4:.1e}", notes.join("/"), env.join("/")))
}

fn ising_demo() -> Outcome {
    let ops = build_ising_nnn(4).map_err(|e| e.to_string())?;
    ensure(ops.len() == 4, || format!("{} groups", ops.len()))?;
    let dts = [0.01, 0.005, 0.0025];
    let mut notes = Vec::new();
    for (id, want) in [("Z2_1", 3.0), ("Z3_1", 4.0)] {
        let s = fixed_n_slope(id, &ops, &dts);
        ensure((s - want).abs() <= 0.1, || format!("{id}: slope {s:.3}, want {want}"))?;
        notes.push(format!("{id} {s:.2}"));
    }
    Ok(notes.join(", "))
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("catalog verification", Duration::from_secs(1), catalog_verification),
        ("residual tables", Duration::from_secs(1), residual_tables),
        ("irrational constants", Duration::from_secs(60), irrational_constants),
        ("search rediscovery", Duration::from_secs(70), search_rediscovery),
        ("integrality and inverse counts", Duration::from_secs(120), integrality_properties),
        ("composer", Duration::from_secs(1), composer),
        ("matrix-log oracle", Duration::from_secs(60), matrix_log_oracle),
        ("single-spin experiment", Duration::from_secs(30), pauli_experiment),
        ("next-nearest-neighbour chain", Duration::from_secs(60), ising_demo),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        let line = match timed(limit, f) {
            Ok(d) => format!("criterion {}: PASS {name}: {d}", k + 1),
            Err(e) => {
                failed.push(k + 1);
                format!("criterion {}: FAIL {name}: {e}", k + 1)
            }
        };
        // Written to the raw handle so it shows without --nocapture.
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
