use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use splitting::composer::{certify, compose_auto, raise_order, Step};
use splitting::harness::{build_ising_nnn, build_pauli_set, to_csv, trajectory};
use splitting::irrational::{newton_solve, r4_symmetric, NewtonOptions};
use splitting::residual::{computer_time, format_fixed_f64, CostModel, MethodReport};
use splitting::search::{search, SearchSpec};
use splitting::tables::{all_tables, render_csv, render_text};
use splitting::{
    format_method, lookup, order_of, parse_method_with_target, report, DoubleDouble, Entry, Method, OrderReport,
    Rational, Scalar, Sign, Target,
};

use crate::{Cli, Command, Precision, SetArg};

const GOLDEN_TEXT: &str = include_str!("../golden/tables.txt");
const GOLDEN_CSV: &str = include_str!("../golden/tables.csv");

#[derive(Debug)]
pub enum CliError {
    /// Unparseable method or bad arguments: exit 2.
    Usage(String),
    /// The command ran but could not complete: exit 1.
    Failed(String),
}

impl CliError {
    pub fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            CliError::Failed(m) => {
                eprintln!("error: {m}");
                ExitCode::from(1)
            }
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// A method in whichever arithmetic was requested.
enum Any {
    Exact(Method<Rational>),
    Double(Method<f64>),
    Wide(Method<DoubleDouble>),
}

struct Resolved {
    entry: Option<Entry>,
    method: Any,
}

fn resolve(text: &str, target: Option<Target>, precision: Option<Precision>) -> Result<Resolved, CliError> {
    if let Some(entry) = lookup(text) {
        let method = match (precision, entry.is_exact()) {
            (None | Some(Precision::Exact), true) => Any::Exact(entry.exact().expect("exact entry")),
            (Some(Precision::Exact), false) => {
                return Err(usage(format!("{} has irrational coefficients; use --precision double or wide", entry.id)))
            }
            (Some(Precision::Double), _) => Any::Double(entry.float()),
            (None | Some(Precision::Wide), _) => Any::Wide(entry.wide()),
        };
        let method = match target {
            Some(t) => retarget(method, t),
            None => method,
        };
        return Ok(Resolved { entry: Some(entry), method });
    }
    let t = target.unwrap_or(Target::Sum);
    let method = match precision.unwrap_or(Precision::Exact) {
        Precision::Exact => Any::Exact(parse_method_with_target(text, t).map_err(usage)?),
        Precision::Double => Any::Double(parse_method_with_target(text, t).map_err(usage)?),
        Precision::Wide => Any::Wide(parse_method_with_target(text, t).map_err(usage)?),
    };
    Ok(Resolved { entry: None, method })
}

fn retarget(m: Any, t: Target) -> Any {
    match m {
        Any::Exact(m) => Any::Exact(m.with_target(t)),
        Any::Double(m) => Any::Double(m.with_target(t)),
        Any::Wide(m) => Any::Wide(m.with_target(t)),
    }
}

fn exact_method(text: &str) -> Result<Method<Rational>, CliError> {
    match resolve(text, None, Some(Precision::Exact))?.method {
        Any::Exact(m) => Ok(m),
        _ => unreachable!("exact precision requested"),
    }
}

fn float_method(text: &str) -> Result<(String, Method<f64>), CliError> {
    let r = resolve(text, None, Some(Precision::Double))?;
    let name = r.entry.map_or_else(|| text.to_string(), |e| e.id.to_string());
    match r.method {
        Any::Double(m) => Ok((name, m)),
        _ => unreachable!("double precision requested"),
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Verify { method, order, target } => verify(cli, method, *order, target.map(Into::into)),
        Command::Metrics { method, target, tp, budget, tg, b, epsilon, terms } => {
            let cost = match (*tp, *budget) {
                (Some(t_p), Some(e)) => Some(CostModel { t_g: *tg, b: *b, t_p, e, epsilon: *epsilon, n_terms: *terms }),
                (None, None) => None,
                _ => return Err(usage("--tp and --budget go together")),
            };
            metrics(cli, method, target.map(Into::into), cost)
        }
        Command::Tables { csv, check } => tables(*csv, *check),
        Command::Search { order, units, amax, target, max_results, time_limit, no_dedup, out } => {
            let mut spec = SearchSpec::new(*order, *units, *amax);
            spec.target = (*target).into();
            spec.dedup = !no_dedup;
            if let Some(m) = max_results {
                spec.max_results = *m;
            }
            spec.time_limit = time_limit.map(Duration::from_secs_f64);
            run_search(cli, &spec, out.as_deref())
        }
        Command::Solve { order, symmetric, variant, signs, initial, attempts } => {
            solve(cli, *order, *symmetric, *variant, signs.as_deref(), initial.as_deref(), *attempts)
        }
        Command::Compose { base, auto, to, schedule } => compose(cli, base, *auto, *to, schedule.as_deref()),
        Command::Simulate { method, set, spins, dt, steps, stride, out } => {
            simulate(cli, method, *set, *spins, *dt, *steps, *stride, out.as_deref())
        }
    }
}

/// Writes to stdout. A closed pipe (`| head`) ends the process quietly.
fn say(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(1);
    }
}

fn emit(cli: &Cli, value: serde_json::Value, text: String) {
    if cli.json {
        say(&format!("{}\n", serde_json::to_string_pretty(&value).expect("json")));
    } else {
        say(&text);
    }
}

fn opt(x: Option<f64>, decimals: usize) -> String {
    x.map_or_else(|| "-".to_string(), |v| format_fixed_f64(v, decimals))
}

fn metrics_line<S: Scalar>(r: &MethodReport<S>) -> String {
    format!(
        "D = {}, L = {}, I = {}, L/D = {}, R/D = {}, Z = {}\n",
        r.d.to_notation(),
        r.l.to_notation(),
        r.i,
        format_fixed_f64(r.l_over_d, 4),
        opt(r.r_over_d, 4),
        opt(r.z, 4)
    )
}

fn leading(o: &OrderReport) -> String {
    if o.leading_nonzero_labels.is_empty() {
        "-".into()
    } else {
        o.leading_nonzero_labels.join(", ")
    }
}

struct Checked {
    text: String,
    json: serde_json::Value,
    order: u32,
}

fn check_any<S: Scalar>(m: &Method<S>, exact: Option<&Method<Rational>>) -> Checked {
    let o = order_of(m);
    let order = exact.map_or(o.achieved_order, |e| certify(e, &o));
    let mut text = format!("method:  {}\ntarget:  {}\n", format_method(m), m.target());
    let shown = if order > o.achieved_order { format!("{order} (engine {})", o.order_text()) } else { o.order_text() };
    let _ = writeln!(text, "order:   {shown}\nleading: {}", leading(&o));
    let rep = report(m).ok();
    if let Some(r) = &rep {
        text.push_str(&metrics_line(r));
    }
    let json = json!({
        "method": format_method(m),
        "target": m.target(),
        "order": order,
        "order_report": o,
        "report": rep.as_ref().map(MethodReport::to_json),
    });
    Checked { text, json, order }
}

fn check(m: &Any) -> Checked {
    match m {
        Any::Exact(m) => check_any(m, Some(m)),
        Any::Double(m) => check_any(m, None),
        Any::Wide(m) => check_any(m, None),
    }
}

fn verify(cli: &Cli, text: &str, order: Option<u32>, target: Option<Target>) -> Result<ExitCode, CliError> {
    let r = resolve(text, target, cli.precision)?;
    let claimed = order.or(r.entry.as_ref().map(|e| e.order)).unwrap_or(1);
    let c = check(&r.method);
    let ok = c.order >= claimed;
    let mut out = String::new();
    if let Some(e) = &r.entry {
        let _ = writeln!(out, "id:      {} ({})", e.id, e.description);
    }
    out.push_str(&c.text);
    let _ = writeln!(out, "{} (claimed order {claimed})", if ok { "verified" } else { "NOT verified" });
    let mut json = c.json;
    json["id"] = json!(r.entry.as_ref().map(|e| e.id));
    json["claimed"] = json!(claimed);
    json["verified"] = json!(ok);
    emit(cli, json, out);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn metrics_any<S: Scalar>(m: &Method<S>, cost: Option<&CostModel>) -> Result<(String, serde_json::Value), CliError> {
    let r = report(m).map_err(failed)?;
    let mut text = format!("method: {}\norder:  {}\n", format_method(m), r.order.order_text());
    text.push_str(&metrics_line(&r));
    text.push_str("sigma:\n");
    for (l, v) in r.sigma.iter() {
        let _ = writeln!(text, "  {:<5} {}", l.as_str(), v.to_notation());
    }
    text.push_str("rho:\n");
    for (w, v) in r.rho.iter() {
        let _ = writeln!(text, "  {:<6} {}", w.as_str(), v.to_notation());
    }
    let mut json = r.to_json();
    if let Some(cm) = cost {
        let ct = computer_time(&r, cm).map_err(failed)?;
        let _ = writeln!(text, "computer time: {} ({:?}, dt = {}, n = {})", ct.t_c, ct.regime, ct.dt, ct.n);
        json["computer_time"] = serde_json::to_value(&ct).expect("json");
    }
    Ok((text, json))
}

fn metrics(cli: &Cli, text: &str, target: Option<Target>, cost: Option<CostModel>) -> Result<ExitCode, CliError> {
    let r = resolve(text, target, cli.precision)?;
    let (out, json) = match &r.method {
        Any::Exact(m) => metrics_any(m, cost.as_ref())?,
        Any::Double(m) => metrics_any(m, cost.as_ref())?,
        Any::Wide(m) => metrics_any(m, cost.as_ref())?,
    };
    emit(cli, json, out);
    Ok(ExitCode::SUCCESS)
}

fn diff(expected: &str, actual: &str) -> Vec<String> {
    let (e, a): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), actual.lines().collect());
    let mut out = Vec::new();
    for i in 0..e.len().max(a.len()) {
        match (e.get(i), a.get(i)) {
            (Some(x), Some(y)) if x == y => {}
            (x, y) => {
                out.push(format!("line {}:", i + 1));
                if let Some(x) = x {
                    out.push(format!("- {x}"));
                }
                if let Some(y) = y {
                    out.push(format!("+ {y}"));
                }
            }
        }
    }
    out
}

fn tables(csv: bool, check: bool) -> Result<ExitCode, CliError> {
    let t = all_tables();
    let (text, csv_out) = (render_text(&t), render_csv(&t));
    if !check {
        say(if csv { &csv_out } else { &text });
        return Ok(ExitCode::SUCCESS);
    }
    let mut bad = diff(GOLDEN_TEXT, &text);
    bad.extend(diff(GOLDEN_CSV, &csv_out));
    if bad.is_empty() {
        say("tables match golden output\n");
        Ok(ExitCode::SUCCESS)
    } else {
        for l in bad {
            say(&format!("{l}\n"));
        }
        Ok(ExitCode::from(1))
    }
}

fn run_search(cli: &Cli, spec: &SearchSpec, out: Option<&std::path::Path>) -> Result<ExitCode, CliError> {
    spec.validate().map_err(usage)?;
    let res = search(spec).map_err(failed)?;
    let lines: Vec<String> = res.hits.iter().map(|h| h.to_json().to_string()).collect();
    match out {
        Some(p) => {
            let mut body = lines.join("\n");
            body.push('\n');
            std::fs::write(p, body).map_err(|e| failed(format!("{}: {e}", p.display())))?;
        }
        None if cli.json => lines.iter().for_each(|l| say(&format!("{l}\n"))),
        None => {
            for h in &res.hits {
                say(&format!("{:>8}  {:>6}  {}\n", opt(h.report.z, 4), format_fixed_f64(h.report.l_over_d, 2), format_method(&h.method)));
            }
        }
    }
    eprintln!(
        "{} methods ({:?}; {} multisets, {} assignments, {:.2?})",
        res.hits.len(),
        res.status,
        res.multisets,
        res.assignments,
        res.elapsed
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_signs(s: &str) -> Result<Vec<Sign>, CliError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(usage(format!("bad sign `{other}` (use + or -)"))),
        })
        .collect()
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("`{t}`: {e}")))).collect()
}

fn describe_solution<S: Scalar>(m: &Method<S>, residual: Option<f64>) -> (String, serde_json::Value) {
    let o = order_of(m);
    let coeffs: Vec<String> = m.units().iter().map(|u| u.label().to_notation()).collect();
    let mut text = format!("method: {}\norder:  {}\n", format_method(m), o.order_text());
    if let Some(r) = residual {
        let _ = writeln!(text, "residual: {r:e}");
    }
    let json = json!({ "method": format_method(m), "labels": coeffs, "order": o.achieved_order, "residual": residual });
    (text, json)
}

fn solve(
    cli: &Cli,
    order: u32,
    symmetric: bool,
    variant: Option<u32>,
    signs: Option<&str>,
    initial: Option<&str>,
    attempts: usize,
) -> Result<ExitCode, CliError> {
    let wide = match cli.precision {
        Some(Precision::Exact) => return Err(usage("solve needs --precision double or wide")),
        Some(Precision::Double) => false,
        _ => true,
    };
    let mut texts = String::new();
    let mut values = Vec::new();
    if symmetric {
        if order != 4 {
            return Err(usage("the symmetric family is fourth order"));
        }
        let variants = variant.map_or_else(|| vec![1, 2, 3, 4], |v| vec![v]);
        for v in variants {
            let (t, j) = if wide {
                describe_solution(&r4_symmetric::<DoubleDouble>(v).map_err(usage)?, None)
            } else {
                describe_solution(&r4_symmetric::<f64>(v).map_err(usage)?, None)
            };
            let _ = write!(texts, "variant {v}\n{t}");
            values.push(j);
        }
        emit(cli, json!(values), texts);
        return Ok(ExitCode::SUCCESS);
    }
    let signs = parse_signs(signs.ok_or_else(|| usage("give --symmetric or --signs"))?)?;
    // Stop near the working precision so the order check sees zeros.
    let opts = NewtonOptions { tolerance: if wide { 1e-30 } else { 1e-13 }, ..NewtonOptions::default() };
    let starts: Vec<Vec<f64>> = match initial {
        Some(s) => vec![parse_list(s)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(0));
            (0..attempts).map(|_| (0..signs.len()).map(|_| rng.gen_range(-1.5..1.5)).collect()).collect()
        }
    };
    for (k, x0) in starts.iter().enumerate() {
        let found = if wide {
            newton_solve::<DoubleDouble>(&signs, x0, order, &opts).map(|s| describe_solution(&s.method, Some(s.residual)))
        } else {
            newton_solve::<f64>(&signs, x0, order, &opts).map(|s| describe_solution(&s.method, Some(s.residual)))
        };
        match found {
            Ok((t, j)) => {
                log::info!("converged from start {k}");
                emit(cli, j, t);
                return Ok(ExitCode::SUCCESS);
            }
            Err(e @ splitting::irrational::SolveError::DimensionMismatch { .. }) => return Err(usage(e)),
            Err(e) => log::debug!("start {k}: {e}"),
        }
    }
    Err(failed(format!("no solution from {} starting point(s)", starts.len())))
}

fn parse_schedule(s: &str) -> Result<Vec<Step>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (body, sign) = match t.strip_suffix("^-1") {
                Some(b) => (b, Sign::Minus),
                None => (t, Sign::Plus),
            };
            let b = Rational::parse_decimal(body).ok_or_else(|| usage(format!("bad schedule entry `{t}`")))?;
            Ok((sign, b))
        })
        .collect()
}

fn compose(cli: &Cli, base: &str, auto: bool, to: u32, schedule: Option<&str>) -> Result<ExitCode, CliError> {
    let m = exact_method(base)?;
    let (method, order, engine) = match (auto, schedule) {
        (true, None) => {
            let c = compose_auto(&m, to).map_err(failed)?;
            (c.method, c.certified_order, c.engine)
        }
        (false, Some(s)) => {
            let out = raise_order(&m, &parse_schedule(s)?).map_err(failed)?;
            let o = order_of(&out);
            (out.clone(), certify(&out, &o), o)
        }
        _ => return Err(usage("give exactly one of --auto or --schedule")),
    };
    let text = format!(
        "method: {}\nunits:  {}\norder:  {} (engine {})\nself-transpose: {}\n",
        format_method(&method),
        method.len(),
        order,
        engine.order_text(),
        method.is_self_transpose()
    );
    let json = json!({
        "method": format_method(&method),
        "units": method.len(),
        "certified_order": order,
        "engine": engine,
        "self_transpose": method.is_self_transpose(),
    });
    emit(cli, json, text);
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cli: &Cli,
    method: &str,
    set: SetArg,
    spins: usize,
    dt: f64,
    steps: usize,
    stride: usize,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    let (name, m) = float_method(method)?;
    let ops = match set {
        SetArg::Pauli => build_pauli_set(),
        SetArg::Ising => build_ising_nnn(spins).map_err(usage)?,
    };
    let rows = trajectory(&name, &m, &ops, dt, steps, stride).map_err(usage)?;
    let csv = to_csv(&rows);
    match out {
        Some(p) => std::fs::write(p, &csv).map_err(|e| failed(format!("{}: {e}", p.display())))?,
        None if !cli.json => say(&csv),
        None => {}
    }
    let max = rows.iter().map(|r| r.error()).fold(0.0, f64::max);
    let last = rows.last().map(|r| r.error());
    if cli.json {
        say(&format!("{}\n", json!({ "method": name, "rows": rows.len(), "max_error": max, "final_error": last })));
    } else {
        eprintln!("{} rows, max error {max:e}, final error {:e}", rows.len(), last.unwrap_or(0.0));
    }
    Ok(ExitCode::SUCCESS)
}
