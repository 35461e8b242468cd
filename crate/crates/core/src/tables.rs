//! Metric and residual tables for the catalog, as aligned text or CSV.
//! Every cell is computed; nothing is copied from the printed values.

use crate::catalog::{lookup, Entry, PrintedResiduals};
use crate::residual::{format_fixed, format_fixed_f64, report, RhoVector, Word};
use crate::scalar::{convert, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub note: Option<String>,
}

impl Table {
    pub fn to_text(&self) -> String {
        let cols = self.headers.len();
        let width: Vec<usize> = (0..cols)
            .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.headers[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = width[c]) } else { format!("{s:>w$}", w = width[c]) })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = format!("{}\n{}\n", self.title, line(&self.headers));
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        if let Some(n) = &self.note {
            out.push_str(&format!("* {n}\n"));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8");
        format!("# {}\n{body}", self.title)
    }
}

fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn entry(id: &str) -> Entry {
    lookup(id).expect("catalog id")
}

/// `D, L, I, L/D, R/D, Z` for the integer methods of one order.
pub fn metric_table(order: u32) -> Table {
    let ids: Vec<String> = match order {
        3 => (1..=5).map(|k| format!("Z3_{k}")).collect(),
        _ => (1..=4).map(|k| format!("Z4_{k}")).collect(),
    };
    let rows = ids
        .iter()
        .map(|id| {
            let r = report(&entry(id).exact().expect("integer method")).expect("positive D");
            vec![
                id.clone(),
                r.d.to_notation(),
                r.l.to_notation(),
                r.i.to_string(),
                format_fixed_f64(r.l_over_d, 2),
                format_fixed_f64(r.r_over_d.unwrap_or(f64::NAN), 1),
                format_fixed_f64(r.z.unwrap_or(f64::NAN), 1),
            ]
        })
        .collect();
    Table {
        title: format!("Order-{order} integer methods"),
        headers: headers(&["method", "D", "L", "I", "L/D", "R/D", "Z"]),
        rows,
        note: None,
    }
}

/// The same columns for the irrational methods, in double-double arithmetic.
pub fn irrational_metric_table() -> Table {
    let rows = ["R3_1", "R4_1", "R4_2", "R4_3", "R4_4"]
        .iter()
        .map(|id| {
            let r = report(&entry(id).wide()).expect("positive D");
            vec![
                id.to_string(),
                format_fixed_f64(r.d.to_f64(), 2),
                format_fixed_f64(r.l.to_f64(), 6),
                r.i.to_string(),
                format_fixed_f64(r.l_over_d, 2),
                format_fixed_f64(r.r_over_d.unwrap_or(f64::NAN), 3),
                format_fixed_f64(r.z.unwrap_or(f64::NAN), 2),
            ]
        })
        .collect();
    Table {
        title: "Irrational methods".into(),
        headers: headers(&["method", "D", "L", "I", "L/D", "R/D", "Z"]),
        rows,
        note: None,
    }
}

/// Residual vector as printed for an entry: swapped when the printed row is.
pub fn printed_form<S: Scalar>(rho: RhoVector<S>, printed: &PrintedResiduals) -> RhoVector<S> {
    if printed.swapped {
        rho.swap_entries()
    } else {
        rho
    }
}

fn rho_of(e: &Entry) -> (RhoVector<Rational>, bool) {
    match e.exact() {
        Some(m) => (report(&m).expect("positive D").rho, true),
        None => {
            let r = report(&e.wide()).expect("positive D").rho;
            let mut out = RhoVector::<Rational>::zero();
            for (w, v) in r.iter() {
                out.set(w, convert(v));
            }
            (out, false)
        }
    }
}

fn residual_table(title: &str, ids: &[&str], lead: Word, words: &[Word], decimals: usize) -> Table {
    let mut note = None;
    let rows = ids
        .iter()
        .map(|id| {
            let e = entry(id);
            let printed = e.residuals.expect("catalog residual row");
            let (rho, exact) = rho_of(&e);
            let rho = printed_form(rho, &printed);
            let mut name = id.to_string();
            if printed.swapped {
                name.push('*');
                note = Some(format!("{id}: A_1 and A_2 exchanged in every unit"));
            }
            let cell = |w: Word| {
                let v = rho.get(w);
                if exact {
                    format_fixed(v, decimals)
                } else {
                    format_fixed_f64(v.to_f64(), decimals)
                }
            };
            std::iter::once(name).chain(std::iter::once(cell(lead))).chain(words.iter().map(|&w| cell(w))).collect()
        })
        .collect();
    let mut head = vec!["method".to_string(), format!("rho_{lead}")];
    head.extend(words.iter().map(|w| format!("rho_{w}")));
    Table { title: title.into(), headers: head, rows, note }
}

pub fn residual_tables() -> Vec<Table> {
    let z3 = ["Z3_1", "Z3_2", "Z3_3", "Z3_4", "Z3_5"];
    let z4 = ["Z4_1", "Z4_2", "Z4_3", "Z4_4"];
    let r4 = ["R4_1", "R4_2", "R4_3", "R4_4"];
    let third = PrintedResiduals::THIRD_WORDS;
    let fourth = PrintedResiduals::FOURTH_WORDS;
    vec![
        residual_table("Order-3 integer residuals", &z3, Word::W1, &third, 1),
        residual_table("Order-3 integer residuals, next order", &z3, Word::W1, &fourth, 1),
        residual_table("Order-3 irrational residuals", &["R3_1"], Word::W1, &[&third[..], &fourth[..]].concat(), 6),
        residual_table("Order-4 integer residuals", &z4, Word::W1, &fourth, 1),
        residual_table("Order-4 irrational residuals", &r4, Word::W1, &fourth, 6),
        residual_table("Order-4 commutator residuals", &["COMM4"], Word::W12, &fourth, 1),
    ]
}

pub fn all_tables() -> Vec<Table> {
    let mut out = vec![metric_table(3), metric_table(4), irrational_metric_table()];
    out.extend(residual_tables());
    out
}

pub fn render_text(tables: &[Table]) -> String {
    tables.iter().map(Table::to_text).collect::<Vec<_>>().join("\n")
}

pub fn render_csv(tables: &[Table]) -> String {
    tables.iter().map(Table::to_csv).collect::<Vec<_>>().join("\n")
}
