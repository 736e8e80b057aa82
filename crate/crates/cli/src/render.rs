use serde_json::Value;

use bsc4_core::prob::{format_decimal, parse_fraction};

use crate::Format;

/// JSON keys whose string values are exact fractions.
const FRACTION_KEYS: [&str; 4] = ["lambda", "lambda_a", "lambda_b", "difference"];

/// A command result in every output shape.
pub struct Output {
    pub json: Value,
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Table columns holding exact fractions.
    pub fraction_cols: Vec<usize>,
    /// Replaces the generated text rendering.
    pub text: Option<String>,
}

impl Output {
    pub fn new(json: Value, title: &str, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            title: title.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            fraction_cols: Vec::new(),
            text: None,
        }
    }

    pub fn with_fraction_cols(mut self, cols: &[usize]) -> Self {
        self.fraction_cols = cols.to_vec();
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }
}

fn approx(s: &str, digits: usize) -> Option<String> {
    parse_fraction(s).ok().map(|x| format_decimal(&x, digits))
}

/// Mirrors fraction strings, arrays and maps of them as decimals.
fn approx_value(v: &Value, digits: usize) -> Option<Value> {
    match v {
        Value::String(s) => approx(s, digits).map(Value::String),
        Value::Array(a) => a.iter().map(|x| approx_value(x, digits)).collect::<Option<Vec<_>>>().map(Value::Array),
        Value::Object(m) => m
            .iter()
            .map(|(k, x)| approx_value(x, digits).map(|y| (k.clone(), y)))
            .collect::<Option<serde_json::Map<_, _>>>()
            .map(Value::Object),
        _ => None,
    }
}

/// Adds `<key>_approx` next to every fraction-valued key.
fn add_approx(v: &mut Value, digits: usize) {
    match v {
        Value::Object(m) => {
            let extra: Vec<(String, Value)> = FRACTION_KEYS
                .iter()
                .filter_map(|k| {
                    let a = approx_value(m.get(*k)?, digits)?;
                    Some((format!("{k}_approx"), a))
                })
                .collect();
            for x in m.values_mut() {
                add_approx(x, digits);
            }
            m.extend(extra);
        }
        Value::Array(a) => a.iter_mut().for_each(|x| add_approx(x, digits)),
        _ => {}
    }
}

fn with_approx_columns(out: &Output, digits: usize) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = out.header.clone();
    for &c in &out.fraction_cols {
        header.push(format!("{}_approx", out.header[c]));
    }
    let rows = out
        .rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            for &c in &out.fraction_cols {
                let a = approx(&r[c], digits).unwrap_or_default();
                r.push(a);
            }
            r
        })
        .collect();
    (header, rows)
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn text(title: &str, header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = String::new();
    if !title.is_empty() {
        s.push_str(title);
        s.push('\n');
    }
    s.push_str(&line(header));
    for r in rows {
        s.push_str(&line(r));
    }
    s
}

pub fn render(out: &Output, format: Format, decimal: Option<usize>) -> String {
    match format {
        Format::Json => {
            let mut v = out.json.clone();
            if let Some(k) = decimal {
                add_approx(&mut v, k);
            }
            serde_json::to_string_pretty(&v).expect("plain data") + "\n"
        }
        Format::Csv => match decimal {
            Some(k) => {
                let (h, r) = with_approx_columns(out, k);
                csv(&h, &r)
            }
            None => csv(&out.header, &out.rows),
        },
        Format::Text => {
            let mut s = match (&out.text, decimal) {
                (Some(t), None) => t.clone(),
                (_, Some(k)) => {
                    let (h, r) = with_approx_columns(out, k);
                    text(&out.title, &h, &r)
                }
                (None, None) => text(&out.title, &out.header, &out.rows),
            };
            if decimal.is_some() && !out.fraction_cols.is_empty() {
                s.push_str("(*_approx columns are rounded decimals; exact values are the fractions)\n");
            }
            s
        }
    }
}
