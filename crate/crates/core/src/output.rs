//! Table records and their CSV/JSON encodings.
//!
//! Floats are written with 12 significant digits in `%g` style, independent
//! of locale, so identical inputs give byte-identical output.

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = [
    "family",
    "hyper",
    "y",
    "e_rel",
    "f_max",
    "param_star",
    "branch",
];

const SIG_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits, `%.12g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

fn json_number(x: f64) -> Value {
    Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hyper {
    Real(f64),
    Int(u32),
}

impl Hyper {
    pub fn value(&self) -> f64 {
        match *self {
            Hyper::Real(x) => x,
            Hyper::Int(m) => m as f64,
        }
    }
}

/// One row of `bound` or `scan` output.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub family: String,
    pub hyper: Option<Hyper>,
    pub y: f64,
    pub e_rel: f64,
    pub f_max: f64,
    pub param_star: f64,
    pub branch: String,
}

impl OutputRecord {
    fn csv_fields(&self) -> [String; 7] {
        [
            self.family.clone(),
            match self.hyper {
                None => String::new(),
                Some(Hyper::Int(m)) => m.to_string(),
                Some(Hyper::Real(x)) => fmt_sig(x),
            },
            fmt_sig(self.y),
            fmt_sig(self.e_rel),
            fmt_sig(self.f_max),
            fmt_sig(self.param_star),
            self.branch.clone(),
        ]
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("family".into(), Value::String(self.family.clone()));
        m.insert(
            "hyper".into(),
            match self.hyper {
                None => Value::Null,
                Some(Hyper::Int(k)) => Value::from(k),
                Some(Hyper::Real(x)) => json_number(x),
            },
        );
        m.insert("y".into(), json_number(self.y));
        m.insert("e_rel".into(), json_number(self.e_rel));
        m.insert("f_max".into(), json_number(self.f_max));
        m.insert("param_star".into(), json_number(self.param_star));
        m.insert("branch".into(), Value::String(self.branch.clone()));
        Value::Object(m)
    }

    /// The record as it reads back after encoding: floats rounded to 12 digits.
    pub fn rounded(&self) -> Self {
        Self {
            hyper: self.hyper.map(|h| match h {
                Hyper::Real(x) => Hyper::Real(round_sig(x)),
                other => other,
            }),
            y: round_sig(self.y),
            e_rel: round_sig(self.e_rel),
            f_max: round_sig(self.f_max),
            param_star: round_sig(self.param_star),
            ..self.clone()
        }
    }

    /// Multi-line `key value` rendering for terminals.
    pub fn to_text(&self) -> String {
        let f = self.csv_fields();
        let mut s = String::new();
        for (k, v) in CSV_HEADER.iter().zip(f.iter()) {
            let v = if v.is_empty() { "-" } else { v.as_str() };
            s.push_str(&format!("{k:<11} {v}\n"));
        }
        s
    }
}

pub fn to_csv(records: &[OutputRecord]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(vec![]);
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record(r.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn to_json(records: &[OutputRecord]) -> String {
    let arr = Value::Array(records.iter().map(OutputRecord::to_json).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("serializable");
    s.push('\n');
    s
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Domain(format!("malformed record: {}", msg.into()))
}

fn parse_f(s: &str) -> Result<f64> {
    s.parse().map_err(|_| bad(format!("not a number: {s:?}")))
}

pub fn from_csv(text: &str) -> Result<Vec<OutputRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(bad("unexpected header"));
    }
    rdr.records()
        .map(|row| {
            let row = row.map_err(|e| bad(e.to_string()))?;
            let hyper = match &row[1] {
                "" => None,
                s if &row[0] == "binomial" => Some(Hyper::Int(s.parse().map_err(|_| bad(s))?)),
                s => Some(Hyper::Real(parse_f(s)?)),
            };
            Ok(OutputRecord {
                family: row[0].to_string(),
                hyper,
                y: parse_f(&row[2])?,
                e_rel: parse_f(&row[3])?,
                f_max: parse_f(&row[4])?,
                param_star: parse_f(&row[5])?,
                branch: row[6].to_string(),
            })
        })
        .collect()
}

pub fn from_json(text: &str) -> Result<Vec<OutputRecord>> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    arr.iter()
        .map(|o| {
            let num = |k: &str| o.get(k).and_then(Value::as_f64).ok_or_else(|| bad(k));
            let text = |k: &str| {
                o.get(k)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| bad(k))
            };
            let family = text("family")?;
            let hyper = match o.get("hyper") {
                None | Some(Value::Null) => None,
                Some(Value::Number(n)) if family == "binomial" => Some(Hyper::Int(
                    n.as_u64()
                        .and_then(|m| u32::try_from(m).ok())
                        .ok_or_else(|| bad("hyper"))?,
                )),
                Some(Value::Number(n)) => Some(Hyper::Real(n.as_f64().unwrap())),
                Some(_) => return Err(bad("hyper")),
            };
            Ok(OutputRecord {
                family,
                hyper,
                y: num("y")?,
                e_rel: num("e_rel")?,
                f_max: num("f_max")?,
                param_star: num("param_star")?,
                branch: text("branch")?,
            })
        })
        .collect()
}
