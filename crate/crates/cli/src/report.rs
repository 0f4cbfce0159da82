//! Output records: line-delimited JSON for machines, aligned tables for
//! people. Numbers are printed with 15 significant digits.

use std::fmt::Write as _;

use bidisc::scenario::Tolerances;
use bidisc::C64;

/// Formats a float with 15 significant digits, trailing zeros removed;
/// scientific notation outside `[1e-5, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (14 - exponent).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exponent}", trim(mantissa))
    }
}

fn trim(text: &str) -> &str {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.')
    } else {
        text
    }
}

/// Complex number in the `re+imj` syntax with 15 significant digits per part.
pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        return fmt_num(z.re);
    }
    if z.re == 0.0 {
        return format!("{}j", fmt_num(z.im));
    }
    let im = fmt_num(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}j", fmt_num(z.re))
}

/// Short form for headlines: 6 significant digits.
pub fn fmt_short(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return fmt_num(x);
    }
    fmt_num(format!("{x:.5e}").parse().expect("formatted float parses"))
}

pub fn fmt_pair(p: (C64, C64)) -> String {
    format!("({}, {})", fmt_complex(p.0), fmt_complex(p.1))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Complex(C64),
    Pair((C64, C64)),
    List(Vec<Value>),
}

impl Value {
    fn json(&self, out: &mut String) {
        match self {
            Value::Num(x) if x.is_finite() => out.push_str(&fmt_num(*x)),
            Value::Num(x) => out.push_str(&json_string(&fmt_num(*x))),
            Value::Int(n) => write!(out, "{n}").expect("writing to a string"),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Text(s) => out.push_str(&json_string(s)),
            Value::Complex(z) => out.push_str(&json_string(&fmt_complex(*z))),
            Value::Pair(p) => {
                write!(out, "[{},{}]", json_string(&fmt_complex(p.0)), json_string(&fmt_complex(p.1)))
                    .expect("writing to a string")
            }
            Value::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.json(out);
                }
                out.push(']');
            }
        }
    }

    fn human(&self) -> String {
        match self {
            Value::Num(x) => fmt_num(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
            Value::Text(s) => s.clone(),
            Value::Complex(z) => fmt_complex(*z),
            Value::Pair(p) => fmt_pair(*p),
            Value::List(items) => items.iter().map(Value::human).collect::<Vec<_>>().join(", "),
        }
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

/// An ordered list of named fields; the `record` field comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, name: &str, value: Value) -> Self {
        self.fields.push((name.into(), value));
        self
    }

    pub fn num(self, name: &str, x: f64) -> Self {
        self.field(name, Value::Num(x))
    }

    pub fn int(self, name: &str, n: usize) -> Self {
        self.field(name, Value::Int(n as u64))
    }

    pub fn flag(self, name: &str, b: bool) -> Self {
        self.field(name, Value::Bool(b))
    }

    pub fn text(self, name: &str, s: impl Into<String>) -> Self {
        self.field(name, Value::Text(s.into()))
    }

    pub fn complex(self, name: &str, z: C64) -> Self {
        self.field(name, Value::Complex(z))
    }

    pub fn pair(self, name: &str, p: (C64, C64)) -> Self {
        self.field(name, Value::Pair(p))
    }

    pub fn nums(self, name: &str, xs: &[f64]) -> Self {
        self.field(name, Value::List(xs.iter().map(|&x| Value::Num(x)).collect()))
    }

    /// Appends the fields of `other`, ignoring its kind.
    pub fn extend(mut self, other: Record) -> Self {
        self.fields.extend(other.fields);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"record\":");
        out.push_str(&json_string(&self.kind));
        for (name, value) in &self.fields {
            out.push(',');
            out.push_str(&json_string(name));
            out.push(':');
            value.json(&mut out);
        }
        out.push('}');
        out
    }
}

/// Everything a command prints.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    /// One-line human summary, e.g. the classification of a map.
    pub headline: Option<String>,
    pub records: Vec<Record>,
    /// Replaces the per-record blocks in human output when set.
    pub table: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>, tolerances: Tolerances) -> Self {
        Self {
            command: command.into(),
            seed,
            tolerances,
            headline: None,
            records: Vec::new(),
            table: None,
            passed: true,
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    fn header(&self) -> Record {
        let mut header = Record::new("header")
            .text("version", env!("CARGO_PKG_VERSION"))
            .text("command", &self.command);
        if let Some(seed) = self.seed {
            header = header.field("seed", Value::Int(seed));
        }
        header.field(
            "tolerances",
            Value::List(
                self.tolerances
                    .entries()
                    .iter()
                    .map(|&(name, x)| Value::List(vec![Value::Text(name.into()), Value::Num(x)]))
                    .collect(),
            ),
        )
    }

    fn status(&self) -> Record {
        let mut status = Record::new("status").text("result", if self.passed { "pass" } else { "fail" });
        if let Some(headline) = &self.headline {
            status = status.text("summary", headline);
        }
        status
    }

    /// Line-delimited JSON: header, records, status.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for record in std::iter::once(self.header())
            .chain(self.records.iter().cloned())
            .chain(std::iter::once(self.status()))
        {
            out.push_str(&record.to_json());
            out.push('\n');
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let seed = self.seed.map(|s| format!(", seed {s}")).unwrap_or_default();
        writeln!(out, "bidisc {} {}{seed}", env!("CARGO_PKG_VERSION"), self.command).unwrap();
        let tolerances: Vec<String> = self
            .tolerances
            .entries()
            .iter()
            .map(|(name, x)| format!("{name}={}", fmt_num(*x)))
            .collect();
        writeln!(out, "tolerances: {}", tolerances.join(" ")).unwrap();
        if let Some(headline) = &self.headline {
            writeln!(out, "{headline}").unwrap();
        }
        if let Some(table) = &self.table {
            writeln!(out).unwrap();
            out.push_str(table);
        }
        for record in self.records.iter().filter(|_| self.table.is_none()) {
            writeln!(out).unwrap();
            writeln!(out, "[{}]", record.kind).unwrap();
            let width = record.fields.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
            for (name, value) in &record.fields {
                writeln!(out, "  {name:<width$}  {}", value.human()).unwrap();
            }
        }
        writeln!(out).unwrap();
        writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

/// Aligned table with a header row.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(headers.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
