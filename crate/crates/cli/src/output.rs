//! Tables and their CSV/JSON rendering.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    /// Exact value kept as text, e.g. a rational or a big integer.
    Exact(String),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(v) => json!(v),
                Err(_) => json!(v.to_string()),
            },
            Cell::Exact(s) | Cell::Text(s) => json!(s),
            Cell::Float(v) => fmt_float(*v)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map_or(Value::Null, |v| json!(v)),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Twelve significant digits, without trailing zeros.
pub fn fmt_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    let mag = rounded.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One command's result: a table, or a single record when `single` is set.
#[derive(Debug, Clone)]
pub struct Output {
    pub quantity: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single: bool,
    pub notes: Vec<(&'static str, Cell)>,
}

impl Output {
    pub fn table(quantity: &'static str, columns: Vec<&'static str>) -> Self {
        Output {
            quantity,
            columns,
            rows: Vec::new(),
            single: false,
            notes: Vec::new(),
        }
    }

    pub fn record(quantity: &'static str, fields: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row) = fields.into_iter().unzip();
        Output {
            quantity,
            columns,
            rows: vec![row],
            single: true,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.notes.push((key, value.into()));
        self
    }

    pub fn default_format(&self) -> Format {
        if self.single {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

/// Run metadata written into every header.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub timestamp: String,
}

pub fn render(out: &Output, meta: &Meta, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Csv => render_csv(out, meta, w),
        Format::Json => render_json(out, meta, w),
    }
}

fn render_csv(out: &Output, meta: &Meta, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "# thintrace {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# command: {}", meta.command)?;
    writeln!(w, "# quantity: {}", out.quantity)?;
    writeln!(w, "# config: {}", meta.config)?;
    writeln!(w, "# seed: {}", meta.seed)?;
    writeln!(w, "# timestamp: {}", meta.timestamp)?;
    for (k, v) in &out.notes {
        writeln!(w, "# {k}: {}", v.csv())?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&out.columns)?;
    for row in &out.rows {
        csv.write_record(row.iter().map(Cell::csv))?;
    }
    csv.flush()
}

fn render_json(out: &Output, meta: &Meta, w: &mut dyn Write) -> std::io::Result<()> {
    let object = |row: &[Cell]| -> Value {
        Value::Object(
            out.columns
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect::<Map<_, _>>(),
        )
    };
    let notes: Map<String, Value> = out
        .notes
        .iter()
        .map(|(k, v)| (k.to_string(), v.json()))
        .collect();
    let mut doc = json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "command": meta.command,
            "quantity": out.quantity,
            "config": meta.config,
            "seed": meta.seed,
            "timestamp": meta.timestamp,
            "notes": notes,
        }
    });
    if out.single {
        doc["result"] = out.rows.first().map_or(Value::Null, |r| object(r));
    } else {
        doc["rows"] = Value::Array(out.rows.iter().map(|r| object(r)).collect());
    }
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}
