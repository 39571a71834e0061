use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

/// Serialized form of infinite markers and divergent exponents.
pub const CAPPED: &str = "inf-capped";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Infinite or divergent; a numeric cap column sits alongside where one applies.
    Capped,
    Empty,
}

impl Cell {
    /// Non-finite values become `Capped`, so NaN never reaches the output.
    pub fn num(x: f64) -> Cell {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Capped
        }
    }

    pub fn text(s: impl ToString) -> Cell {
        Cell::Text(s.to_string())
    }

    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Capped => CAPPED.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::String(CAPPED.into()), Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Capped => Value::String(CAPPED.into()),
            Cell::Empty => Value::Null,
        }
    }
}

/// One output table with its self-describing header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Result metadata, after the echoed configuration.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn header(cfg: &RunConfig, table: &Table) -> Vec<(String, String)> {
    let mut h = vec![
        ("tool".to_string(), env!("CARGO_PKG_NAME").to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    h.extend(cfg.echo());
    h.extend(table.meta.iter().cloned());
    h
}

pub fn render(cfg: &RunConfig, table: &Table) -> Result<Vec<u8>> {
    match cfg.format {
        Format::Csv => render_csv(cfg, table),
        Format::Json => render_json(cfg, table),
    }
}

fn render_csv(cfg: &RunConfig, table: &Table) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for (k, v) in header(cfg, table) {
        writeln!(buf, "# {k}={v}").expect("write to memory");
    }
    let mut w = csv::Writer::from_writer(buf);
    let io = |e: csv::Error| CliError::Config(format!("csv serialization: {e}"));
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Config(format!("csv serialization: {e}")))
}

fn render_json(cfg: &RunConfig, table: &Table) -> Result<Vec<u8>> {
    let head: Map<String, Value> = header(cfg, table).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Object(table.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect())
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("header".into(), Value::Object(head));
    doc.insert("columns".into(), Value::from(table.columns.clone()));
    doc.insert("rows".into(), Value::Array(rows));
    let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).expect("json values serialize");
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the rendered table in one piece to the configured path or standard output.
pub fn emit(cfg: &RunConfig, table: &Table) -> Result<()> {
    let bytes = render(cfg, table)?;
    match &cfg.out {
        Some(path) => write_file(path, &bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
