//! CSV and JSON rendering of command results.
//!
//! CSV: `# key=value` header lines, then one or more tables, each introduced
//! by `# table=<name>` and a column row. Comma separated, LF line endings.
//! JSON: a single object with `schema: 1`.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(k) => json!(k),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(k: u64) -> Self {
        Cell::Int(k)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub config: RunConfig,
    /// Derived scalars shown after the config (e.g. the zero-gap fraction).
    pub summary: RunConfig,
    pub tables: Vec<Table>,
    /// Structured report, emitted only in JSON.
    pub report: Option<Value>,
}

impl Document {
    pub fn new(command: &'static str, config: RunConfig) -> Self {
        Self { command, config, summary: RunConfig::default(), tables: Vec::new(), report: None }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("serialisable");
                s.push('\n');
                s
            }
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# loggap {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# command={}\n", self.command));
        for (k, v) in self.config.entries.iter().chain(&self.summary.entries) {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for t in &self.tables {
            out.push_str(&format!("# table={}\n", t.name));
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }

    fn json(&self) -> Value {
        let pairs = |c: &RunConfig| {
            Value::Object(c.entries.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>())
        };
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|row| Value::Object(t.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect()))
                .collect();
            tables.insert(t.name.to_string(), Value::Array(rows));
        }
        let mut doc = json!({
            "schema": SCHEMA,
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": pairs(&self.config),
            "summary": pairs(&self.summary),
            "tables": tables,
        });
        if let Some(report) = &self.report {
            doc["report"] = report.clone();
        }
        doc
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> Document {
        let mut cfg = RunConfig::default();
        cfg.push("base", "e");
        let mut d = Document::new("theory", cfg);
        let mut t = Table::new("curve", &["s", "cdf"]);
        t.push(vec![0.5.into(), 0.25.into()]);
        d.tables.push(t);
        d
    }

    #[test]
    fn csv_layout() {
        let text = doc().render(Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# loggap "));
        assert_eq!(&lines[1..], ["# command=theory", "# base=e", "# table=curve", "s,cdf", "0.5,0.25"]);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_has_schema() {
        let v: Value = serde_json::from_str(&doc().render(Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["tables"]["curve"][0]["cdf"], 0.25);
    }
}
