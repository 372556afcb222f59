//! Result records and their table/CSV/JSON renderings.

use std::fmt::Write as _;
use std::io;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(BigUint),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Int(_))
    }

    // Integers are emitted as decimal strings so that no JSON consumer
    // rounds them through a double.
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::String(n.to_string()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<BigUint> for Cell {
    fn from(n: BigUint) -> Self {
        Cell::Int(n)
    }
}

impl From<&BigUint> for Cell {
    fn from(n: &BigUint) -> Self {
        Cell::Int(n.clone())
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// Everything one invocation prints.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Derived facts that are not per-row (period, congruence).
    pub summary: Vec<(&'static str, String)>,
    pub status: Status,
}

impl OutputRecord {
    pub fn new(command: &'static str, columns: Vec<String>) -> Self {
        OutputRecord {
            command,
            parameters: Vec::new(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.parameters.push((key, value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl io::Write) -> io::Result<()> {
        match format {
            Format::Table => out.write_all(self.to_table().as_bytes()),
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                out.write_all(b"\n")
            }
        }
    }

    fn to_table(&self) -> String {
        let rendered: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, h)| {
                rendered.iter().map(|r| r[i].chars().count()).chain([h.chars().count()]).max().unwrap_or(0)
            })
            .collect();
        // A column is right-aligned when every non-empty cell is an integer.
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|i| self.rows.iter().all(|r| r[i].is_numeric() || r[i] == Cell::Empty))
            .collect();

        let mut s = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "# {} {}", self.command, params.join(" "));
        let line = |cells: &[String], s: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let pad = widths[i] - c.chars().count();
                    if numeric[i] {
                        format!("{}{c}", " ".repeat(pad))
                    } else {
                        format!("{c}{}", " ".repeat(pad))
                    }
                })
                .collect();
            let _ = writeln!(s, "{}", padded.join("  ").trim_end());
        };
        line(&self.columns, &mut s);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        let _ = writeln!(s, "{}", rule.join("  "));
        for r in &rendered {
            line(r, &mut s);
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}: {v}");
        }
        if self.status != Status::Ok {
            let _ = writeln!(s, "status: {}", self.status.as_str());
        }
        s
    }

    fn write_csv(&self, out: &mut impl io::Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> =
            self.parameters.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect()))
            .collect();
        let mut obj = Map::new();
        obj.insert("command".into(), self.command.into());
        obj.insert("parameters".into(), Value::Object(params));
        obj.insert("rows".into(), Value::Array(rows));
        if !self.summary.is_empty() {
            let summary: Map<String, Value> =
                self.summary.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            obj.insert("summary".into(), Value::Object(summary));
        }
        obj.insert("status".into(), self.status.as_str().into());
        Value::Object(obj)
    }
}
