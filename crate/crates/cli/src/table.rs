//! Row tables written both as JSON objects and as CSV, with the same text
//! for every number.

use std::path::Path;

use serde_json::{Map, Value};

use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Null,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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
        Cell::Str(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// JSON cannot hold infinities, so non-finite floats become strings in both
/// outputs.
fn float_text(x: f64) -> Option<&'static str> {
    if x.is_nan() {
        Some("nan")
    } else if x == f64::INFINITY {
        Some("inf")
    } else if x == f64::NEG_INFINITY {
        Some("-inf")
    } else {
        None
    }
}

impl Cell {
    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(x) => match float_text(*x) {
                Some(s) => Value::from(s),
                None => Value::from(*x),
            },
            Cell::Bool(b) => Value::from(*b),
            Cell::Str(s) => Value::from(s.as_str()),
            Cell::Null => Value::Null,
        }
    }

    pub fn to_csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Null => String::new(),
            other => other.to_json().to_string().trim_matches('"').to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": Value::Array(rows) })
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), Failure> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::new(crate::failure::Kind::Io, e.to_string()))?;
        let io = |e: csv::Error| Failure::new(crate::failure::Kind::Io, e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::to_csv)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}
