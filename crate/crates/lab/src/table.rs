//! CSV tables with unit-suffixed headers.
//!
//! Headers read `name[unit]`. Numeric columns carry a physical unit (`1` for
//! dimensionless), text columns carry `label`. Floats are written in the
//! shortest form that parses back to the same value.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{LabError, Result};

pub const TEXT_UNIT: &str = "label";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(v) => write!(out, "{v:?}").unwrap(),
            Cell::Int(v) => write!(out, "{v}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }

    fn is_numeric(&self) -> bool {
        !matches!(self, Cell::Text(_))
    }

    fn order(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Num(a), Cell::Num(b)) => a.total_cmp(b),
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            _ => Ordering::Equal,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
    key_columns: usize,
}

impl Table {
    /// `columns` are `(name, unit)` pairs; the first `key_columns` are the
    /// input coordinates that rows are sorted by.
    pub fn new(columns: &[(&str, &str)], key_columns: usize) -> Self {
        assert!(key_columns <= columns.len());
        Self {
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
            key_columns,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Vec<Cell>>) {
        for r in rows {
            self.push(r);
        }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of a numeric column, in row order.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let idx = self.column_index(name).expect("no such column");
        self.rows
            .iter()
            .map(|r| match &r[idx] {
                Cell::Num(v) => *v,
                Cell::Int(v) => *v as f64,
                Cell::Text(_) => f64::NAN,
            })
            .collect()
    }

    pub fn sort_rows(&mut self) {
        let keys = self.key_columns;
        self.rows.sort_by(|a, b| {
            a[..keys]
                .iter()
                .zip(&b[..keys])
                .map(|(x, y)| x.order(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
    }

    /// Every column has a unit, numeric cells are finite and sit only in
    /// numeric columns.
    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.columns.iter().enumerate() {
            if c.name.is_empty() || c.unit.is_empty() {
                return Err(LabError::Schema(format!("column {i} lacks a name or unit")));
            }
            let text_column = c.unit == TEXT_UNIT;
            for row in &self.rows {
                let cell = &row[i];
                if cell.is_numeric() == text_column {
                    return Err(LabError::Schema(format!(
                        "column `{}` mixes text and numbers",
                        c.name
                    )));
                }
                if let Cell::Num(v) = cell {
                    if !v.is_finite() {
                        return Err(LabError::Schema(format!(
                            "non-finite value in column `{}`",
                            c.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `#` provenance lines, the header, then one line per row.
    pub fn to_csv(&self, provenance: &[String]) -> String {
        let mut out = String::new();
        for line in provenance {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}[{}]", c.name, c.unit))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// Checks a rendered CSV: after the `#` lines, every header field is
/// `name[unit]` and every numeric-unit column parses as numbers.
pub fn check_csv(text: &str) -> std::result::Result<(), String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or("missing header")?;
    let mut units = Vec::new();
    for field in header.split(',') {
        let (name, rest) = field
            .split_once('[')
            .ok_or_else(|| format!("header `{field}` has no unit"))?;
        let unit = rest
            .strip_suffix(']')
            .ok_or_else(|| format!("header `{field}` is malformed"))?;
        if name.is_empty() || unit.is_empty() {
            return Err(format!("header `{field}` has an empty name or unit"));
        }
        units.push(unit);
    }
    for (n, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != units.len() {
            return Err(format!("row {n} has {} fields", cells.len()));
        }
        for (cell, unit) in cells.iter().zip(&units) {
            if *unit != TEXT_UNIT && cell.parse::<f64>().is_err() {
                return Err(format!("row {n}: `{cell}` is not numeric"));
            }
        }
    }
    Ok(())
}
