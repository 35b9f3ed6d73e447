use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Rectangular table of finite numbers and labels with `key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    metadata: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension {
                op: "ResultTable::push",
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        for (cell, column) in row.iter().zip(&self.columns) {
            if let Cell::Num(x) = cell {
                if !x.is_finite() {
                    return Err(Error::domain(
                        "ResultTable::push",
                        format!("column {column} got non-finite value {x}"),
                    ));
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    /// Numeric column by name; `None` if absent or textual.
    pub fn numbers(&self, column: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Num(x) => Some(x),
                Cell::Text(_) => None,
            })
            .collect()
    }

    /// CSV with `# key=value` header lines. Numbers use the shortest
    /// representation that round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format!("{x:?}"),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(&["x", "label"]).with_meta("seed", 7);
        t.push(vec![0.1.into(), "a".into()]).unwrap();
        t.push(vec![2.0.into(), "b".into()]).unwrap();
        assert_eq!(t.to_csv(), "# seed=7\nx,label\n0.1,a\n2.0,b\n");
        assert_eq!(t.numbers("x"), Some(vec![0.1, 2.0]));
        assert_eq!(t.numbers("label"), None);
    }

    #[test]
    fn rejects_ragged_and_non_finite_rows() {
        let mut t = ResultTable::new(&["x"]);
        assert!(t.push(vec![]).is_err());
        assert!(t.push(vec![f64::NAN.into()]).is_err());
        assert!(t.rows().is_empty());
    }
}
