//! Column-oriented output: CSV with a header row, or one JSON object
//! `{config, columns, rows}` per run. Floats are written in their shortest
//! round-trip form; non-finite values become `inf`/`NaN` in CSV and `null`
//! in JSON.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(s) => s.parse().ok(),
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(_) => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(Option<f64>),
            Text(String),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Num(v) => Cell::Num(v.unwrap_or(f64::NAN)),
            Repr::Text(t) => Cell::Text(t),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Document<C> {
    pub config: C,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| Cell::Num(v)).collect());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write, C: Serialize>(&self, config: &C, out: W) -> Result<()> {
        let doc = Document { config, columns: self.columns.clone(), rows: self.rows.clone() };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }

    /// Read a CSV written by [`Table::write_csv`]; numeric fields become
    /// numbers, anything else text.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = Table::new(columns);
        for rec in r.records() {
            let rec = rec?;
            let cells: Vec<Cell> = rec
                .iter()
                .map(|f| f.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(f.to_string())))
                .collect();
            if cells.len() != table.columns.len() {
                return Err(CliError::Config(format!("csv row has {} fields, header {}", cells.len(), table.columns.len())));
            }
            table.push(cells);
        }
        Ok(table)
    }

    pub fn read_json<R: Read>(input: R) -> Result<(serde_json::Value, Self)> {
        let doc: Document<serde_json::Value> = serde_json::from_reader(input)?;
        Ok((doc.config, Table { columns: doc.columns, rows: doc.rows }))
    }
}
