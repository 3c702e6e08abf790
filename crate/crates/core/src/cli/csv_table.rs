//! Rectangular CSV tables with a fixed float format.

use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// One table cell. Floats are written as `{:.16e}` (17 significant digits),
/// which parses back to the same `f64`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// Reads a cell back from its emitted text.
    pub fn infer(text: &str) -> Cell {
        if text.is_empty() {
            return Cell::Empty;
        }
        match text {
            "true" => return Cell::Bool(true),
            "false" => return Cell::Bool(false),
            _ => {}
        }
        if let Ok(i) = text.parse::<i64>() {
            return Cell::Int(i);
        }
        if text.contains(['e', '.']) || text == "NaN" || text.ends_with("inf") {
            if let Ok(x) = text.parse::<f64>() {
                return Cell::Float(x);
            }
        }
        Cell::Text(text.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Float(x) => write!(f, "{x:.16e}"),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn empty_cells(&self) -> usize {
        self.rows.iter().flatten().filter(|c| **c == Cell::Empty).count()
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = CsvTable::new(header);
        for record in r.records() {
            let record = record?;
            table.push(record.iter().map(Cell::infer).collect())?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(Cell::Float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(Cell::Float(-2.0).to_string(), "-2.0000000000000000e0");
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let mut t = CsvTable::new(["gamma", "q_2_closed", "flag", "label"]);
        t.push(vec![0.1.into(), Cell::Empty, true.into(), "socs".into()]).unwrap();
        t.push(vec![(1.0 / 3.0).into(), (-1e-300).into(), false.into(), "sots".into()]).unwrap();
        let text = t.to_csv_string().unwrap();
        let back = CsvTable::read(text.as_bytes()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv_string().unwrap(), text);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let mut t = CsvTable::new(["a", "b"]);
        assert!(t.push(vec![Cell::Empty]).is_err());
    }
}
