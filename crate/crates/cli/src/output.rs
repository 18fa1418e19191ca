//! Tables and their JSON / CSV encodings.
//!
//! Floats are written with 17 significant digits (`{:.16e}`); non-finite
//! values become `null` in JSON and `nan` in CSV.

use std::io::Write;

use clap::ValueEnum;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A float serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "nan".to_string()
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => Num(*v).text(),
            Cell::Text(t) => t.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) => Num(*v).serialize(s),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Column-major table with a JSON metadata block.
#[derive(Clone, Debug)]
pub struct Table {
    pub meta: Box<RawValue>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<M: Serialize>(meta: &M, columns: Vec<&'static str>) -> Self {
        Table {
            meta: raw(meta),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, self).map_err(|e| CliError::Io(e.into()))?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "# meta: {}", self.meta.get())?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns).map_err(csv_io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text)).map_err(csv_io)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Compact JSON of `v`, kept verbatim so floats stay in [`Num`] form.
pub fn raw<T: Serialize + ?Sized>(v: &T) -> Box<RawValue> {
    let text = serde_json::to_string(v).expect("in-memory serialization");
    RawValue::from_string(text).expect("valid JSON")
}

fn csv_io(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => CliError::Io(e),
        other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// `{"meta": …, "<column>": [values…], …}` in column order.
impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.columns.len() + 1))?;
        m.serialize_entry("meta", &self.meta)?;
        for (k, name) in self.columns.iter().enumerate() {
            let col: Vec<&Cell> = self.rows.iter().map(|r| &r[k]).collect();
            m.serialize_entry(name, &col)?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(Num(0.1).text(), "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&Num(-2.5)).unwrap(), "-2.5000000000000000e0");
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        let back: f64 = Num(1.0 / 3.0).text().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn table_encodings() {
        let mut t = Table::new(&json!({"k": 1}), vec!["a", "b"]);
        t.push(vec![1u32.into(), 0.5.into()]);
        t.push(vec![2u32.into(), f64::NAN.into()]);
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "# meta: {\"k\":1}\na,b\n1,5.0000000000000000e-1\n2,nan\n"
        );
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["a"], json!([1, 2]));
        assert_eq!(v["b"][1], serde_json::Value::Null);
    }
}
