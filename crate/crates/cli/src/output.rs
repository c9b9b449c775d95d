use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

impl From<Option<u32>> for Cell {
    fn from(v: Option<u32>) -> Self {
        v.map_or(Cell::Missing, Cell::from)
    }
}

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn to_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

/// A table with a fixed column order, plus optional key/value metadata that
/// CSV writes as a leading `#` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub header: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new(), header: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, config: &Value) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(config),
        }
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        if !self.header.is_empty() {
            let line: Vec<String> = self.header.iter().map(|(k, v)| format!("{k}={}", v.to_field())).collect();
            writeln!(buf, "# {}", line.join(",")).map_err(CliError::Io)?;
        }
        let mut writer = csv::Writer::from_writer(buf);
        writer.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::to_field)).map_err(csv_error)?;
        }
        writer.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    fn to_json(&self, config: &Value) -> Result<Vec<u8>, CliError> {
        let mut doc = Map::new();
        doc.insert("config".into(), config.clone());
        if !self.header.is_empty() {
            let header: Map<String, Value> = self.header.iter().map(|(k, v)| ((*k).to_string(), v.to_json())).collect();
            doc.insert("header".into(), Value::Object(header));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(self.columns.iter().zip(row).map(|(c, v)| ((*c).to_string(), v.to_json())).collect())
            })
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.into()))?;
        out.push(b'\n');
        Ok(out)
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(5.05e-23), "5.05e-23");
        assert_eq!(format_float(1e16), "1e16");
        assert_eq!(format_float(13.349304400000001), "13.349304400000001");
        assert_eq!(format_float(0.0), "0");
        for x in [1.0 / 3.0, 2.0f64.sqrt() * 1e-30, 6.02e23, -7.5e-6] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(vec!["m", "k", "ok", "note"]);
        t.push(vec![Cell::from(3u32), Cell::from(1.5), Cell::from(true), Cell::Missing]);
        let csv = String::from_utf8(t.render(Format::Csv, &Value::Null).unwrap()).unwrap();
        assert_eq!(csv, "m,k,ok,note\n3,1.5,true,\n");
        let json = t.render(Format::Json, &serde_json::json!({"n": [2.0]})).unwrap();
        let parsed: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(parsed["rows"][0]["k"], 1.5);
        assert!(parsed["rows"][0]["note"].is_null());
        let mut again = serde_json::to_vec_pretty(&parsed).unwrap();
        again.push(b'\n');
        assert_eq!(again, json);
    }
}
