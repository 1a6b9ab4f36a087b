//! JSON and CSV rendering. JSON numbers are decimal strings that round-trip
//! exactly; CSV numbers carry a fixed number of significant digits.

use super::{Format, SCHEMA_VERSION};
use serde_json::{Map, Value};

/// Shortest decimal string that parses back to `x`; "NaN", "inf", "-inf"
/// for non-finite values.
pub fn num(x: f64) -> Value {
    Value::String(decimal(x))
}

fn decimal(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

/// `x` in scientific notation with `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", digits.saturating_sub(1), x)
    } else {
        decimal(x)
    }
}

pub enum Cell {
    Num(f64),
    Text(String),
}

pub struct Report {
    command: &'static str,
    pub default_format: Format,
    body: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    table_in_json: bool,
}

impl Report {
    pub fn new(
        command: &'static str,
        default_format: Format,
        body: Value,
        header: &[&'static str],
        rows: Vec<Vec<Cell>>,
    ) -> Self {
        Self { command, default_format, body, header: header.to_vec(), rows, table_in_json: false }
    }

    /// Also emit the CSV table as `rows` in the JSON document.
    pub fn with_table_in_json(mut self) -> Self {
        self.table_in_json = true;
        self
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
        doc.insert("command".into(), Value::String(self.command.into()));
        if let Value::Object(b) = &self.body {
            doc.extend(b.clone());
        }
        if self.table_in_json {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(r)
                        .map(|(h, c)| {
                            let v = match c {
                                Cell::Num(x) => num(*x),
                                Cell::Text(s) => Value::String(s.clone()),
                            };
                            (h.to_string(), v)
                        })
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self, digits: usize) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| match c {
                Cell::Num(x) => sig(*x, digits),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_strings_round_trip() {
        for x in [0.1, -2.5e-300, 1.0 / 3.0, 123456789.0, 0.0] {
            assert_eq!(decimal(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(decimal(f64::NAN), "NaN");
        assert_eq!(decimal(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let x = 0.5649339190305367;
        assert_eq!(sig(x, 17), "5.6493391903053669e-1");
        assert_eq!(sig(x, 17).parse::<f64>().unwrap(), x);
    }
}
