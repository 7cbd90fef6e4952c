//! Named symmetric distance tables and their CSV/JSON forms.

use std::fmt::Write as _;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix has {items} names but {rows} rows")]
    Shape { items: usize, rows: usize },
    #[error("row {0} has the wrong number of entries")]
    Ragged(usize),
    #[error("duplicate item name {0:?}")]
    DuplicateName(String),
    #[error("entry ({0}, {1}) is negative or NaN")]
    BadEntry(usize, usize),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Square table of distances between named items. Entries are finite
/// and nonnegative, or `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    items: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn new(items: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        Self::build(items, values, false)
    }

    /// Like [`DistanceMatrix::new`] but admits negative entries, which real
    /// compressors can produce.
    pub fn new_raw(items: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        Self::build(items, values, true)
    }

    fn build(items: Vec<String>, values: Vec<Vec<f64>>, allow_negative: bool) -> Result<Self, MatrixError> {
        if items.len() != values.len() {
            return Err(MatrixError::Shape {
                items: items.len(),
                rows: values.len(),
            });
        }
        let mut sorted: Vec<&String> = items.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatrixError::DuplicateName(w[0].clone()));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != items.len() {
                return Err(MatrixError::Ragged(i));
            }
            for (j, &v) in row.iter().enumerate() {
                if v.is_nan() || (!allow_negative && v < 0.0) {
                    return Err(MatrixError::BadEntry(i, j));
                }
            }
        }
        Ok(Self { items, values })
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|n| n == name)
    }

    /// Header row of names, then one row of values per item.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.items.iter().map(|n| csv_field(n)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.values {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"items": [...], "values": [[...]]}` with infinite entries as `"inf"`.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"items\":");
        out.push_str(&serde_json::to_string(&self.items).expect("strings serialize"));
        out.push_str(",\"values\":[");
        for (i, row) in self.values.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, &v) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                if v.is_finite() {
                    out.push_str(&format_value(v));
                } else {
                    let _ = write!(out, "\"{}\"", format_value(v));
                }
            }
            out.push(']');
        }
        out.push_str("]}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, MatrixError> {
        let v: Value = serde_json::from_str(text).map_err(|e| MatrixError::Parse(e.to_string()))?;
        let items = v["items"]
            .as_array()
            .ok_or_else(|| MatrixError::Parse("missing items".into()))?
            .iter()
            .map(|n| {
                n.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| MatrixError::Parse("item names must be strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let values = v["values"]
            .as_array()
            .ok_or_else(|| MatrixError::Parse("missing values".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| MatrixError::Parse("rows must be arrays".into()))?
                    .iter()
                    .map(json_value)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new_raw(items, values)
    }

    pub fn from_csv(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| MatrixError::Parse("empty input".into()))?;
        let items = split_csv(header)?;
        let values = lines
            .map(|line| {
                split_csv(line)?
                    .iter()
                    .map(|cell| parse_value(cell))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new_raw(items, values)
    }

    /// Accepts either serialization.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }
}

/// Fixed nine decimals; infinities as `inf`.
pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.9}")
    }
}

fn parse_value(cell: &str) -> Result<f64, MatrixError> {
    match cell.trim() {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        s => s
            .parse()
            .map_err(|_| MatrixError::Parse(format!("bad number {s:?}"))),
    }
}

fn json_value(v: &Value) -> Result<f64, MatrixError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| MatrixError::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_value(s),
        other => Err(MatrixError::Parse(format!("bad entry {other}"))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv(line: &str) -> Result<Vec<String>, MatrixError> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match (quoted, c) {
            (true, '"') if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            (true, '"') => quoted = false,
            (false, '"') if cur.is_empty() => quoted = true,
            (false, ',') => fields.push(std::mem::take(&mut cur)),
            (_, c) => cur.push(c),
        }
    }
    if quoted {
        return Err(MatrixError::Parse("unterminated quote".into()));
    }
    fields.push(cur);
    Ok(fields)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DistanceMatrix {
        DistanceMatrix::new(
            vec!["a".into(), "b,c".into()],
            vec![vec![0.0, 0.25], vec![0.25, f64::INFINITY]],
        )
        .unwrap()
    }

    #[test]
    fn csv_form() {
        let m = sample();
        let csv = m.to_csv();
        assert_eq!(csv, "a,\"b,c\"\n0.000000000,0.250000000\n0.250000000,inf\n");
        assert_eq!(DistanceMatrix::parse(&csv).unwrap(), m);
    }

    #[test]
    fn json_form() {
        let m = sample();
        let json = m.to_json();
        assert_eq!(
            json,
            r#"{"items":["a","b,c"],"values":[[0.000000000,0.250000000],[0.250000000,"inf"]]}"#
        );
        assert_eq!(DistanceMatrix::parse(&json).unwrap(), m);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            DistanceMatrix::new(vec!["a".into()], vec![]),
            Err(MatrixError::Shape { .. })
        ));
        assert!(matches!(
            DistanceMatrix::new(vec!["a".into(), "a".into()], vec![vec![0.0; 2]; 2]),
            Err(MatrixError::DuplicateName(_))
        ));
        assert!(matches!(
            DistanceMatrix::new(vec!["a".into()], vec![vec![-0.5]]),
            Err(MatrixError::BadEntry(0, 0))
        ));
        assert!(DistanceMatrix::new_raw(vec!["a".into()], vec![vec![-0.5]]).is_ok());
        assert!(matches!(
            DistanceMatrix::new(vec!["a".into()], vec![vec![0.0, 1.0]]),
            Err(MatrixError::Ragged(0))
        ));
    }
}
