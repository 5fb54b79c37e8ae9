//! Keyed series, CSV reading/writing and key alignment.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordered `(key, value)` observations of one signal.
///
/// Keys are opaque strings and unique; values are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    name: String,
    keys: Vec<String>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, keys: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if keys.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{name}: {} keys but {} values",
                keys.len(),
                values.len()
            )));
        }
        if keys.is_empty() {
            return Err(Error::EmptyFile(name));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        let mut seen = HashSet::with_capacity(keys.len());
        for k in &keys {
            if !seen.insert(k.as_str()) {
                return Err(Error::DuplicateKey(k.clone()));
            }
        }
        Ok(Self { name, keys, values })
    }

    /// Series keyed by `0, 1, .., n-1`.
    pub fn from_values(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let keys = (0..values.len()).map(|i| i.to_string()).collect();
        Self::new(name, keys, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same keys, values replaced. Used by transforms that keep the index.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.name.clone(), self.keys.clone(), values)
    }

    /// Points `range` of the series, keys included.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.keys[range.clone()].to_vec(),
            self.values[range].to_vec(),
        )
    }
}

/// Result of [`align`]: both series share one key list.
#[derive(Clone, Debug, PartialEq)]
pub struct Aligned {
    pub a: TimeSeries,
    pub b: TimeSeries,
    pub dropped: DroppedRows,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DroppedRows {
    pub a: usize,
    pub b: usize,
}

/// Inner join on keys, in the order of `a`.
pub fn align(a: &TimeSeries, b: &TimeSeries) -> Result<Aligned> {
    let b_index: HashMap<&str, usize> = b
        .keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let mut keys = Vec::new();
    let mut a_vals = Vec::new();
    let mut b_vals = Vec::new();
    for (k, &v) in a.keys.iter().zip(&a.values) {
        if let Some(&j) = b_index.get(k.as_str()) {
            keys.push(k.clone());
            a_vals.push(v);
            b_vals.push(b.values[j]);
        }
    }
    if keys.is_empty() {
        return Err(Error::NoCommonKeys {
            a: a.name.clone(),
            b: b.name.clone(),
        });
    }
    let dropped = DroppedRows {
        a: a.len() - keys.len(),
        b: b.len() - keys.len(),
    };
    Ok(Aligned {
        a: TimeSeries::new(a.name.clone(), keys.clone(), a_vals)?,
        b: TimeSeries::new(b.name.clone(), keys, b_vals)?,
        dropped,
    })
}

/// Checks that two series have identical key lists.
pub fn ensure_aligned(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::NotAligned(format!(
            "{} has {} points, {} has {}",
            a.name,
            a.len(),
            b.name,
            b.len()
        )));
    }
    if let Some(i) = a.keys.iter().zip(&b.keys).position(|(x, y)| x != y) {
        return Err(Error::NotAligned(format!(
            "row {i}: key {:?} vs {:?}",
            a.keys[i], b.keys[i]
        )));
    }
    Ok(())
}

/// Reads one value column of a CSV file, keyed by another column.
pub fn read_csv(
    path: impl AsRef<Path>,
    key_column: &str,
    value_column: &str,
) -> Result<TimeSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    read_csv_from(file, &name, key_column, value_column)
}

/// Like [`read_csv`] for any reader. `name` labels the series.
pub fn read_csv_from<R: Read>(
    reader: R,
    name: &str,
    key_column: &str,
    value_column: &str,
) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(Error::EmptyFile(name.to_string()));
    }
    let column = |wanted: &str| {
        headers
            .iter()
            .position(|h| h == wanted)
            .ok_or_else(|| Error::MissingColumn(wanted.to_string()))
    };
    let key_idx = column(key_column)?;
    let value_idx = column(value_column)?;

    let mut keys = Vec::new();
    let mut values = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // header is line 1
        let row = i + 2;
        let key = record.get(key_idx).unwrap_or("").to_string();
        let raw = record.get(value_idx).unwrap_or("");
        let value = parse_decimal(raw).ok_or_else(|| Error::ParseError {
            row,
            column: value_column.to_string(),
            value: raw.to_string(),
        })?;
        if !seen.insert(key.clone()) {
            return Err(Error::DuplicateKey(key));
        }
        keys.push(key);
        values.push(value);
    }
    if keys.is_empty() {
        return Err(Error::EmptyFile(name.to_string()));
    }
    TimeSeries::new(name, keys, values)
}

/// Plain or scientific decimal notation; no separators, no inf/nan.
fn parse_decimal(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Writes `key_header,value_header` followed by one row per observation.
///
/// Values use the shortest representation that parses back to the same `f64`.
pub fn write_csv_to<W: Write>(
    series: &TimeSeries,
    writer: W,
    key_header: &str,
    value_header: &str,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record([key_header, value_header])?;
    for (k, v) in series.keys.iter().zip(&series.values) {
        wtr.write_record([k.as_str(), v.to_string().as_str()])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_csv(
    series: &TimeSeries,
    path: impl AsRef<Path>,
    key_header: &str,
    value_header: &str,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv_to(
        series,
        std::io::BufWriter::new(file),
        key_header,
        value_header,
    )
}
