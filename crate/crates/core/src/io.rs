//! Point tables as CSV: one point per row, optional header.
//!
//! Tree distance tables use the header `pair:a-b,...` over sorted leaf
//! labels in lexicographic pair order.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PointTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl PointTable {
    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Leaf labels when the header is a pair header.
    pub fn pair_labels(&self) -> Option<Vec<String>> {
        self.header.as_deref().and_then(|h| labels_from_pair_header(h).ok())
    }
}

fn csv_err(row: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Csv { row, col, msg: msg.into() }
}

/// Reads a point table. A first row that does not parse as numbers is the
/// header. Rows and columns in errors are 1-based.
pub fn read_points_csv(r: impl Read) -> Result<PointTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(r);
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let row = n + 1;
        let rec = rec.map_err(|e| csv_err(row, 0, e.to_string()))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Vec<std::result::Result<f64, _>> = rec.iter().map(str::parse::<f64>).collect();
        if n == 0 && parsed.iter().any(|p| p.is_err()) {
            header = Some(rec.iter().map(str::to_string).collect::<Vec<_>>());
            continue;
        }
        let mut vals = Vec::with_capacity(parsed.len());
        for (c, (p, raw)) in parsed.into_iter().zip(rec.iter()).enumerate() {
            match p {
                Ok(v) if v.is_finite() => vals.push(v),
                _ => return Err(csv_err(row, c + 1, format!("`{raw}` is not a finite number"))),
            }
        }
        let width = header.as_ref().map(Vec::len).or(rows.first().map(Vec::len)).unwrap_or(vals.len());
        if vals.len() != width {
            return Err(csv_err(row, vals.len().min(width) + 1, format!("expected {width} fields, found {}", vals.len())));
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    if rows[0].len() < 2 {
        return Err(csv_err(1, 1, "points need at least two coordinates"));
    }
    Ok(PointTable { header, rows })
}

pub fn write_points_csv(w: impl Write, header: Option<&[String]>, rows: &[Vec<f64>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    if let Some(h) = header {
        wtr.write_record(h).map_err(io)?;
    }
    for r in rows {
        wtr.write_record(r.iter().map(|x| format!("{x}"))).map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `pair:a-b` names over sorted labels, lexicographic pairs.
pub fn pair_header(labels: &[String]) -> Result<Vec<String>> {
    if let Some(l) = labels.iter().find(|l| l.is_empty() || l.contains(['-', ',', '"'])) {
        return Err(Error::InvalidArgument(format!("leaf label `{l}` cannot appear in a pair header")));
    }
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            out.push(format!("pair:{}-{}", labels[i], labels[j]));
        }
    }
    Ok(out)
}

/// Inverse of [`pair_header`].
pub fn labels_from_pair_header(header: &[String]) -> Result<Vec<String>> {
    let mut labels = Vec::new();
    for h in header {
        let (a, b) = h
            .strip_prefix("pair:")
            .and_then(|p| p.split_once('-'))
            .ok_or_else(|| Error::InvalidArgument(format!("`{h}` is not a pair column")))?;
        labels.push(a.to_string());
        labels.push(b.to_string());
    }
    labels.sort();
    labels.dedup();
    if pair_header(&labels)? != header {
        return Err(Error::InvalidArgument("pair columns are not in lexicographic order".into()));
    }
    Ok(labels)
}
