//! CSV ingestion. Frequency files carry the header `omega,eps_re,eps_im`
//! and time files `t,n`; either may add a trailing `weight` column. Lines
//! starting with `#` are comments.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataDomain {
    Frequency,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub eps_re: f64,
    pub eps_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t: f64,
    pub n: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectrumDataset {
    pub points: Vec<SpectrumPoint>,
    pub weights: Option<Vec<f64>>,
    pub meta: String,
    /// Non-fatal oddities noticed while reading (e.g. negative loss).
    #[serde(skip)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeDataset {
    pub points: Vec<TimePoint>,
    pub weights: Option<Vec<f64>>,
    pub meta: String,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Frequency(SpectrumDataset),
    Time(TimeDataset),
}

impl Dataset {
    pub fn domain(&self) -> DataDomain {
        match self {
            Dataset::Frequency(_) => DataDomain::Frequency,
            Dataset::Time(_) => DataDomain::Time,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Frequency(d) => d.points.len(),
            Dataset::Time(d) => d.points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            Dataset::Frequency(d) => d.weights.as_deref(),
            Dataset::Time(d) => d.weights.as_deref(),
        }
    }

    pub fn warnings(&self) -> &[String] {
        match self {
            Dataset::Frequency(d) => &d.warnings,
            Dataset::Time(d) => &d.warnings,
        }
    }

    /// CSV text in the same format [`parse_csv`] reads, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let w = self.weights();
        match self {
            Dataset::Frequency(d) => {
                out.push_str(if w.is_some() { "omega,eps_re,eps_im,weight\n" } else { "omega,eps_re,eps_im\n" });
                for (i, p) in d.points.iter().enumerate() {
                    let _ = write!(out, "{:e},{:e},{:e}", p.omega, p.eps_re, p.eps_im);
                    if let Some(w) = w {
                        let _ = write!(out, ",{:e}", w[i]);
                    }
                    out.push('\n');
                }
            }
            Dataset::Time(d) => {
                out.push_str(if w.is_some() { "t,n,weight\n" } else { "t,n\n" });
                for (i, p) in d.points.iter().enumerate() {
                    let _ = write!(out, "{:e},{:e}", p.t, p.n);
                    if let Some(w) = w {
                        let _ = write!(out, ",{:e}", w[i]);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn field(rec: &csv::StringRecord, i: usize, name: &str, line: usize) -> Result<f64> {
    let raw = rec.get(i).ok_or_else(|| Error::Parse { line, reason: format!("missing column '{name}'") })?;
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, reason: format!("column '{name}': '{raw}' is not a number") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, reason: format!("column '{name}' is not finite") });
    }
    Ok(v)
}

/// Reads a dataset of the given domain from CSV text.
pub fn parse_csv<R: Read>(reader: R, domain: DataDomain) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, reason: e.to_string() })?.clone();
    let header_line = header.position().map_or(1, |p| p.line() as usize);
    let names: Vec<&str> = header.iter().collect();
    let base: &[&str] = match domain {
        DataDomain::Frequency => &["omega", "eps_re", "eps_im"],
        DataDomain::Time => &["t", "n"],
    };
    let weighted = names.len() == base.len() + 1 && names[base.len()] == "weight";
    if names.get(..base.len()) != Some(base) || !(names.len() == base.len() || weighted) {
        let want = base.join(",");
        return Err(Error::Parse {
            line: header_line,
            reason: format!("expected header '{want}' or '{want},weight', found '{}'", names.join(",")),
        });
    }
    let ncol = names.len();
    let mut rows: Vec<(Vec<f64>, usize)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != ncol {
            return Err(Error::Parse { line, reason: format!("expected {ncol} fields, found {}", rec.len()) });
        }
        let vals = (0..ncol).map(|i| field(&rec, i, names[i], line)).collect::<Result<Vec<_>>>()?;
        if let Some(&w) = vals.get(base.len()) {
            if !(w > 0.0) {
                return Err(Error::Parse { line, reason: format!("weight must be positive, got {w}") });
            }
        }
        if let Some((prev, _)) = rows.last() {
            if !(vals[0] > prev[0]) {
                return Err(Error::Parse { line, reason: format!("'{}' must be strictly increasing", base[0]) });
            }
        }
        let ok = match domain {
            DataDomain::Frequency => vals[0] > 0.0,
            DataDomain::Time => vals[0] >= 0.0,
        };
        if !ok {
            return Err(Error::Parse { line, reason: format!("'{}' out of range: {}", base[0], vals[0]) });
        }
        rows.push((vals, line));
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let weights = weighted.then(|| rows.iter().map(|(v, _)| v[base.len()]).collect());
    let mut warnings = Vec::new();
    Ok(match domain {
        DataDomain::Frequency => {
            for (v, line) in &rows {
                if v[2] < 0.0 {
                    warnings.push(format!("line {line}: negative loss eps_im = {}", v[2]));
                }
            }
            let points = rows.iter().map(|(v, _)| SpectrumPoint { omega: v[0], eps_re: v[1], eps_im: v[2] }).collect();
            Dataset::Frequency(SpectrumDataset { points, weights, meta: String::new(), warnings })
        }
        DataDomain::Time => {
            let (first, line) = &rows[0];
            if (first[1] - 1.0).abs() > 0.1 {
                warnings.push(format!("line {line}: first relaxation value {} is far from 1", first[1]));
            }
            let points = rows.iter().map(|(v, _)| TimePoint { t: v[0], n: v[1] }).collect();
            Dataset::Time(TimeDataset { points, weights, meta: String::new(), warnings })
        }
    })
}

/// [`parse_csv`] on a file; `meta` is set to the path.
pub fn parse_csv_path(path: &Path, domain: DataDomain) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    let mut ds = parse_csv(std::io::BufReader::new(file), domain)?;
    let label = path.display().to_string();
    match &mut ds {
        Dataset::Frequency(d) => d.meta = label,
        Dataset::Time(d) => d.meta = label,
    }
    Ok(ds)
}
