//! [`CheckReport`] and its JSONL / CSV encodings.
//!
//! JSONL field order: `check_name, params, lhs, rhs, ratio, passed,
//! tolerance, asserted, notes`. CSV columns are the same, with `params`
//! flattened to `key=value;key=value` in key order and reals written in
//! shortest round-trip form. Non-finite reals are written as `inf`, `-inf`
//! or `nan` (JSON strings).

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::norms::NormParams;

/// A parameter value recorded in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Real(x) => write!(f, "{x:?}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

impl ParamValue {
    /// Inverse of `Display`: integers, then finite reals, else text.
    pub fn parse(s: &str) -> ParamValue {
        if let Ok(i) = s.parse::<i64>() {
            return ParamValue::Int(i);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => ParamValue::Real(x),
            _ => ParamValue::Text(s.to_string()),
        }
    }
}

/// Ordered parameter map.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.0.insert(key.to_string(), ParamValue::Int(v));
        self
    }

    pub fn real(mut self, key: &str, v: f64) -> Self {
        let value = if v.is_finite() {
            ParamValue::Real(v)
        } else {
            ParamValue::Text(float_name(v).to_string())
        };
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.0.insert(key.to_string(), ParamValue::Text(v.into()));
        self
    }

    /// Exponent: real, or `"inf"`.
    pub fn norm(self, key: &str, p: NormParams) -> Self {
        self.real(key, p.p())
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    /// `k=v;k=v` in key order.
    pub fn flatten(&self) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn unflatten(s: &str) -> Result<Params> {
        let mut out = Params::new();
        if s.is_empty() {
            return Ok(out);
        }
        for part in s.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("bad parameter entry {part:?}")))?;
            out.0.insert(k.to_string(), ParamValue::parse(v));
        }
        Ok(out)
    }
}

fn float_name(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

mod float_text {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(float_name(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => parse_float(&t).map_err(serde::de::Error::custom),
        }
    }
}

fn parse_float(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" | "NaN" => Ok(f64::NAN),
        t => t.parse().map_err(|_| invalid(format!("bad number {t:?}"))),
    }
}

fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        float_name(x).to_string()
    }
}

/// One verified instance of an inequality or identity.
///
/// `passed` follows the check's rule: `ratio <= 1 + tolerance` for
/// inequalities, `|lhs - rhs| <= tolerance * max(1, |rhs|)` for identities.
/// Reports with `asserted == false` record an empirical quantity (such as
/// an estimated constant) and never fail a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub params: Params,
    #[serde(with = "float_text")]
    pub lhs: f64,
    #[serde(with = "float_text")]
    pub rhs: f64,
    #[serde(with = "float_text")]
    pub ratio: f64,
    pub passed: bool,
    #[serde(with = "float_text")]
    pub tolerance: f64,
    pub asserted: bool,
    pub notes: String,
}

/// `lhs / rhs` with `0/0 = 1`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        1.0
    } else {
        lhs / rhs
    }
}

impl CheckReport {
    /// `lhs <= rhs` up to relative tolerance.
    pub fn inequality(name: &str, params: Params, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let r = ratio(lhs, rhs);
        CheckReport {
            check_name: name.to_string(),
            params,
            lhs,
            rhs,
            ratio: r,
            passed: r <= 1.0 + tolerance,
            tolerance,
            asserted: true,
            notes: String::new(),
        }
    }

    /// `lhs == rhs` up to `tolerance * max(1, |rhs|)`.
    pub fn identity(name: &str, params: Params, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckReport {
            check_name: name.to_string(),
            params,
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            passed: (lhs - rhs).abs() <= tolerance * rhs.abs().max(1.0),
            tolerance,
            asserted: true,
            notes: String::new(),
        }
    }

    /// An unasserted measurement; `passed` records whether it is finite.
    pub fn estimate(name: &str, params: Params, lhs: f64, rhs: f64) -> Self {
        let r = ratio(lhs, rhs);
        CheckReport {
            check_name: name.to_string(),
            params,
            lhs,
            rhs,
            ratio: r,
            passed: r.is_finite(),
            tolerance: 0.0,
            asserted: false,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn unasserted(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// Failed and asserted.
    pub fn is_failure(&self) -> bool {
        self.asserted && !self.passed
    }
}

const CSV_HEADER: [&str; 9] = [
    "check_name",
    "params",
    "lhs",
    "rhs",
    "ratio",
    "passed",
    "tolerance",
    "asserted",
    "notes",
];

pub fn to_jsonl(reports: &[CheckReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn from_jsonl(text: &str) -> Result<Vec<CheckReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

pub fn write_csv<W: Write>(reports: &[CheckReport], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in reports {
        wr.write_record([
            r.check_name.clone(),
            r.params.flatten(),
            format_float(r.lhs),
            format_float(r.rhs),
            format_float(r.ratio),
            r.passed.to_string(),
            format_float(r.tolerance),
            r.asserted.to_string(),
            r.notes.clone(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<CheckReport>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(invalid("unexpected CSV header"));
    }
    let parse_bool = |s: &str| s.parse::<bool>().map_err(|_| invalid(format!("bad boolean {s:?}")));
    rd.records()
        .map(|rec| {
            let rec = rec?;
            Ok(CheckReport {
                check_name: rec[0].to_string(),
                params: Params::unflatten(&rec[1])?,
                lhs: parse_float(&rec[2])?,
                rhs: parse_float(&rec[3])?,
                ratio: parse_float(&rec[4])?,
                passed: parse_bool(&rec[5])?,
                tolerance: parse_float(&rec[6])?,
                asserted: parse_bool(&rec[7])?,
                notes: rec[8].to_string(),
            })
        })
        .collect()
}

/// Writes `contents` to `path` through a temporary file and a rename, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_jsonl_file(path: &Path) -> Result<Vec<CheckReport>> {
    let f = std::fs::File::open(path)?;
    let mut text = String::new();
    for line in std::io::BufReader::new(f).lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    from_jsonl(&text)
}
