//! Conceptual scaling of CSV tables into formal contexts.
//!
//! Every column is scaled independently and the resulting attribute blocks
//! are concatenated in column order:
//!
//! * `nominal`: one attribute `col=value` per distinct non-empty value;
//! * `ordinal`: one attribute `col<=v` per threshold `v` (the given `breaks`,
//!   or every distinct value when none are given);
//! * `interval`: one attribute per bin `[b_i, b_{i+1})`, the last bin closed.
//!
//! Two bookkeeping kinds exist besides: `id` names the objects after that
//! column, `ignore` drops the column. Columns absent from the spec are nominal.
//! Empty cells never produce an attribute.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::AttributeSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Nominal,
    Ordinal,
    Interval,
    Id,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub kind: ScaleKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub breaks: Vec<f64>,
}

/// Column name → scaling. Serialized as a JSON object.
pub type ScalingSpec = BTreeMap<String, ColumnScale>;

pub fn parse_spec(json: &str) -> Result<ScalingSpec> {
    serde_json::from_str(json).map_err(|e| Error::ScalingSpec(e.to_string()))
}

/// A header plus string records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl Table {
    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| csv_err(1, "", e))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut records = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| csv_err(i + 2, "", e))?;
            records.push(rec.iter().map(|c| c.trim().to_string()).collect());
        }
        Ok(Self { headers, records })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}

fn csv_err(row: usize, column: &str, e: impl std::fmt::Display) -> Error {
    Error::Csv {
        row,
        column: column.to_string(),
        message: e.to_string(),
    }
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

fn sorted_distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

/// Scales `table` according to `spec`.
pub fn scale_csv(table: &Table, spec: &ScalingSpec) -> Result<FormalContext> {
    let col_index: HashMap<&str, usize> = table.headers.iter().enumerate().map(|(i, h)| (h.as_str(), i)).collect();
    if let Some(unknown) = spec.keys().find(|k| !col_index.contains_key(k.as_str())) {
        return Err(Error::ScalingSpec(format!("unknown column '{unknown}'")));
    }
    if spec.values().filter(|c| c.kind == ScaleKind::Id).count() > 1 {
        return Err(Error::ScalingSpec("at most one id column".into()));
    }
    let n = table.records.len();
    for (i, rec) in table.records.iter().enumerate() {
        if rec.len() != table.headers.len() {
            return Err(csv_err(i + 2, "", format!("expected {} fields, found {}", table.headers.len(), rec.len())));
        }
    }

    let mut attributes: Vec<String> = Vec::new();
    // one membership list per attribute
    let mut columns: Vec<Vec<bool>> = Vec::new();
    let mut id_column = None;

    for (c, header) in table.headers.iter().enumerate() {
        let scale = spec.get(header).cloned().unwrap_or(ColumnScale {
            kind: ScaleKind::Nominal,
            breaks: vec![],
        });
        let cells: Vec<&str> = table.records.iter().map(|r| r[c].as_str()).collect();
        match scale.kind {
            ScaleKind::Id => id_column = Some(c),
            ScaleKind::Ignore => {}
            ScaleKind::Nominal => {
                let values: BTreeSet<&str> = cells.iter().copied().filter(|v| !v.is_empty()).collect();
                for v in values {
                    attributes.push(format!("{header}={v}"));
                    columns.push(cells.iter().map(|&x| x == v).collect());
                }
            }
            ScaleKind::Ordinal | ScaleKind::Interval => {
                if scale.kind == ScaleKind::Interval
                    && (scale.breaks.len() < 2 || scale.breaks.windows(2).any(|w| w[0] >= w[1]))
                {
                    return Err(Error::ScalingSpec(format!(
                        "interval column '{header}' needs at least two strictly increasing breaks"
                    )));
                }
                let numbers = cells
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        if v.is_empty() {
                            Ok(None)
                        } else {
                            v.parse::<f64>()
                                .map(Some)
                                .map_err(|_| csv_err(i + 2, header, format!("'{v}' is not a number")))
                        }
                    })
                    .collect::<Result<Vec<Option<f64>>>>()?;
                if scale.kind == ScaleKind::Ordinal {
                    let thresholds = if scale.breaks.is_empty() {
                        sorted_distinct(numbers.iter().flatten().copied())
                    } else {
                        sorted_distinct(scale.breaks.iter().copied())
                    };
                    for t in thresholds {
                        attributes.push(format!("{header}<={}", fmt_num(t)));
                        columns.push(numbers.iter().map(|x| x.is_some_and(|x| x <= t)).collect());
                    }
                } else {
                    let breaks = &scale.breaks;
                    let bins = breaks.len() - 1;
                    for b in 0..bins {
                        let (lo, hi) = (breaks[b], breaks[b + 1]);
                        let last = b + 1 == bins;
                        let close = if last { ']' } else { ')' };
                        attributes.push(format!("{header}=[{},{}{close}", fmt_num(lo), fmt_num(hi)));
                        columns.push(
                            numbers
                                .iter()
                                .map(|x| x.is_some_and(|x| x >= lo && (x < hi || (last && x <= hi))))
                                .collect(),
                        );
                    }
                }
            }
        }
    }

    let objects = match id_column {
        Some(c) => unique_names(table.records.iter().map(|r| r[c].clone())),
        None => (1..=n).map(|i| i.to_string()).collect(),
    };
    let width = attributes.len();
    let rows = (0..n)
        .map(|g| AttributeSet::from_indices(width, (0..width).filter(|&m| columns[m][g])))
        .collect();
    FormalContext::new(objects, attributes, rows)
}

/// Repeated names get `#2`, `#3`, … suffixes in order of appearance.
fn unique_names(names: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    names
        .map(|n| {
            let count = seen.entry(n.clone()).or_insert(0);
            *count += 1;
            if *count == 1 {
                n
            } else {
                format!("{n}#{count}")
            }
        })
        .collect()
}
