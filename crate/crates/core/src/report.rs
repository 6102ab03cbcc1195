//! The per-dataset error report: the base context, its approximation
//! `S·H` and the scale `S`, each with size, density, lattice size and the
//! attribute / conceptual scaling errors.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bmf::mismatches;
use crate::conceptual::{attribute_scaling_error, conceptual_scaling_error};
use crate::context::{FormalContext, ObjectMap};
use crate::error::{Error, Result};
use crate::lattice::extents;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextStats {
    pub objects: usize,
    pub attributes: usize,
    pub density: f64,
    /// `None` when intractable or skipped.
    pub concepts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationStats {
    pub frobenius: f64,
    pub hamming_pct: f64,
    pub mismatches: usize,
    pub concepts: Option<usize>,
    #[serde(rename = "attribute_error")]
    pub ae: usize,
    #[serde(rename = "conceptual_error")]
    pub ce: Option<usize>,
    pub inconsistent_attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleStats {
    pub attributes: usize,
    pub density: f64,
    pub concepts: Option<usize>,
    #[serde(rename = "attribute_error")]
    pub ae: usize,
    #[serde(rename = "conceptual_error")]
    pub ce: Option<usize>,
    pub inconsistent_attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub name: String,
    pub context: ContextStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximation: Option<ApproximationStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleStats>,
}

fn round(x: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (x * f).round() / f
}

fn count_concepts(ctx: &FormalContext, cap: usize, skip: bool) -> Result<Option<usize>> {
    if skip {
        return Ok(None);
    }
    match extents(ctx, cap) {
        Ok(e) => Ok(Some(e.len())),
        Err(Error::Intractable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// AE, CE (unless `ae_only`) and inconsistent attribute names of `(σ, S)`.
fn errors(base: &FormalContext, scale: &FormalContext, map: &ObjectMap, cap: usize, ae_only: bool) -> Result<(usize, Option<usize>, Vec<String>)> {
    let (attrs, ce) = if ae_only {
        (attribute_scaling_error(base, scale, map)?, None)
    } else {
        let e = conceptual_scaling_error(base, scale, map, cap)?;
        let ce = e.conceptual_error();
        (e.attribute_errors, ce)
    };
    let names = scale.attribute_names(&attrs).into_iter().map(str::to_string).collect();
    Ok((attrs.len(), ce, names))
}

/// Builds the report for `k`. The approximation, if given, must have the
/// objects and attributes of `k` in the same order and is evaluated as the
/// scaling `(id, approx)`; the scale is evaluated as `(σ, S)`.
///
/// Lattice sizes and CE above `cap` are reported as `None`; `ae_only`
/// skips every enumeration.
pub fn error_report(
    name: &str,
    k: &FormalContext,
    scale: Option<(&FormalContext, &ObjectMap)>,
    approx: Option<&FormalContext>,
    cap: usize,
    ae_only: bool,
) -> Result<ErrorReport> {
    let context = ContextStats {
        objects: k.num_objects(),
        attributes: k.num_attributes(),
        density: round(k.density(), 3),
        concepts: count_concepts(k, cap, ae_only)?,
    };
    let approximation = approx
        .map(|a| -> Result<ApproximationStats> {
            if a.objects() != k.objects() || a.attributes() != k.attributes() {
                return Err(Error::InvalidContext("approximation must have the objects and attributes of the context".into()));
            }
            let d = mismatches(k, a)?;
            let (ae, ce, inconsistent_attributes) = errors(k, a, &ObjectMap::identity(k.num_objects()), cap, ae_only)?;
            Ok(ApproximationStats {
                frobenius: round((d as f64).sqrt(), 2),
                hamming_pct: round(100.0 * d as f64 / (k.num_objects() * k.num_attributes()).max(1) as f64, 1),
                mismatches: d,
                concepts: count_concepts(a, cap, ae_only)?,
                ae,
                ce,
                inconsistent_attributes,
            })
        })
        .transpose()?;
    let scale = scale
        .map(|(s, map)| -> Result<ScaleStats> {
            let (ae, ce, inconsistent_attributes) = errors(k, s, map, cap, ae_only)?;
            Ok(ScaleStats {
                attributes: s.num_attributes(),
                density: round(s.density(), 3),
                concepts: count_concepts(s, cap, ae_only)?,
                ae,
                ce,
                inconsistent_attributes,
            })
        })
        .transpose()?;
    Ok(ErrorReport {
        name: name.to_string(),
        context,
        approximation,
        scale,
    })
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl ErrorReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table: context (|G|, |M|, D, |B|), approximation
    /// (Frob, H%, |B|, AE, CE) and scale (|M|, D, |B|, AE, CE).
    pub fn to_table(&self) -> String {
        let mut header = vec!["name", "|G|", "|M|", "D", "|B|"];
        let c = &self.context;
        let mut row = vec![
            self.name.clone(),
            c.objects.to_string(),
            c.attributes.to_string(),
            format!("{:.3}", c.density),
            opt(c.concepts),
        ];
        if let Some(a) = &self.approximation {
            header.extend(["Frob", "H%", "|B~|", "AE~", "CE~"]);
            row.extend([
                format!("{:.2}", a.frobenius),
                format!("{:.1}", a.hamming_pct),
                opt(a.concepts),
                a.ae.to_string(),
                opt(a.ce),
            ]);
        }
        if let Some(s) = &self.scale {
            header.extend(["|M_S|", "D_S", "|B_S|", "AE_S", "CE_S"]);
            row.extend([
                s.attributes.to_string(),
                format!("{:.3}", s.density),
                opt(s.concepts),
                s.ae.to_string(),
                opt(s.ce),
            ]);
        }
        let widths: Vec<usize> = header.iter().zip(&row).map(|(h, r)| h.len().max(r.len())).collect();
        let mut out = String::new();
        for line in [header.iter().map(|h| h.to_string()).collect::<Vec<_>>(), row] {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (cell, &w))| if i == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
                .collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        out
    }
}
