//! Trace CSV schema: header `k,alpha,obj,gap,dist_sq,gnorm,evals`, floats
//! with 17 significant digits, empty fields for unavailable columns.
//! Serialization is fully deterministic so identical runs produce
//! byte-identical files.

use anyhow::{bail, Context, Result};
use std::io::Write;
use std::path::Path;
use subgrad::trace::RunTrace;

pub const HEADER: &str = "k,alpha,obj,gap,dist_sq,gnorm,evals";

/// 17 significant digits, enough to round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a trace, with the `gap` column filled as `max(obj - h_ref, 0)`
/// when a reference value is available. Rows past the evaluation budget are
/// dropped so entries stay comparable.
pub fn write_trace(
    path: &Path,
    trace: &RunTrace,
    h_ref: Option<f64>,
    eval_budget: u64,
) -> Result<()> {
    let mut out = String::with_capacity(trace.rows.len() * 64);
    out.push_str(HEADER);
    out.push('\n');
    for row in &trace.rows {
        if row.evals > eval_budget {
            break;
        }
        let gap = h_ref.map(|h| (row.obj - h).max(0.0));
        out.push_str(&row.k.to_string());
        out.push(',');
        out.push_str(&fmt_f64(row.alpha));
        out.push(',');
        out.push_str(&fmt_f64(row.obj));
        out.push(',');
        if let Some(gap) = gap {
            out.push_str(&fmt_f64(gap));
        }
        out.push(',');
        if let Some(d) = row.dist_sq {
            out.push_str(&fmt_f64(d));
        }
        out.push(',');
        out.push_str(&fmt_f64(row.grad_norm));
        out.push(',');
        out.push_str(&row.evals.to_string());
        out.push('\n');
    }
    let mut file = std::fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// One parsed trace row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub k: u64,
    pub alpha: f64,
    pub obj: f64,
    pub gap: Option<f64>,
    pub dist_sq: Option<f64>,
    pub gnorm: f64,
    pub evals: u64,
}

pub fn read_trace(path: &Path) -> Result<Vec<CsvRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == HEADER => {}
        other => bail!("unexpected header {:?} in {}", other, path.display()),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!("line {}: expected 7 fields, got {}", i + 2, fields.len());
        }
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(s.parse::<f64>().with_context(|| format!("line {}: bad float `{s}`", i + 2))?))
            }
        };
        rows.push(CsvRow {
            k: fields[0].parse().with_context(|| format!("line {}: bad k", i + 2))?,
            alpha: fields[1].parse()?,
            obj: fields[2].parse()?,
            gap: opt(fields[3])?,
            dist_sq: opt(fields[4])?,
            gnorm: fields[5].parse()?,
            evals: fields[6].parse().with_context(|| format!("line {}: bad evals", i + 2))?,
        });
    }
    Ok(rows)
}
