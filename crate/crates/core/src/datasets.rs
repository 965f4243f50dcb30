//! Reader for the sparse `label index:value ...` text format used by the
//! libsvm dataset collection (1-based feature indices).

use crate::linalg::DenseMatrix;
use crate::{Error, Result};
use std::path::Path;

/// How raw labels map to the `{-1, +1}` classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelGrouping {
    /// Keep labels as parsed (regression targets or already-signed classes).
    None,
    /// Glass-identification grouping: labels 1, 2, 3 become -1 and labels
    /// 5, 6, 7 become +1. Anything else is an error.
    GlassScale,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    /// Dense feature matrix, one row per example.
    pub features: DenseMatrix,
    pub labels: Vec<f64>,
}

/// Parse a libsvm-format file into a dense dataset.
///
/// `m_limit` keeps only the first `m_limit` rows (the subset rule used for
/// benchmark excerpts is simply "take the file head"). The feature count is
/// the largest index seen across the kept rows.
pub fn load_libsvm(path: &Path, m_limit: Option<usize>, grouping: LabelGrouping) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_libsvm(&text, m_limit, grouping)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Same as [`load_libsvm`] but over in-memory text.
pub fn parse_libsvm(text: &str, m_limit: Option<usize>, grouping: LabelGrouping) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut n_features = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if m_limit.is_some_and(|m| rows.len() >= m) {
            break;
        }
        let mut fields = line.split_whitespace();
        let label_text = fields.next().expect("non-empty line has a first field");
        let raw_label: f64 = label_text
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad label `{label_text}`", lineno + 1)))?;
        labels.push(map_label(raw_label, grouping, lineno + 1)?);
        let mut row = Vec::new();
        for pair in fields {
            let (idx_text, val_text) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: expected index:value, got `{pair}`", lineno + 1)))?;
            let idx: usize = idx_text
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad feature index `{idx_text}`", lineno + 1)))?;
            if idx == 0 {
                return Err(Error::Parse(format!("line {}: feature indices are 1-based", lineno + 1)));
            }
            let val: f64 = val_text
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad feature value `{val_text}`", lineno + 1)))?;
            n_features = n_features.max(idx);
            row.push((idx - 1, val));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    let m = rows.len();
    let mut data = vec![0.0; m * n_features];
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            data[i * n_features + j] = v;
        }
    }
    Ok(Dataset { features: DenseMatrix::from_flat(m, n_features, data), labels })
}

fn map_label(raw: f64, grouping: LabelGrouping, lineno: usize) -> Result<f64> {
    match grouping {
        LabelGrouping::None => Ok(raw),
        LabelGrouping::GlassScale => match raw as i64 {
            1 | 2 | 3 => Ok(-1.0),
            5 | 6 | 7 => Ok(1.0),
            other => Err(Error::Parse(format!("line {lineno}: label {other} has no group"))),
        },
    }
}
