use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encoding::{ClassLabel, FeatureVector};
use crate::error::{Error, Result};

/// Labeled rows with a common feature count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub rows: Vec<FeatureVector>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    /// Checks that rows share a length and carry a 0/1 label.
    pub fn new(rows: Vec<FeatureVector>, feature_names: Vec<String>) -> Result<Self> {
        let width = feature_names.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::Shape(format!(
                    "row {i} has {} features, expected {width}",
                    r.len()
                )));
            }
            match r.label {
                Some(0 | 1) => {}
                other => {
                    return Err(Error::Shape(format!(
                        "row {i} has label {other:?}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(Dataset {
            rows,
            feature_names,
        })
    }

    /// Names `f0, f1, …`.
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i}")).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.rows[i].label.unwrap_or(0)
    }

    /// Row counts of class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.rows.iter().filter(|r| r.label == Some(1)).count();
        [self.rows.len() - ones, ones]
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}

fn parse_label(token: &str) -> Option<ClassLabel> {
    match token.parse::<i64>() {
        Ok(0) => Some(0),
        Ok(1) => Some(1),
        Ok(_) => None,
        Err(_) => match token.parse::<f64>() {
            Ok(0.0) => Some(0),
            Ok(1.0) => Some(1),
            _ => None,
        },
    }
}

/// Reads comma-separated rows of `n_features` reals followed by a 0/1 class.
///
/// A first data line containing any non-numeric token is taken as the
/// header. Blank lines and lines starting with `#` are skipped.
pub fn load_dataset(path: impl AsRef<Path>, n_features: usize) -> Result<Dataset> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, n_features, path)
}

pub(crate) fn parse_dataset(text: &str, n_features: usize, path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let width = n_features + 1;
    let mut names = None;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::DataParse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != width {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                message: format!(
                    "line {line}: {} columns, expected {n_features} features and a class",
                    record.len()
                ),
            });
        }
        let first = names.is_none() && rows.is_empty();
        if first && record.iter().any(|t| t.parse::<f64>().is_err()) {
            names = Some(record.iter().take(n_features).map(str::to_owned).collect());
            continue;
        }
        let mut features = Vec::with_capacity(n_features);
        for (col, token) in record.iter().take(n_features).enumerate() {
            let v: f64 = token.parse().map_err(|_| Error::DataParse {
                path: path.to_path_buf(),
                line,
                message: format!("column {}: {token:?} is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::DataParse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("column {}: non-finite value", col + 1),
                });
            }
            features.push(v);
        }
        let token = &record[n_features];
        let label = parse_label(token).ok_or_else(|| Error::DataParse {
            path: path.to_path_buf(),
            line,
            message: format!("class {token:?} is not 0 or 1"),
        })?;
        rows.push(FeatureVector::labeled(features, label));
    }
    if rows.is_empty() {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            message: "no data rows".into(),
        });
    }
    Dataset::new(
        rows,
        names.unwrap_or_else(|| Dataset::default_names(n_features)),
    )
}
