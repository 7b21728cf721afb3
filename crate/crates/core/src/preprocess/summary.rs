use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator; 0 for a single row).
    pub std: f64,
    pub min: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub columns: Vec<ColumnStats>,
    pub class_counts: [usize; 2],
}

/// Linearly interpolated percentile of sorted data at fraction `q ∈ [0, 1]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn column_stats(name: &str, mut values: Vec<f64>) -> ColumnStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    values.sort_by(f64::total_cmp);
    ColumnStats {
        name: name.to_owned(),
        count: n,
        mean,
        std,
        min: values[0],
        p25: percentile(&values, 0.25),
        p50: percentile(&values, 0.5),
        p75: percentile(&values, 0.75),
        max: values[n - 1],
    }
}

pub fn summarize(data: &Dataset) -> Result<DatasetSummary> {
    if data.is_empty() {
        return Err(Error::Precondition(
            "cannot summarize an empty dataset".into(),
        ));
    }
    let columns = data
        .feature_names
        .iter()
        .enumerate()
        .map(|(j, name)| column_stats(name, data.rows.iter().map(|r| r.features[j]).collect()))
        .collect();
    Ok(DatasetSummary {
        columns,
        class_counts: data.class_counts(),
    })
}
