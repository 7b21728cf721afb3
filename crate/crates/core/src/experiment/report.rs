use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ReportFormat};
use crate::encoding::{ClassLabel, FeatureVector};
use crate::error::{Error, Result};
use crate::innerprod::LayerAccuracy;
use crate::preprocess::{Dataset, KMeansResult};
use crate::qsvm::{kernel, FMatrix, HhlConfig};

/// Version tag written into every report.
pub const REPORT_SCHEMA: &str = "qsvm-lab.report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansInfo {
    pub iterations: usize,
    pub converged: bool,
    pub sse: f64,
    pub sse_history: Vec<f64>,
    pub label_map: [ClassLabel; 2],
}

impl From<&KMeansResult> for KMeansInfo {
    fn from(r: &KMeansResult) -> Self {
        KMeansInfo {
            iterations: r.iterations,
            converged: r.converged,
            sse: r.sse,
            sse_history: r.sse_history.clone(),
            label_map: r.label_map,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_class_counts: [usize; 2],
    pub test_class_counts: [usize; 2],
    /// Normalized training vectors for class 0 and class 1.
    pub training_vectors: [Vec<f64>; 2],
    /// Centers before normalization, when pre-processing produced them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_centers: Option<[Vec<f64>; 2]>,
    /// `[k11, k12, k22]` of the normalized training vectors.
    pub kernel: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmeans: Option<KMeansInfo>,
}

impl DatasetInfo {
    pub fn new(
        train: &Dataset,
        test: &Dataset,
        t1: &FeatureVector,
        t2: &FeatureVector,
        raw: [Option<Vec<f64>>; 2],
        kmeans: Option<KMeansInfo>,
    ) -> Result<Self> {
        let raw_centers = match raw {
            [Some(a), Some(b)] => Some([a, b]),
            _ => None,
        };
        Ok(DatasetInfo {
            train_rows: train.len(),
            test_rows: test.len(),
            train_class_counts: train.class_counts(),
            test_class_counts: test.class_counts(),
            training_vectors: [t1.features.clone(), t2.features.clone()],
            raw_centers,
            kernel: [kernel(t1, t1)?, kernel(t1, t2)?, kernel(t2, t2)?],
            kmeans,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhlInfo {
    pub config: HhlConfig,
    pub exact_phases: bool,
}

/// One classified test point (for one layer count, in sweeps).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub layers: Option<usize>,
    pub true_label: ClassLabel,
    pub predicted_label: ClassLabel,
    pub correct: bool,
    pub tie: bool,
    /// Signed readout score (qsvm).
    pub score: Option<f64>,
    /// All-zeros probabilities against train1 and train2 (innerprod).
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub postselect_success: Option<f64>,
    pub analytic_label: Option<ClassLabel>,
    pub analytic_score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema: String,
    pub config: ExperimentConfig,
    pub dataset: DatasetInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_matrix: Option<FMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hhl: Option<HhlInfo>,
    pub records: Vec<PointRecord>,
    /// Counted over every record (all layers of a sweep).
    pub correct: usize,
    pub total: usize,
    /// `correct / total`; absent when there are no records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
    /// Best layer of a sweep (first one on ties).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak: Option<LayerAccuracy>,
    #[serde(default)]
    pub series: Vec<LayerAccuracy>,
}

impl ClassificationReport {
    pub fn assemble(
        schema: &str,
        config: ExperimentConfig,
        dataset: DatasetInfo,
        model: Option<(FMatrix, HhlConfig)>,
        mut records: Vec<PointRecord>,
        series: Vec<LayerAccuracy>,
    ) -> Self {
        records.sort_by_key(|r| (r.layers, r.index));
        let correct = records.iter().filter(|r| r.correct).count();
        let total = records.len();
        let peak = series
            .iter()
            .copied()
            .reduce(|best, s| if s.accuracy > best.accuracy { s } else { best });
        let (f_matrix, hhl) = match model {
            Some((f, h)) => (
                Some(f),
                Some(HhlInfo {
                    config: h,
                    exact_phases: h.is_exact_for(&f),
                }),
            ),
            None => (None, None),
        };
        ClassificationReport {
            schema: schema.to_owned(),
            config,
            dataset,
            f_matrix,
            hhl,
            records,
            correct,
            total,
            accuracy: (total > 0).then(|| correct as f64 / total as f64),
            peak,
            series,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ClassificationReport =
            serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Report(format!(
                "unsupported schema {:?}, expected {REPORT_SCHEMA:?}",
                r.schema
            )));
        }
        Ok(r)
    }

    /// Per-point table as CSV text.
    pub fn points_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.records.is_empty() {
            w.write_record(POINT_COLUMNS).map_err(csv_err)?;
        }
        for r in &self.records {
            w.serialize(r).map_err(csv_err)?;
        }
        finish(w)
    }

    /// `(layers, correct, total, accuracy)` table as CSV text.
    pub fn series_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.series.is_empty() {
            w.write_record(["layers", "correct", "total", "accuracy"])
                .map_err(csv_err)?;
        }
        for s in &self.series {
            w.serialize(s).map_err(csv_err)?;
        }
        finish(w)
    }
}

const POINT_COLUMNS: [&str; 12] = [
    "index",
    "layers",
    "true_label",
    "predicted_label",
    "correct",
    "tie",
    "score",
    "p1",
    "p2",
    "postselect_success",
    "analytic_label",
    "analytic_score",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Report(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

/// `<stem>_layers.csv` next to `path`.
pub fn layers_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_layers.csv"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the report and returns the files created.
///
/// JSON carries the whole report. CSV writes the point table to `path` and,
/// for layer sweeps, the per-layer table to `<stem>_layers.csv`.
pub fn emit_report(
    report: &ClassificationReport,
    format: ReportFormat,
    path: &Path,
) -> Result<Vec<PathBuf>> {
    match format {
        ReportFormat::Json => {
            write(path, &(report.to_json()? + "\n"))?;
            Ok(vec![path.to_path_buf()])
        }
        ReportFormat::Csv => {
            write(path, &report.points_csv()?)?;
            let mut files = vec![path.to_path_buf()];
            if !report.series.is_empty() {
                let lp = layers_path(path);
                write(&lp, &report.series_csv()?)?;
                files.push(lp);
            }
            Ok(files)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::{DatasetKind, Method};

    fn empty_info() -> DatasetInfo {
        DatasetInfo {
            train_rows: 0,
            test_rows: 0,
            train_class_counts: [0, 0],
            test_class_counts: [0, 0],
            training_vectors: [vec![1.0, 0.0], vec![0.0, 1.0]],
            raw_centers: None,
            kernel: [1.0, 0.0, 1.0],
            kmeans: None,
        }
    }

    #[test]
    fn empty_report_omits_accuracy() {
        let cfg = ExperimentConfig::new(DatasetKind::SixNine, Method::Innerprod);
        let r =
            ClassificationReport::assemble(REPORT_SCHEMA, cfg, empty_info(), None, vec![], vec![]);
        assert_eq!(r.total, 0);
        assert_eq!(r.accuracy, None);
        let json = r.to_json().unwrap();
        assert!(!json.contains("\"accuracy\""));
        assert!(json.contains("\"total\": 0"));
        assert_eq!(ClassificationReport::from_json(&json).unwrap(), r);
        assert!(r.points_csv().unwrap().starts_with("index,layers,"));
    }

    #[test]
    fn schema_is_checked() {
        let cfg = ExperimentConfig::new(DatasetKind::SixNine, Method::Innerprod);
        let mut r =
            ClassificationReport::assemble(REPORT_SCHEMA, cfg, empty_info(), None, vec![], vec![]);
        r.schema = "other/9".into();
        assert!(matches!(
            ClassificationReport::from_json(&r.to_json().unwrap()),
            Err(Error::Report(_))
        ));
    }

    #[test]
    fn peak_prefers_first_best_layer() {
        let cfg = ExperimentConfig::new(DatasetKind::SixNine, Method::Innerprod);
        let s = |layers, correct| LayerAccuracy {
            layers,
            correct,
            total: 4,
            accuracy: correct as f64 / 4.0,
        };
        let r = ClassificationReport::assemble(
            REPORT_SCHEMA,
            cfg,
            empty_info(),
            None,
            vec![],
            vec![s(1, 2), s(2, 3), s(3, 3)],
        );
        assert_eq!(r.peak.unwrap().layers, 2);
        assert_eq!(r.series_csv().unwrap().lines().count(), 4);
    }

    #[test]
    fn layers_file_name() {
        assert_eq!(
            layers_path(Path::new("/tmp/out/run.csv")),
            PathBuf::from("/tmp/out/run_layers.csv")
        );
    }

    #[test]
    fn unwritable_path_has_context() {
        let cfg = ExperimentConfig::new(DatasetKind::SixNine, Method::Innerprod);
        let r =
            ClassificationReport::assemble(REPORT_SCHEMA, cfg, empty_info(), None, vec![], vec![]);
        match emit_report(&r, ReportFormat::Json, Path::new("/nonexistent/dir/r.json")) {
            Err(Error::Io { path, .. }) => assert!(path.ends_with("r.json")),
            other => panic!("{other:?}"),
        }
    }
}
