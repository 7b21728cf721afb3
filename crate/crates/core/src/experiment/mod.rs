//! End-to-end runs: load, pre-process, classify, report.

mod config;
mod report;
mod run;

pub use config::{
    parse_shots, DatasetKind, ExperimentConfig, LayerRange, Method, Preprocess, ReportFormat,
    BANKNOTE_ENV, BANKNOTE_FILE_NAMES,
};
pub use report::{
    emit_report, layers_path, ClassificationReport, DatasetInfo, HhlInfo, KMeansInfo, PointRecord,
    REPORT_SCHEMA,
};
pub use run::{layer_series, load_six_nine, prepare_data, run_experiment, PreparedData};
