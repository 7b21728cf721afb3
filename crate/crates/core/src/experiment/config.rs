use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::innerprod::MAX_LAYERS;
use crate::qsvm::Shots;

/// Environment variable that overrides the banknote file location.
pub const BANKNOTE_ENV: &str = "BANKNOTE_CSV";

/// Banknote file names probed under `data/`.
pub const BANKNOTE_FILE_NAMES: [&str; 2] = [
    "data_banknote_authentication.txt",
    "BankNote_Authentication.csv",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    SixNine,
    Banknote,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Qsvm,
    Innerprod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preprocess {
    Averages,
    Kmeans,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

/// Inclusive layer range; a single layer has `start == end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRange {
    pub start: usize,
    pub end: usize,
}

impl LayerRange {
    pub fn single(layers: usize) -> Self {
        LayerRange {
            start: layers,
            end: layers,
        }
    }

    pub fn is_single(&self) -> bool {
        self.start == self.end
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl Default for LayerRange {
    fn default() -> Self {
        LayerRange::single(1)
    }
}

impl FromStr for LayerRange {
    type Err = String;

    /// `"4"` or `"1..10"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{t:?} is not a layer count"))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                Ok(LayerRange {
                    start: num(a)?,
                    end: num(b)?,
                })
            }
            None => Ok(LayerRange::single(num(s)?)),
        }
    }
}

impl fmt::Display for LayerRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

/// Parses `"exact"` or a positive shot count.
pub fn parse_shots(s: &str) -> std::result::Result<Shots, String> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(Shots::Exact);
    }
    match s.parse::<u64>() {
        Ok(0) => Err("shots must be positive".into()),
        Ok(n) => Ok(Shots::Count(n)),
        Err(_) => Err(format!("{s:?} is neither \"exact\" nor a shot count")),
    }
}

/// One experiment, fully specified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_path: Option<PathBuf>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preprocess: Option<Preprocess>,
    pub gamma: f64,
    pub layers: LayerRange,
    pub shots: Shots,
    pub post_select: bool,
    pub seed: u64,
    pub n_test: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

impl ExperimentConfig {
    pub const DEFAULT_GAMMA: f64 = 2.0;
    pub const DEFAULT_SEED: u64 = 7;
    pub const DEFAULT_N_TEST: usize = 28;

    pub fn new(dataset: DatasetKind, method: Method) -> Self {
        ExperimentConfig {
            dataset,
            data_path: None,
            method,
            preprocess: None,
            gamma: Self::DEFAULT_GAMMA,
            layers: LayerRange::default(),
            shots: Shots::Exact,
            post_select: true,
            seed: Self::DEFAULT_SEED,
            n_test: Self::DEFAULT_N_TEST,
            out: None,
            format: ReportFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, message: String| Err(Error::Config { field, message });
        match (self.dataset, self.preprocess) {
            (DatasetKind::SixNine, Some(p)) => {
                return bad(
                    "preprocess",
                    format!("{p:?} pre-processing applies to the banknote dataset only"),
                )
            }
            (DatasetKind::Banknote, None) => {
                return bad(
                    "preprocess",
                    "banknote runs need `averages` or `kmeans`".into(),
                )
            }
            _ => {}
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return bad(
                "gamma",
                format!("must be a positive real, got {}", self.gamma),
            );
        }
        let l = self.layers;
        if l.start == 0 || l.end < l.start || l.end > MAX_LAYERS {
            return bad(
                "layers",
                format!("{l} must be a non-empty range within 1..{MAX_LAYERS}"),
            );
        }
        if self.method == Method::Qsvm && l != LayerRange::single(1) {
            return bad("layers", "layers apply to the innerprod method only".into());
        }
        if self.method == Method::Innerprod && !self.post_select {
            return bad(
                "post_select",
                "post-selection applies to the qsvm method only".into(),
            );
        }
        if self.shots == Shots::Count(0) {
            return bad("shots", "must be positive".into());
        }
        if self.dataset == DatasetKind::Banknote && self.n_test == 0 {
            return bad("n_test", "must be positive".into());
        }
        Ok(())
    }

    /// Where the input data is read from.
    pub fn resolve_data_path(&self) -> Result<PathBuf> {
        if let Some(p) = &self.data_path {
            return Ok(p.clone());
        }
        match self.dataset {
            DatasetKind::SixNine => Ok(first_existing(&[PathBuf::from("data/six_nine")])
                .unwrap_or_else(|| workspace_data().join("six_nine"))),
            DatasetKind::Banknote => {
                if let Some(p) = std::env::var_os(BANKNOTE_ENV) {
                    return Ok(PathBuf::from(p));
                }
                let mut candidates = Vec::new();
                for root in [PathBuf::from("data"), workspace_data()] {
                    for name in BANKNOTE_FILE_NAMES {
                        candidates.push(root.join(name));
                    }
                }
                first_existing(&candidates).ok_or_else(|| {
                    let listed: Vec<String> = candidates.iter().map(|p| p.display().to_string()).collect();
                    Error::Io {
                        path: candidates[0].clone(),
                        source: std::io::Error::new(
                            std::io::ErrorKind::NotFound,
                            format!(
                                "banknote data not found (looked for {}); set {BANKNOTE_ENV} or pass a data path",
                                listed.join(", ")
                            ),
                        ),
                    }
                })
            }
        }
    }
}

fn workspace_data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn first_existing(paths: &[PathBuf]) -> Option<PathBuf> {
    paths.iter().find(|p| p.exists()).cloned()
}
