use std::path::Path;

use rayon::prelude::*;

use super::config::{DatasetKind, ExperimentConfig, Method, Preprocess};
use super::report::{ClassificationReport, DatasetInfo, KMeansInfo, PointRecord, REPORT_SCHEMA};
use crate::encoding::{encode, normalize, ClassLabel, FeatureVector};
use crate::error::{Error, Result};
use crate::innerprod::{classify_innerprod, point_seed, LayerAccuracy};
use crate::preprocess::{class_averages, kmeans, load_dataset, split, Dataset, KMeansConfig};
use crate::qsvm::{classify_analytic, classify_qsvm, solve_ls_svm, HhlConfig, TrainedModel};

/// Normalized training pair, labeled test rows and provenance details.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedData {
    pub train1: FeatureVector,
    pub train2: FeatureVector,
    pub tests: Vec<FeatureVector>,
    pub info: DatasetInfo,
}

/// Reads `train.csv` (one class-0 and one class-1 row) and `test.csv` from `dir`.
pub fn load_six_nine(dir: &Path) -> Result<(Dataset, Dataset)> {
    let train = load_dataset(dir.join("train.csv"), 2)?;
    let test = load_dataset(dir.join("test.csv"), 2)?;
    if train.class_counts() != [1, 1] {
        return Err(Error::Schema {
            path: dir.join("train.csv"),
            message: format!(
                "expected one training row per class, found {:?}",
                train.class_counts()
            ),
        });
    }
    Ok((train, test))
}

fn normalize_all(rows: &[FeatureVector]) -> Result<Vec<FeatureVector>> {
    rows.iter().map(normalize).collect()
}

/// Loads, splits and pre-processes the configured dataset.
pub fn prepare_data(cfg: &ExperimentConfig) -> Result<PreparedData> {
    cfg.validate()?;
    let path = cfg.resolve_data_path()?;
    match cfg.dataset {
        DatasetKind::SixNine => {
            let (train, test) = load_six_nine(&path)?;
            let pick = |label: ClassLabel| {
                let i = (0..train.len())
                    .find(|&i| train.label(i) == label)
                    .expect("checked above");
                normalize(&train.rows[i])
            };
            let (t1, t2) = (pick(0)?, pick(1)?);
            let info = DatasetInfo::new(&train, &test, &t1, &t2, [None, None], None)?;
            Ok(PreparedData {
                tests: normalize_all(&test.rows)?,
                train1: t1,
                train2: t2,
                info,
            })
        }
        DatasetKind::Banknote => {
            let data = load_dataset(&path, 4)?;
            let parts = split(&data, cfg.n_test, cfg.seed)?;
            let (c0, c1, km) = match cfg.preprocess.expect("validated") {
                Preprocess::Averages => {
                    let (c0, c1) = class_averages(&parts.train)?;
                    (c0, c1, None)
                }
                Preprocess::Kmeans => {
                    let r = kmeans(
                        &parts.train,
                        &KMeansConfig {
                            seed: cfg.seed,
                            ..KMeansConfig::default()
                        },
                    )?;
                    let info = KMeansInfo::from(&r);
                    (r.center_for(0).clone(), r.center_for(1).clone(), Some(info))
                }
            };
            let (t1, t2) = (normalize(&c0)?, normalize(&c1)?);
            let info = DatasetInfo::new(
                &parts.train,
                &parts.test,
                &t1,
                &t2,
                [Some(c0.features), Some(c1.features)],
                km,
            )?;
            Ok(PreparedData {
                tests: normalize_all(&parts.test.rows)?,
                train1: t1,
                train2: t2,
                info,
            })
        }
    }
}

fn run_qsvm(
    cfg: &ExperimentConfig,
    data: &PreparedData,
) -> Result<(Vec<PointRecord>, TrainedModel, HhlConfig)> {
    let model = TrainedModel::new(data.train1.clone(), data.train2.clone(), (0, 1), cfg.gamma)?;
    let hhl = HhlConfig::for_matrix(&model.f).with_post_select(cfg.post_select);
    let sol = solve_ls_svm(&model.f, model.y)?;
    let records = data
        .tests
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let q = classify_qsvm(&model, t, &hhl, cfg.shots, point_seed(cfg.seed, 0, i))?;
            let a = classify_analytic(&sol, &model, t)?;
            let truth = t.label.unwrap_or(0);
            Ok(PointRecord {
                index: i,
                layers: None,
                true_label: truth,
                predicted_label: q.label,
                correct: q.label == truth,
                tie: q.tie,
                score: Some(q.score),
                p1: None,
                p2: None,
                postselect_success: Some(q.diagnostics.postselect_success),
                analytic_label: Some(a.label),
                analytic_score: Some(a.score),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((records, model, hhl))
}

fn run_innerprod(cfg: &ExperimentConfig, data: &PreparedData) -> Result<Vec<PointRecord>> {
    let u1 = encode(&data.train1)?;
    let u2 = encode(&data.train2)?;
    let preps = data.tests.iter().map(encode).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = cfg
        .layers
        .iter()
        .flat_map(|l| (0..preps.len()).map(move |i| (l, i)))
        .collect();
    jobs.par_iter()
        .map(|&(layers, i)| {
            let p = classify_innerprod(
                &u1,
                &u2,
                (0, 1),
                &preps[i],
                layers,
                cfg.shots,
                point_seed(cfg.seed, layers, i),
            )?;
            let truth = data.tests[i].label.unwrap_or(0);
            Ok(PointRecord {
                index: i,
                layers: Some(layers),
                true_label: truth,
                predicted_label: p.label,
                correct: p.label == truth,
                tie: p.tie,
                score: None,
                p1: Some(p.p1.p_hat),
                p2: Some(p.p2.p_hat),
                postselect_success: None,
                analytic_label: None,
                analytic_score: None,
            })
        })
        .collect()
}

/// Per-layer accuracy recounted from point records.
pub fn layer_series(records: &[PointRecord]) -> Vec<LayerAccuracy> {
    let mut layers: Vec<usize> = records.iter().filter_map(|r| r.layers).collect();
    layers.sort_unstable();
    layers.dedup();
    layers
        .into_iter()
        .map(|l| {
            let at: Vec<&PointRecord> = records.iter().filter(|r| r.layers == Some(l)).collect();
            let correct = at.iter().filter(|r| r.correct).count();
            LayerAccuracy {
                layers: l,
                correct,
                total: at.len(),
                accuracy: correct as f64 / at.len() as f64,
            }
        })
        .collect()
}

/// Loads data, classifies every test point and aggregates the results.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ClassificationReport> {
    let data = prepare_data(cfg)?;
    let (records, model) = match cfg.method {
        Method::Qsvm => {
            let (r, m, h) = run_qsvm(cfg, &data)?;
            (r, Some((m.f, h)))
        }
        Method::Innerprod => (run_innerprod(cfg, &data)?, None),
    };
    let series = if cfg.method == Method::Innerprod {
        layer_series(&records)
    } else {
        Vec::new()
    };
    Ok(ClassificationReport::assemble(
        REPORT_SCHEMA,
        cfg.clone(),
        data.info,
        model,
        records,
        series,
    ))
}
