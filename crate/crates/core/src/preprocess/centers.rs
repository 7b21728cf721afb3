use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::encoding::{ClassLabel, FeatureVector};
use crate::error::{Error, Result};

/// Per-class feature means `(center0, center1)`, not normalized.
pub fn class_averages(train: &Dataset) -> Result<(FeatureVector, FeatureVector)> {
    let d = train.n_features();
    let mut sums = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0usize; 2];
    for (i, row) in train.rows.iter().enumerate() {
        let c = train.label(i) as usize;
        counts[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(&row.features) {
            *s += x;
        }
    }
    if counts.contains(&0) {
        return Err(Error::DegenerateSplit(format!(
            "class counts {counts:?}: both classes must be present"
        )));
    }
    let [s0, s1] = sums;
    let mean = |s: Vec<f64>, n: usize, label: ClassLabel| {
        FeatureVector::labeled(s.into_iter().map(|x| x / n as f64).collect(), label)
    };
    Ok((mean(s0, counts[0], 0), mean(s1, counts[1], 1)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMeansInit {
    /// Start from the per-class means.
    #[default]
    ClassMeans,
    /// First center uniformly, second with probability ∝ squared distance.
    DistanceWeighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub init: KMeansInit,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            init: KMeansInit::ClassMeans,
            seed: 0,
            max_iter: 300,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub centers: [FeatureVector; 2],
    pub assignments: Vec<usize>,
    pub sse: f64,
    /// SSE after each assignment step, then the SSE of the final centers.
    pub sse_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Class assigned to each cluster.
    pub label_map: [ClassLabel; 2],
}

impl KMeansResult {
    /// The cluster center mapped to `label`.
    pub fn center_for(&self, label: ClassLabel) -> &FeatureVector {
        let k = if self.label_map[0] == label { 0 } else { 1 };
        &self.centers[k]
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sum of squared distances from each row to the center it is assigned to.
pub fn sse(data: &Dataset, centers: &[Vec<f64>], assignments: &[usize]) -> f64 {
    data.rows
        .iter()
        .zip(assignments)
        .map(|(r, &k)| dist2(&r.features, &centers[k]))
        .sum()
}

/// Index of the nearest center; ties go to the lower index.
pub fn nearest(x: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, c) in centers.iter().enumerate() {
        let d = dist2(x, c);
        if d < best_d {
            best = k;
            best_d = d;
        }
    }
    best
}

fn initial_centers(train: &Dataset, cfg: &KMeansConfig) -> Result<Vec<Vec<f64>>> {
    match cfg.init {
        KMeansInit::ClassMeans => {
            let (c0, c1) = class_averages(train)?;
            Ok(vec![c0.features, c1.features])
        }
        KMeansInit::DistanceWeighted => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let first = train.rows[rng.random_range(0..train.len())]
                .features
                .clone();
            let weights: Vec<f64> = train
                .rows
                .iter()
                .map(|r| dist2(&r.features, &first))
                .collect();
            let total: f64 = weights.iter().sum();
            let second = if total == 0.0 {
                first.clone()
            } else {
                let mut r = rng.random::<f64>() * total;
                let mut pick = train.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if r < *w {
                        pick = i;
                        break;
                    }
                    r -= w;
                }
                train.rows[pick].features.clone()
            };
            Ok(vec![first, second])
        }
    }
}

/// Majority true label per cluster; if both clusters pick the same class,
/// the cluster with the larger class-0 fraction becomes class 0.
fn label_clusters(train: &Dataset, assignments: &[usize]) -> [ClassLabel; 2] {
    let mut tally = [[0usize; 2]; 2];
    for (i, &k) in assignments.iter().enumerate() {
        tally[k][train.label(i) as usize] += 1;
    }
    let majority = |t: [usize; 2]| -> ClassLabel { (t[1] > t[0]) as ClassLabel };
    let m = [majority(tally[0]), majority(tally[1])];
    if m[0] != m[1] {
        return m;
    }
    let frac0 = |t: [usize; 2]| {
        let n = t[0] + t[1];
        if n == 0 {
            0.0
        } else {
            t[0] as f64 / n as f64
        }
    };
    if frac0(tally[0]) >= frac0(tally[1]) {
        [0, 1]
    } else {
        [1, 0]
    }
}

/// Two-cluster Lloyd iteration on raw features.
pub fn kmeans(train: &Dataset, cfg: &KMeansConfig) -> Result<KMeansResult> {
    const K: usize = 2;
    if train.len() < K {
        return Err(Error::Precondition(format!(
            "k-means needs at least {K} rows, got {}",
            train.len()
        )));
    }
    let d = train.n_features();
    let mut centers = initial_centers(train, cfg)?;
    let mut assignments = vec![0usize; train.len()];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        for (a, r) in assignments.iter_mut().zip(&train.rows) {
            *a = nearest(&r.features, &centers);
        }
        history.push(sse(train, &centers, &assignments));

        let mut sums = vec![vec![0.0; d]; K];
        let mut counts = [0usize; K];
        for (r, &k) in train.rows.iter().zip(&assignments) {
            counts[k] += 1;
            for (s, x) in sums[k].iter_mut().zip(&r.features) {
                *s += x;
            }
        }
        let mut moved = 0.0f64;
        let mut next = centers.clone();
        for k in 0..K {
            if counts[k] > 0 {
                next[k] = sums[k].iter().map(|s| s / counts[k] as f64).collect();
            }
        }
        for k in 0..K {
            if counts[k] == 0 {
                let far = train
                    .rows
                    .iter()
                    .map(|r| dist2(&r.features, &centers[k]))
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                next[k] = train.rows[far].features.clone();
            }
        }
        for k in 0..K {
            moved = moved.max(dist2(&centers[k], &next[k]).sqrt());
        }
        let reseeded = counts.contains(&0);
        centers = next;
        if moved < cfg.tol && !reseeded {
            converged = true;
            break;
        }
    }

    for (a, r) in assignments.iter_mut().zip(&train.rows) {
        *a = nearest(&r.features, &centers);
    }
    let final_sse = sse(train, &centers, &assignments);
    history.push(final_sse);
    let label_map = label_clusters(train, &assignments);
    let [c0, c1]: [Vec<f64>; 2] = centers.try_into().expect("two centers");
    Ok(KMeansResult {
        centers: [
            FeatureVector::labeled(c0, label_map[0]),
            FeatureVector::labeled(c1, label_map[1]),
        ],
        assignments,
        sse: final_sse,
        sse_history: history,
        iterations,
        converged,
        label_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn data(rows: &[(Vec<f64>, u8)]) -> Dataset {
        let d = rows[0].0.len();
        Dataset::new(
            rows.iter()
                .map(|(f, l)| FeatureVector::labeled(f.clone(), *l))
                .collect(),
            Dataset::default_names(d),
        )
        .unwrap()
    }

    #[test]
    fn averages_examples() {
        let d = data(&[
            (vec![2.0, 0.0, 1.0, 1.0], 0),
            (vec![0.0, 2.0, 1.0, 1.0], 0),
            (vec![-1.0; 4], 1),
            (vec![-1.0; 4], 1),
        ]);
        let (c0, c1) = class_averages(&d).unwrap();
        assert_eq!(c0.features, vec![1.0; 4]);
        assert_eq!(c1.features, vec![-1.0; 4]);

        let d = data(&[
            (vec![3.0, 4.0], 0),
            (vec![1.0, 1.0], 1),
            (vec![3.0, 1.0], 1),
        ]);
        assert_eq!(class_averages(&d).unwrap().0.features, vec![3.0, 4.0]);

        let d = data(&[(vec![1.0, 1.0], 0)]);
        assert!(matches!(class_averages(&d), Err(Error::DegenerateSplit(_))));
    }

    #[test]
    fn two_blobs() {
        let e = 0.01;
        let d = data(&[
            (vec![e, 0.0, 0.0, 0.0], 0),
            (vec![-e, 0.0, 0.0, 0.0], 0),
            (vec![10.0 + e, 10.0, 10.0, 10.0], 1),
            (vec![10.0 - e, 10.0, 10.0, 10.0], 1),
        ]);
        let r = kmeans(&d, &KMeansConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.center_for(0).features, vec![0.0; 4]);
        assert_eq!(r.center_for(1).features, vec![10.0; 4]);
        assert_eq!(r.label_map, [0, 1]);
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        // Both classes have the same mean, so one cluster starts empty.
        let d = data(&[
            (vec![0.0, 0.0], 0),
            (vec![2.0, 0.0], 0),
            (vec![1.0, 0.0], 1),
            (vec![1.0, 0.0], 1),
        ]);
        let r = kmeans(&d, &KMeansConfig::default()).unwrap();
        assert!(r.assignments.contains(&1));
        assert!(r.sse < 2.0);
    }

    #[test]
    fn too_few_rows() {
        let d = data(&[(vec![0.0, 1.0], 0)]);
        assert!(matches!(
            kmeans(&d, &KMeansConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn iteration_cap_marks_non_convergence() {
        let d = data(&[
            (vec![0.0], 0),
            (vec![1.0], 0),
            (vec![5.0], 1),
            (vec![9.0], 1),
            (vec![3.0], 1),
        ]);
        let cfg = KMeansConfig {
            max_iter: 1,
            ..KMeansConfig::default()
        };
        let r = kmeans(&d, &cfg).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(!r.converged);
    }

    #[test]
    fn label_collision_resolution() {
        let d = data(&[
            (vec![0.0], 0),
            (vec![0.1], 0),
            (vec![0.2], 1),
            (vec![9.0], 0),
            (vec![9.1], 0),
            (vec![9.2], 0),
        ]);
        assert_eq!(label_clusters(&d, &[0, 0, 0, 1, 1, 1]), [1, 0]);
    }

    fn dataset_strategy() -> impl Strategy<Value = Dataset> {
        prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 4), 0u8..2), 4..40)
            .prop_filter("both classes", |rows| {
                rows.iter().any(|r| r.1 == 0) && rows.iter().any(|r| r.1 == 1)
            })
            .prop_map(|rows| data(&rows))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn sse_never_increases(d in dataset_strategy(), seed in any::<u64>(), weighted in any::<bool>()) {
            let init = if weighted { KMeansInit::DistanceWeighted } else { KMeansInit::ClassMeans };
            let r = kmeans(&d, &KMeansConfig { init, seed, ..KMeansConfig::default() }).unwrap();
            for w in r.sse_history.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-9 * (1.0 + w[0]));
            }
        }

        #[test]
        fn converged_is_fixed_point(d in dataset_strategy()) {
            let r = kmeans(&d, &KMeansConfig::default()).unwrap();
            if r.converged {
                let centers = [r.centers[0].features.clone(), r.centers[1].features.clone()];
                for (row, &k) in d.rows.iter().zip(&r.assignments) {
                    prop_assert_eq!(nearest(&row.features, &centers), k);
                }
            }
        }

        #[test]
        fn deterministic(d in dataset_strategy(), seed in any::<u64>()) {
            let cfg = KMeansConfig { init: KMeansInit::DistanceWeighted, seed, ..KMeansConfig::default() };
            prop_assert_eq!(kmeans(&d, &cfg).unwrap(), kmeans(&d, &cfg).unwrap());
        }

        #[test]
        fn averages_idempotent(c0 in prop::collection::vec(-5.0f64..5.0, 4), c1 in prop::collection::vec(-5.0f64..5.0, 4), n0 in 1usize..5, n1 in 1usize..5) {
            let mut rows = vec![(c0.clone(), 0u8); n0];
            rows.extend(vec![(c1.clone(), 1u8); n1]);
            let (a0, a1) = class_averages(&data(&rows)).unwrap();
            for (x, y) in a0.features.iter().zip(&c0) {
                prop_assert!((x - y).abs() <= 1e-15 * (1.0 + y.abs()) * n0 as f64);
            }
            for (x, y) in a1.features.iter().zip(&c1) {
                prop_assert!((x - y).abs() <= 1e-15 * (1.0 + y.abs()) * n1 as f64);
            }
        }
    }
}
