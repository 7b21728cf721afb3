use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Per-class feature means and spreads loosely shaped like the banknote data.
const MEANS: [[f64; 4]; 2] = [[2.28, 4.26, 0.80, -1.15], [-1.87, -0.99, 2.15, -1.25]];
const STDS: [[f64; 4]; 2] = [[2.02, 5.14, 3.24, 2.13], [1.88, 5.40, 5.26, 2.07]];

/// Seeded two-class Gaussian stand-in with 762 class-0 and 610 class-1 rows,
/// written with a header to `dir/synthetic_banknote.csv`.
pub fn write_synthetic_banknote(dir: &Path, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("variance,skewness,curtosis,entropy,class\n");
    for (class, n) in [(0usize, 762usize), (1, 610)] {
        let dists: Vec<Normal<f64>> = (0..4)
            .map(|j| Normal::new(MEANS[class][j], STDS[class][j]).unwrap())
            .collect();
        for _ in 0..n {
            for d in &dists {
                write!(text, "{},", d.sample(&mut rng)).unwrap();
            }
            writeln!(text, "{class}").unwrap();
        }
    }
    let path = dir.join("synthetic_banknote.csv");
    std::fs::write(&path, text).unwrap();
    path
}
