//! Dataset loading, stratified splitting and the choice of training vectors.

mod centers;
mod dataset;
mod split;
mod summary;

pub use centers::{class_averages, kmeans, nearest, sse, KMeansConfig, KMeansInit, KMeansResult};
pub use dataset::{load_dataset, Dataset};
pub use split::{
    split, split_with_tallies, test_tallies, SplitResult, BANKNOTE_CLASS_COUNTS,
    BANKNOTE_TEST_SIZE, BANKNOTE_TEST_TALLIES,
};
pub use summary::{percentile, summarize, ColumnStats, DatasetSummary};
