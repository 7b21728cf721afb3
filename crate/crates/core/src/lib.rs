//! Small-scale quantum support vector machine laboratory.
//!
//! The crate simulates the circuits of a two-training-vector QSVM (phase
//! estimation based 2×2 inversion, training-data oracle, Hadamard-test
//! readout), the 2- and 4-feature amplitude encoders, the overlap classifier
//! built from `U_train† U_test` circuits, and the classical preprocessing used
//! to pick training vectors. Every quantum result has an exact classical
//! counterpart in the same crate so the two can be cross-checked.

pub mod encoding;
pub mod error;
pub mod experiment;
pub mod innerprod;
pub mod preprocess;
pub mod qsvm;
pub mod statevector;

pub use error::{Error, ErrorClass, Result};
