//! Two-point least-squares SVM, solved classically and by circuit.
//!
//! The circuit path prepares `|0, y⟩`, inverts `F` with phase estimation,
//! loads the training vectors through an index-controlled oracle, applies
//! the adjoint of the test preparation and reads the sign of
//! `Σᵢ αᵢ·κ(xᵢ, x₀)` with a Hadamard test.

mod circuit;
mod fmatrix;
mod hhl;
mod svm;

pub use circuit::{
    classify_qsvm, qsvm_circuit, QsvmCircuit, QsvmDiagnostics, QsvmLayout, QsvmPrediction, Shots,
    MIN_POSTSELECT_SUCCESS,
};
pub use fmatrix::{build_f_matrix, f_evolution_gate, kernel, FMatrix};
pub use hhl::{hhl_ops, hhl_stages, hhl_subcircuit, qft, HhlConfig, HhlLayout, HhlStages};
pub use svm::{
    classify_analytic, solve_ls_svm, Prediction, SvmSolution, TrainedModel, TIE_TOLERANCE,
};
