use serde::{Deserialize, Serialize};

use super::fmatrix::{build_f_matrix, kernel, FMatrix};
use crate::encoding::{encode, ClassLabel, FeatureVector, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::statevector::Circuit;

/// Scores with `|score| <= TIE_TOLERANCE` count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmSolution {
    pub alpha: [f64; 2],
    pub b_offset: f64,
}

/// Two labeled training vectors and everything derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub train1_vector: FeatureVector,
    pub train2_vector: FeatureVector,
    pub train1_circuit: Circuit,
    pub train2_circuit: Circuit,
    pub labels: (ClassLabel, ClassLabel),
    pub f: FMatrix,
    pub y: [f64; 2],
}

impl TrainedModel {
    /// Encodes both vectors and builds `F` for the given `γ`; `y = (+1, −1)`.
    pub fn new(
        train1: FeatureVector,
        train2: FeatureVector,
        labels: (ClassLabel, ClassLabel),
        gamma: f64,
    ) -> Result<Self> {
        if train1.len() != train2.len() {
            return Err(Error::Shape(format!(
                "training vectors of length {} and {}",
                train1.len(),
                train2.len()
            )));
        }
        let f = build_f_matrix(&train1, &train2, gamma)?;
        Ok(TrainedModel {
            train1_circuit: encode(&train1)?,
            train2_circuit: encode(&train2)?,
            train1_vector: train1,
            train2_vector: train2,
            labels,
            f,
            y: [1.0, -1.0],
        })
    }

    pub fn n_features(&self) -> usize {
        self.train1_vector.len()
    }

    /// Data-register width of the encoders.
    pub fn data_qubits(&self) -> usize {
        self.train1_circuit.n_qubits()
    }

    /// Label for a signed score: positive → train1's class, negative → train2's.
    pub fn label_for(&self, score: f64) -> (ClassLabel, bool) {
        if score.abs() <= TIE_TOLERANCE {
            (self.labels.0, true)
        } else if score > 0.0 {
            (self.labels.0, false)
        } else {
            (self.labels.1, false)
        }
    }
}

/// `F·α = y` by direct 2×2 solve, `b = 0`.
pub fn solve_ls_svm(f: &FMatrix, y: [f64; 2]) -> Result<SvmSolution> {
    let det = f.determinant();
    if det.abs() <= 1e-12 {
        return Err(Error::Singular(format!("det F = {det}")));
    }
    let alpha = [
        (f.c1 * y[0] - f.c2 * y[1]) / det,
        (f.c1 * y[1] - f.c2 * y[0]) / det,
    ];
    Ok(SvmSolution {
        alpha,
        b_offset: 0.0,
    })
}

/// Signed decision value and the label it implies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: ClassLabel,
    pub score: f64,
    pub tie: bool,
}

pub fn classify_analytic(
    sol: &SvmSolution,
    model: &TrainedModel,
    test: &FeatureVector,
) -> Result<Prediction> {
    if (test.norm() - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Precondition(format!(
            "test vector must be unit norm (‖v‖ = {})",
            test.norm()
        )));
    }
    let score = sol.alpha[0] * kernel(&model.train1_vector, test)?
        + sol.alpha[1] * kernel(&model.train2_vector, test)?
        + sol.b_offset;
    let (label, tie) = model.label_for(score);
    Ok(Prediction { label, score, tie })
}
