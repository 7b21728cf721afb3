use serde::{Deserialize, Serialize};

use crate::encoding::{FeatureVector, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::statevector::{GateKind, GateOp};

/// Dot-product kernel `Σ xₖ·yₖ`.
pub fn kernel(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    x.dot(y)
}

/// Regularized 2×2 kernel matrix `F = K + I/γ` with the offset row removed.
///
/// For unit training vectors the diagonal is `c1 = 1 + 1/γ` and the
/// off-diagonal is `c2 = k12`, so `F = c1·I + c2·X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FMatrix {
    pub k11: f64,
    pub k12: f64,
    pub k22: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
}

impl FMatrix {
    /// `(λ₊, λ₋) = (c1 + c2, c1 − c2)`, eigenvectors `|+⟩` and `|−⟩`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.c1 + self.c2, self.c1 - self.c2)
    }

    pub fn lambda_min(&self) -> f64 {
        let (p, m) = self.eigenvalues();
        p.min(m)
    }

    pub fn lambda_max(&self) -> f64 {
        let (p, m) = self.eigenvalues();
        p.max(m)
    }

    /// Row-major entries.
    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.c1, self.c2], [self.c2, self.c1]]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.c1 * v[0] + self.c2 * v[1],
            self.c2 * v[0] + self.c1 * v[1],
        ]
    }

    pub fn determinant(&self) -> f64 {
        self.c1 * self.c1 - self.c2 * self.c2
    }
}

pub fn build_f_matrix(
    train1: &FeatureVector,
    train2: &FeatureVector,
    gamma: f64,
) -> Result<FMatrix> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Precondition(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    for (name, v) in [("train1", train1), ("train2", train2)] {
        if (v.norm() - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Precondition(format!(
                "{name} must be unit norm (‖v‖ = {})",
                v.norm()
            )));
        }
    }
    let k12 = kernel(train1, train2)?;
    let k11 = kernel(train1, train1)?;
    let k22 = kernel(train2, train2)?;
    let c1 = 1.0 + 1.0 / gamma;
    let f = FMatrix {
        k11,
        k12,
        k22,
        gamma,
        c1,
        c2: k12,
    };
    if f.lambda_min() <= 1e-12 {
        return Err(Error::Singular(format!(
            "F has eigenvalues {:?}; |k12| = {} must stay below {c1}",
            f.eigenvalues(),
            k12.abs()
        )));
    }
    Ok(f)
}

/// `e^{iF·t}` on one qubit as `[GlobalPhase(c1·t), RX(−2·c2·t)]`.
///
/// The explicit phase gate matters once the pair is controlled.
pub fn f_evolution_gate(f: &FMatrix, t: f64, target: usize) -> [GateOp; 2] {
    [
        GateOp::new(GateKind::GlobalPhase(f.c1 * t), target),
        GateOp::new(GateKind::Rx(-2.0 * f.c2 * t), target),
    ]
}
