//! Classical feature vectors and their state-preparation circuits.
//!
//! Two encoders are provided:
//!
//! * [`encode2`]: a unit 2-vector `(α, β)` becomes a single `RY(θ)` with
//!   `θ = 2·atan2(β, α)`, so `RY(θ)|0⟩ = α|0⟩ + β|1⟩`.
//! * [`encode4`]: a unit 4-vector `(α, β, γ, δ)` becomes the 2-qubit state
//!   `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` using one rotation on the branch qubit
//!   (qubit 1) followed by an anti-controlled and a controlled rotation on
//!   the data qubit (qubit 0).
//!
//! All angles go through the two-argument arctangent so signed features keep
//! their sign. Generated gates are U3 with `φ = λ = 0`, hence real matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateOp};

/// Inputs to the encoders must satisfy `|‖v‖ - 1| <= NORMALIZATION_TOLERANCE`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Class labels are `0` or `1`.
pub type ClassLabel = u8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub features: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ClassLabel>,
}

impl FeatureVector {
    pub fn new(features: Vec<f64>) -> Self {
        FeatureVector {
            features,
            label: None,
        }
    }

    pub fn labeled(features: Vec<f64>, label: ClassLabel) -> Self {
        FeatureVector {
            features,
            label: Some(label),
        }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.features.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &FeatureVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "dot product of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .features
            .iter()
            .zip(&other.features)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }
}

/// `v / ‖v‖`, keeping the label.
pub fn normalize(v: &FeatureVector) -> Result<FeatureVector> {
    if v.features.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("non-finite feature".into()));
    }
    let n = v.norm();
    if n == 0.0 {
        return Err(Error::DegenerateVector(
            "cannot normalize an all-zero feature vector".into(),
        ));
    }
    Ok(FeatureVector {
        features: v.features.iter().map(|x| x / n).collect(),
        label: v.label,
    })
}

/// Rotation angle taking `|0⟩` to `(α|0⟩ + β|1⟩)/‖(α, β)‖`.
pub fn angle2(alpha: f64, beta: f64) -> Result<f64> {
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::DegenerateVector("angle of the zero vector".into()));
    }
    Ok(2.0 * beta.atan2(alpha))
}

fn require_unit(v: &FeatureVector, len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::Shape(format!(
            "encoder expects {len} features, got {}",
            v.len()
        )));
    }
    if !v.is_unit() {
        return Err(Error::Precondition(format!(
            "feature vector must be unit norm (‖v‖ = {})",
            v.norm()
        )));
    }
    Ok(())
}

/// Single-qubit preparation `[RY(angle2(α, β))]` for a unit 2-vector.
pub fn encode2(v: &FeatureVector) -> Result<Circuit> {
    require_unit(v, 2)?;
    let theta = angle2(v.features[0], v.features[1])?;
    Circuit::from_ops(1, [GateOp::ry(theta, 0)])
}

/// Which gate of the 4-feature encoder a parameter row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateRole {
    /// Rotation of the branch qubit.
    U3Branch,
    /// Anti-controlled rotation preparing the `|0⟩`-branch of the data qubit.
    U3AntiControlled,
    /// Controlled rotation preparing the `|1⟩`-branch of the data qubit.
    U3Controlled,
    /// Single rotation of the 2-feature encoder.
    Ry,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodedGate {
    pub role: GateRole,
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    pub angles: Vec<EncodedGate>,
}

impl EncodingParams {
    pub fn theta(&self, role: GateRole) -> Option<f64> {
        self.angles.iter().find(|g| g.role == role).map(|g| g.theta)
    }
}

/// Angle convention for the controlled gate of the 4-feature encoder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlledAngle {
    /// `θ = 2·atan2(δ, γ)`: the `|1⟩` branch becomes `(γ|0⟩ + δ|1⟩)/r`.
    #[default]
    Faithful,
    /// `θ = 2·atan2(γ, δ)`: the argument order as commonly tabulated; swaps
    /// the roles of γ and δ and therefore does not reproduce the input in
    /// general. Kept for side-by-side comparison.
    Literal,
}

fn branch_angle(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        2.0 * num.atan2(den)
    }
}

/// Gate parameters of the 4-feature encoder.
pub fn encode4_params(v: &FeatureVector, convention: ControlledAngle) -> Result<EncodingParams> {
    require_unit(v, 4)?;
    let [a, b, g, d] = [v.features[0], v.features[1], v.features[2], v.features[3]];
    let r0 = a.hypot(b);
    let r1 = g.hypot(d);
    let controlled = match convention {
        ControlledAngle::Faithful => branch_angle(d, g),
        ControlledAngle::Literal => branch_angle(g, d),
    };
    let gate = |role, theta| EncodedGate {
        role,
        theta,
        phi: 0.0,
        lambda: 0.0,
    };
    Ok(EncodingParams {
        angles: vec![
            gate(GateRole::U3Branch, branch_angle(r1, r0)),
            gate(GateRole::U3AntiControlled, branch_angle(b, a)),
            gate(GateRole::U3Controlled, controlled),
        ],
    })
}

/// Circuit for encoder parameters produced by [`encode4_params`].
pub fn params_circuit(params: &EncodingParams) -> Result<Circuit> {
    const DATA: usize = 0;
    const BRANCH: usize = 1;
    let mut c = Circuit::new(2)?;
    for g in &params.angles {
        let op = GateOp::u3(g.theta, g.phi, g.lambda, DATA);
        let op = match g.role {
            GateRole::U3Branch => GateOp::u3(g.theta, g.phi, g.lambda, BRANCH),
            GateRole::U3AntiControlled => op.anti_ctrl(BRANCH),
            GateRole::U3Controlled => op.ctrl(BRANCH),
            GateRole::Ry => {
                return Err(Error::Shape("RY role in a 4-feature parameter set".into()))
            }
        };
        c.push(op)?;
    }
    Ok(c)
}

/// Two-qubit preparation of `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` for a unit 4-vector.
pub fn encode4(v: &FeatureVector) -> Result<Circuit> {
    params_circuit(&encode4_params(v, ControlledAngle::Faithful)?)
}

/// Picks [`encode2`] or [`encode4`] by vector length.
pub fn encode(v: &FeatureVector) -> Result<Circuit> {
    match v.len() {
        2 => encode2(v),
        4 => encode4(v),
        n => Err(Error::Shape(format!(
            "no encoder for {n} features (expected 2 or 4)"
        ))),
    }
}
