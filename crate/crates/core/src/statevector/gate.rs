use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2x2 matrix in row-major order: `[[m00, m01], [m10, m11]]`.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Single-qubit gate kinds. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    U3 {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Ry(f64),
    Rx(f64),
    Rz(f64),
    /// `diag(1, e^{iλ})`; the controlled form is the usual controlled-phase.
    Phase(f64),
    H,
    X,
    /// `e^{iφ}·I`. Uncontrolled it is unobservable; controlled it becomes a
    /// relative phase on the control subspace.
    GlobalPhase(f64),
}

impl GateKind {
    pub fn matrix(&self) -> Matrix2 {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            GateKind::U3 { theta, phi, lambda } => {
                let (s, co) = (theta / 2.0).sin_cos();
                [
                    [c(co, 0.0), -Complex64::from_polar(s, lambda)],
                    [
                        Complex64::from_polar(s, phi),
                        Complex64::from_polar(co, phi + lambda),
                    ],
                ]
            }
            GateKind::Ry(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::Rx(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            GateKind::Rz(theta) => [
                [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
            ],
            GateKind::Phase(lambda) => [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, lambda)],
            ],
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
            }
            GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            GateKind::GlobalPhase(phi) => {
                let p = Complex64::from_polar(1.0, phi);
                [[p, c(0.0, 0.0)], [c(0.0, 0.0), p]]
            }
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::U3 { theta, phi, lambda } => GateKind::U3 {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Phase(l) => GateKind::Phase(-l),
            GateKind::H => GateKind::H,
            GateKind::X => GateKind::X,
            GateKind::GlobalPhase(p) => GateKind::GlobalPhase(-p),
        }
    }

    /// True when the matrix has only real entries.
    pub fn is_real(&self) -> bool {
        match *self {
            GateKind::Ry(_) | GateKind::H | GateKind::X => true,
            GateKind::U3 { phi, lambda, .. } => phi == 0.0 && lambda == 0.0,
            GateKind::Rx(t) | GateKind::Rz(t) | GateKind::Phase(t) | GateKind::GlobalPhase(t) => {
                t == 0.0
            }
        }
    }

    fn angles(&self) -> [f64; 3] {
        match *self {
            GateKind::U3 { theta, phi, lambda } => [theta, phi, lambda],
            GateKind::Ry(t)
            | GateKind::Rx(t)
            | GateKind::Rz(t)
            | GateKind::Phase(t)
            | GateKind::GlobalPhase(t) => [t, 0.0, 0.0],
            GateKind::H | GateKind::X => [0.0; 3],
        }
    }
}

/// Whether a control fires on `|1⟩` (control) or `|0⟩` (anti-control).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Control,
    AntiControl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ControlQubit {
    pub qubit: usize,
    pub polarity: Polarity,
}

/// A single-qubit gate with an arbitrary set of (anti-)controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<ControlQubit>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize) -> Self {
        GateOp {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn h(target: usize) -> Self {
        Self::new(GateKind::H, target)
    }

    pub fn x(target: usize) -> Self {
        Self::new(GateKind::X, target)
    }

    pub fn ry(theta: f64, target: usize) -> Self {
        Self::new(GateKind::Ry(theta), target)
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, target: usize) -> Self {
        Self::new(GateKind::U3 { theta, phi, lambda }, target)
    }

    /// Adds a control that fires on `|1⟩`.
    pub fn ctrl(mut self, qubit: usize) -> Self {
        self.controls.push(ControlQubit {
            qubit,
            polarity: Polarity::Control,
        });
        self
    }

    /// Adds a control that fires on `|0⟩`.
    pub fn anti_ctrl(mut self, qubit: usize) -> Self {
        self.controls.push(ControlQubit {
            qubit,
            polarity: Polarity::AntiControl,
        });
        self
    }

    pub fn with_control(mut self, control: ControlQubit) -> Self {
        self.controls.push(control);
        self
    }

    pub fn inverse(&self) -> GateOp {
        GateOp {
            kind: self.kind.inverse(),
            target: self.target,
            controls: self.controls.clone(),
        }
    }

    /// Largest qubit index touched by this gate.
    pub fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .map(|c| c.qubit)
            .fold(self.target, usize::max)
    }

    /// Bit masks `(mask, value)` such that the gate acts on basis index `i`
    /// exactly when `i & mask == value`.
    pub(crate) fn control_masks(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(m, v), c| {
            let bit = 1usize << c.qubit;
            match c.polarity {
                Polarity::Control => (m | bit, v | bit),
                Polarity::AntiControl => (m | bit, v),
            }
        })
    }

    /// Checks index bounds, control/target overlap, and finite angles.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.target >= n_qubits {
            return Err(Error::Index {
                index: self.target,
                n_qubits,
            });
        }
        for (i, c) in self.controls.iter().enumerate() {
            if c.qubit >= n_qubits {
                return Err(Error::Index {
                    index: c.qubit,
                    n_qubits,
                });
            }
            if c.qubit == self.target {
                return Err(Error::InvalidGate(format!(
                    "qubit {} is both target and control",
                    c.qubit
                )));
            }
            if self.controls[..i].iter().any(|o| o.qubit == c.qubit) {
                return Err(Error::InvalidGate(format!(
                    "qubit {} listed twice as a control",
                    c.qubit
                )));
            }
        }
        if self.kind.angles().iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidGate(format!(
                "non-finite angle in {:?}",
                self.kind
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn adjoint(m: &Matrix2) -> Matrix2 {
        [
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ]
    }

    fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    fn assert_identity(m: &Matrix2, tol: f64) {
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (m[i][j] - Complex64::new(expect, 0.0)).norm() < tol,
                    "{m:?}"
                );
            }
        }
    }

    fn kinds() -> Vec<GateKind> {
        vec![
            GateKind::U3 {
                theta: 0.7,
                phi: -1.3,
                lambda: 2.1,
            },
            GateKind::Ry(1.1),
            GateKind::Rx(-0.4),
            GateKind::Rz(2.9),
            GateKind::Phase(PI / 3.0),
            GateKind::H,
            GateKind::X,
            GateKind::GlobalPhase(0.25),
        ]
    }

    #[test]
    fn every_kind_is_unitary() {
        for k in kinds() {
            let m = k.matrix();
            assert_identity(&mul(&adjoint(&m), &m), 1e-12);
        }
    }

    #[test]
    fn inverse_matches_matrix_adjoint() {
        for k in kinds() {
            let prod = mul(&k.inverse().matrix(), &k.matrix());
            assert_identity(&prod, 1e-12);
        }
    }

    #[test]
    fn u3_reduces_to_ry_when_phases_vanish() {
        let u = GateKind::U3 {
            theta: 0.9,
            phi: 0.0,
            lambda: 0.0,
        }
        .matrix();
        let r = GateKind::Ry(0.9).matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[i][j] - r[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn validate_rejects_bad_ops() {
        assert!(matches!(
            GateOp::x(3).validate(3),
            Err(Error::Index { index: 3, .. })
        ));
        assert!(GateOp::x(0).ctrl(0).validate(2).is_err());
        assert!(GateOp::x(0).ctrl(1).anti_ctrl(1).validate(2).is_err());
        assert!(GateOp::ry(f64::NAN, 0).validate(1).is_err());
        assert!(GateOp::x(0).ctrl(1).anti_ctrl(2).validate(3).is_ok());
    }
}
