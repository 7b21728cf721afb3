use serde::{Deserialize, Serialize};

use super::gate::{ControlQubit, GateOp};
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Ordered gate list over a fixed register width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "circuit width {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        Ok(Circuit {
            n_qubits,
            ops: Vec::new(),
        })
    }

    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits)?;
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends every gate of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::Shape(format!(
                "cannot append {}-qubit circuit to {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Reversed gate order with each gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Relabels qubit `i` to `mapping[i]` inside a register of `n_qubits`.
    pub fn embed(&self, n_qubits: usize, mapping: &[usize]) -> Result<Circuit> {
        if mapping.len() != self.n_qubits {
            return Err(Error::Shape(format!(
                "mapping has {} entries for a {}-qubit circuit",
                mapping.len(),
                self.n_qubits
            )));
        }
        let ops = self.ops.iter().map(|op| GateOp {
            kind: op.kind,
            target: mapping[op.target],
            controls: op
                .controls
                .iter()
                .map(|c| ControlQubit {
                    qubit: mapping[c.qubit],
                    polarity: c.polarity,
                })
                .collect(),
        });
        Circuit::from_ops(n_qubits, ops)
    }

    /// Same circuit with `control` added to every gate.
    pub fn controlled(&self, control: ControlQubit) -> Result<Circuit> {
        Circuit::from_ops(
            self.n_qubits,
            self.ops.iter().cloned().map(|op| op.with_control(control)),
        )
    }

    /// Splits into the first `at` gates and the rest.
    pub fn split_at(&self, at: usize) -> (Circuit, Circuit) {
        let (a, b) = self.ops.split_at(at.min(self.ops.len()));
        (
            Circuit {
                n_qubits: self.n_qubits,
                ops: a.to_vec(),
            },
            Circuit {
                n_qubits: self.n_qubits,
                ops: b.to_vec(),
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::gate::GateKind;

    #[test]
    fn adjoint_reverses_and_inverts() {
        let c =
            Circuit::from_ops(2, [GateOp::ry(0.3, 0), GateOp::h(1), GateOp::x(0).ctrl(1)]).unwrap();
        let a = c.adjoint();
        assert_eq!(a.ops()[0], GateOp::x(0).ctrl(1));
        assert_eq!(a.ops()[1], GateOp::h(1));
        assert_eq!(a.ops()[2].kind, GateKind::Ry(-0.3));
    }

    #[test]
    fn adjoint_of_single_ry_and_h() {
        let c = Circuit::from_ops(1, [GateOp::ry(0.8, 0)]).unwrap();
        assert_eq!(c.adjoint().ops(), &[GateOp::ry(-0.8, 0)]);
        let h = Circuit::from_ops(1, [GateOp::h(0)]).unwrap();
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn push_validates_indices() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(GateOp::x(2)).is_err());
        assert!(c.push(GateOp::x(1).ctrl(5)).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn width_bounds() {
        assert!(Circuit::new(0).is_err());
        assert!(Circuit::new(13).is_err());
        assert!(Circuit::new(12).is_ok());
    }

    #[test]
    fn embed_remaps_targets_and_controls() {
        let c = Circuit::from_ops(2, [GateOp::x(0).anti_ctrl(1)]).unwrap();
        let e = c.embed(4, &[3, 1]).unwrap();
        assert_eq!(e.ops()[0], GateOp::x(3).anti_ctrl(1));
        assert!(c.embed(4, &[0]).is_err());
    }
}
