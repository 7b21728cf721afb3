use nalgebra::DMatrix;
use num_complex::Complex64;

use super::circuit::Circuit;
use super::gate::GateOp;
use super::state::QuantumState;
use crate::error::{Error, Result};

/// Largest register for which the dense unitary is materialized.
pub const MAX_UNITARY_QUBITS: usize = 6;

/// Full `2^n × 2^n` matrix of a single gate embedded in an `n`-qubit register.
pub fn gate_matrix(gate: &GateOp, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    gate.validate(n_qubits)?;
    let dim = 1usize << n_qubits;
    let m = gate.kind.matrix();
    let t = gate.target;
    let (mask, value) = gate.control_masks();
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        if col & mask != value {
            g[(col, col)] = Complex64::new(1.0, 0.0);
            continue;
        }
        let cbit = (col >> t) & 1;
        for rbit in 0..2 {
            let row = (col & !(1 << t)) | (rbit << t);
            g[(row, col)] = m[rbit][cbit];
        }
    }
    Ok(g)
}

/// Dense unitary of a circuit, as the ordered product of embedded gate matrices.
///
/// This is a brute-force reference; it never touches the in-place
/// state update used by [`QuantumState::apply_circuit`].
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity(format!(
            "dense unitary limited to {MAX_UNITARY_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for op in circuit.ops() {
        u = gate_matrix(op, n)? * u;
    }
    Ok(u)
}

/// `U·ψ` for a dense matrix and a state of matching dimension.
pub fn apply_matrix(u: &DMatrix<Complex64>, state: &QuantumState) -> Result<Vec<Complex64>> {
    if u.ncols() != state.dim() {
        return Err(Error::Shape(format!(
            "{}x{} matrix applied to {}-dim state",
            u.nrows(),
            u.ncols(),
            state.dim()
        )));
    }
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    Ok((u * v).iter().copied().collect())
}

/// Maximum entrywise distance of `U†U` from the identity.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::gate::GateKind;

    #[test]
    fn empty_two_qubit_is_identity() {
        let u = circuit_unitary(&Circuit::new(2).unwrap()).unwrap();
        assert_eq!(u, DMatrix::identity(4, 4));
    }

    #[test]
    fn x_matrix() {
        let c = Circuit::from_ops(1, [GateOp::x(0)]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(u, DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]));
    }

    #[test]
    fn capacity_limit() {
        let c = Circuit::new(7).unwrap();
        assert!(matches!(circuit_unitary(&c), Err(Error::Capacity(_))));
    }

    #[test]
    fn columns_match_basis_simulation() {
        let c = Circuit::from_ops(
            3,
            [
                GateOp::h(2),
                GateOp::new(GateKind::Rx(0.4), 0).ctrl(2),
                GateOp::u3(0.3, 1.2, -0.7, 1).anti_ctrl(0),
                GateOp::new(GateKind::Phase(0.9), 2).ctrl(1).anti_ctrl(0),
            ],
        )
        .unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert!(unitarity_defect(&u) < 1e-12);
        for j in 0..8 {
            let s = QuantumState::basis(3, j)
                .unwrap()
                .apply_circuit(&c)
                .unwrap();
            for i in 0..8 {
                assert!((u[(i, j)] - s.amplitude(i)).norm() < 1e-12);
            }
        }
    }
}
