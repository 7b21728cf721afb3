//! Dense state-vector simulation of small circuits.
//!
//! Conventions: qubit 0 is the least-significant bit of a basis index, and
//! bitstrings are rendered with qubit `n-1` leftmost. Measurement is terminal
//! over the whole register; conditioning on outcome patterns stands in for
//! post-selection.

mod circuit;
mod gate;
mod measure;
mod state;
mod unitary;

pub use circuit::Circuit;
pub use gate::{ControlQubit, GateKind, GateOp, Matrix2, Polarity};
pub use measure::{
    bitstring, outcome_probability, pattern_probability, postselect, sample_counts, Pattern,
    ShotCounts,
};
pub use state::{QuantumState, NORM_TOLERANCE};
pub use unitary::{
    apply_matrix, circuit_unitary, gate_matrix, unitarity_defect, MAX_UNITARY_QUBITS,
};

/// Widest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;
