use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::GateOp;
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Tolerance on `Σ|a|² = 1` accepted when constructing a state from raw amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Pure state of an `n`-qubit register.
///
/// Basis index bit `k` is qubit `k`, so qubit 0 is the least-significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// The all-zeros state `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "register width {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Index { index, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps explicit amplitudes; length must be a power of two and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Shape(format!(
                "amplitude count {dim} is not 2^n with n >= 1"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "register width {n_qubits} exceeds {MAX_QUBITS}"
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::Precondition("non-finite amplitude".into()));
        }
        let state = QuantumState {
            n_qubits,
            amplitudes,
        };
        let err = (state.norm_sqr() - 1.0).abs();
        if err > NORM_TOLERANCE {
            return Err(Error::Precondition(format!(
                "state norm deviates from 1 by {err:.3e}"
            )));
        }
        Ok(state)
    }

    /// Real amplitudes, normalized here.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateVector("all-zero amplitudes".into()));
        }
        Self::from_amplitudes(
            values
                .iter()
                .map(|v| Complex64::new(v / norm, 0.0))
                .collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(mut self, gate: &GateOp) -> Result<Self> {
        self.apply_gate_mut(gate)?;
        Ok(self)
    }

    pub fn apply_circuit(mut self, circuit: &Circuit) -> Result<Self> {
        self.apply_circuit_mut(circuit)?;
        Ok(self)
    }

    pub fn apply_gate_mut(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let m = gate.kind.matrix();
        let tbit = 1usize << gate.target;
        let (mask, value) = gate.control_masks();
        for i in 0..self.amplitudes.len() {
            if i & tbit != 0 || i & mask != value {
                continue;
            }
            let j = i | tbit;
            let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
        Ok(())
    }

    pub fn apply_circuit_mut(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "{}-qubit circuit applied to {}-qubit state",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        for op in circuit.ops() {
            self.apply_gate_mut(op)?;
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Shape("inner product of mismatched registers".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest elementwise deviation after removing the relative global phase.
    ///
    /// The phase is fixed by the largest-magnitude amplitude of `other`.
    pub fn distance_up_to_phase(&self, other: &QuantumState) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let pivot = other
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (a, b) = (self.amplitudes[pivot], other.amplitudes[pivot]);
        let phase = if a.norm() == 0.0 || b.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            let r = b / a;
            r / r.norm()
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| (x * phase - y).norm())
            .fold(0.0, f64::max)
    }

    /// Projects onto basis indices accepted by `keep` and renormalizes.
    ///
    /// Returns the projected state and the probability mass that was kept.
    pub(crate) fn project(&self, keep: impl Fn(usize) -> bool) -> Result<(QuantumState, f64)> {
        let mut amplitudes = self.amplitudes.clone();
        let mut mass = 0.0;
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if keep(i) {
                mass += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if mass <= 0.0 {
            return Err(Error::StarvedPostSelection(mass));
        }
        let scale = mass.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok((
            QuantumState {
                n_qubits: self.n_qubits,
                amplitudes,
            },
            mass,
        ))
    }
}
