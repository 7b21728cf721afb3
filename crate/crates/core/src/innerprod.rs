//! Overlap classifier: measure `U_train† U_test |0…0⟩` and compare the
//! all-zeros probabilities `|⟨ψ_train|ψ_test⟩|²` of the two training points.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::ClassLabel;
use crate::error::{Error, Result};
use crate::qsvm::Shots;
use crate::statevector::{pattern_probability, sample_counts, Circuit, Pattern, QuantumState};

/// Largest layer count accepted by [`layer_sweep`].
pub const MAX_LAYERS: usize = 60;

/// `|p1 − p2|` at or below this is a tie.
pub const OVERLAP_TIE_TOLERANCE: f64 = 1e-12;

/// Seed offsets for the train1 and train2 overlap runs.
pub const TRAIN1_SEED_OFFSET: u64 = 0x1000_0001;
pub const TRAIN2_SEED_OFFSET: u64 = 0x2000_0002;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapEstimate {
    pub p_hat: f64,
    pub shots: Shots,
    pub std_error: f64,
}

/// `(U_train† · U_test)` repeated `layers` times, starting with `U_test`.
pub fn build_overlap_circuit(
    train_prep: &Circuit,
    test_prep: &Circuit,
    layers: usize,
) -> Result<Circuit> {
    if train_prep.n_qubits() != test_prep.n_qubits() {
        return Err(Error::Shape(format!(
            "training preparation on {} qubits, test on {}",
            train_prep.n_qubits(),
            test_prep.n_qubits()
        )));
    }
    if layers == 0 {
        return Err(Error::Precondition("layers must be at least 1".into()));
    }
    let undo = train_prep.adjoint();
    let mut c = Circuit::new(test_prep.n_qubits())?;
    for _ in 0..layers {
        c.append(test_prep)?;
        c.append(&undo)?;
    }
    Ok(c)
}

/// All-zeros probability of `circuit` applied to `|0…0⟩`.
pub fn estimate_overlap(circuit: &Circuit, shots: Shots, seed: u64) -> Result<OverlapEstimate> {
    let n = circuit.n_qubits();
    let state = QuantumState::new(n)?.apply_circuit(circuit)?;
    let zeros = Pattern::all_zeros(n);
    match shots {
        Shots::Exact => Ok(OverlapEstimate {
            p_hat: pattern_probability(&state, &zeros)?,
            shots,
            std_error: 0.0,
        }),
        Shots::Count(total) => {
            let counts = sample_counts(&state, total, seed)?;
            let p = counts.count_matching(&zeros) as f64 / total as f64;
            Ok(OverlapEstimate {
                p_hat: p,
                shots,
                std_error: (p * (1.0 - p) / total as f64).sqrt(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapPrediction {
    pub label: ClassLabel,
    pub p1: OverlapEstimate,
    pub p2: OverlapEstimate,
    pub tie: bool,
}

/// Assigns the class of the training point with the larger overlap.
pub fn classify_innerprod(
    train1_prep: &Circuit,
    train2_prep: &Circuit,
    labels: (ClassLabel, ClassLabel),
    test_prep: &Circuit,
    layers: usize,
    shots: Shots,
    seed: u64,
) -> Result<OverlapPrediction> {
    let c1 = build_overlap_circuit(train1_prep, test_prep, layers)?;
    let c2 = build_overlap_circuit(train2_prep, test_prep, layers)?;
    let (p1, p2) = rayon::join(
        || estimate_overlap(&c1, shots, seed.wrapping_add(TRAIN1_SEED_OFFSET)),
        || estimate_overlap(&c2, shots, seed.wrapping_add(TRAIN2_SEED_OFFSET)),
    );
    let (p1, p2) = (p1?, p2?);
    let diff = p1.p_hat - p2.p_hat;
    let tie = diff.abs() <= OVERLAP_TIE_TOLERANCE;
    let label = if tie || diff > 0.0 {
        labels.0
    } else {
        labels.1
    };
    Ok(OverlapPrediction { label, p1, p2, tie })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerAccuracy {
    pub layers: usize,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
}

/// Per-point seed inside a sweep; independent of evaluation order.
pub fn point_seed(seed: u64, layers: usize, point: usize) -> u64 {
    seed.wrapping_add((layers as u64) << 32)
        .wrapping_add(point as u64 * 0x9E37_79B9)
}

/// Accuracy of the overlap classifier for every layer count in `range`.
pub fn layer_sweep(
    train1_prep: &Circuit,
    train2_prep: &Circuit,
    labels: (ClassLabel, ClassLabel),
    tests: &[(Circuit, ClassLabel)],
    range: RangeInclusive<usize>,
    shots: Shots,
    seed: u64,
) -> Result<Vec<LayerAccuracy>> {
    if tests.is_empty() {
        return Err(Error::Precondition(
            "layer sweep needs at least one test point".into(),
        ));
    }
    if *range.start() < 1 || *range.end() > MAX_LAYERS || range.is_empty() {
        return Err(Error::Precondition(format!(
            "layer range {}..={} must lie within 1..={MAX_LAYERS}",
            range.start(),
            range.end()
        )));
    }
    range
        .into_par_iter()
        .map(|layers| {
            let outcomes = tests
                .par_iter()
                .enumerate()
                .map(|(i, (prep, truth))| {
                    classify_innerprod(
                        train1_prep,
                        train2_prep,
                        labels,
                        prep,
                        layers,
                        shots,
                        point_seed(seed, layers, i),
                    )
                    .map(|p| p.label == *truth)
                })
                .collect::<Result<Vec<bool>>>()?;
            let correct = outcomes.iter().filter(|&&ok| ok).count();
            Ok(LayerAccuracy {
                layers,
                correct,
                total: tests.len(),
                accuracy: correct as f64 / tests.len() as f64,
            })
        })
        .collect()
}
