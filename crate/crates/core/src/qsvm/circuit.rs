use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::hhl::{hhl_stages, HhlConfig, HhlLayout};
use super::svm::TrainedModel;
use crate::encoding::{angle2, encode, ClassLabel, FeatureVector, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::statevector::{
    pattern_probability, postselect, sample_counts, Circuit, ControlQubit, GateOp, Pattern,
    Polarity, QuantumState,
};

/// Below this HHL success probability an exact-mode run is rejected.
pub const MIN_POSTSELECT_SUCCESS: f64 = 1e-6;

/// Exact probabilities or a finite number of samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shots {
    #[default]
    Exact,
    Count(u64),
}

/// Qubit roles inside the QSVM register.
///
/// The clock register doubles as the data register once the inversion
/// block has uncomputed it, so the data qubits are the low clock qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QsvmLayout {
    pub index: usize,
    pub clock: Vec<usize>,
    pub data: Vec<usize>,
    pub hhl_ancilla: usize,
    pub readout: usize,
}

impl QsvmLayout {
    pub fn new(clock_qubits: usize, data_qubits: usize) -> Result<Self> {
        if data_qubits == 0 || data_qubits > clock_qubits {
            return Err(Error::Shape(format!(
                "{data_qubits} data qubits do not fit in a {clock_qubits}-qubit clock register"
            )));
        }
        let clock: Vec<usize> = (1..=clock_qubits).collect();
        Ok(QsvmLayout {
            index: 0,
            data: clock[..data_qubits].to_vec(),
            hhl_ancilla: clock_qubits + 1,
            readout: clock_qubits + 2,
            clock,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.clock.len() + 3
    }

    fn hhl(&self) -> HhlLayout {
        HhlLayout {
            input: self.index,
            clock: self.clock.clone(),
            ancilla: self.hhl_ancilla,
        }
    }

    /// Index and clock/data registers all zero, readout fixed to `bit`.
    pub fn readout_pattern(&self, bit: bool) -> Result<Pattern> {
        let mut pins: Vec<(usize, bool)> = vec![(self.index, false), (self.readout, bit)];
        pins.extend(self.clock.iter().map(|&q| (q, false)));
        Pattern::from_constraints(self.n_qubits(), &pins)
    }

    /// Clock all-zeros and HHL ancilla = 1.
    pub fn success_pattern(&self) -> Result<Pattern> {
        self.hhl().success_pattern(self.n_qubits())
    }
}

/// The composed circuit, split where post-selection is applied.
#[derive(Clone, Debug, PartialEq)]
pub struct QsvmCircuit {
    pub circuit: Circuit,
    /// Gates before this index prepare `|0, y⟩` and run the inversion.
    pub postselect_at: usize,
    pub layout: QsvmLayout,
}

impl QsvmCircuit {
    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    pub fn stages(&self) -> (Circuit, Circuit) {
        self.circuit.split_at(self.postselect_at)
    }
}

fn on(qubit: usize) -> ControlQubit {
    ControlQubit {
        qubit,
        polarity: Polarity::Control,
    }
}

fn off(qubit: usize) -> ControlQubit {
    ControlQubit {
        qubit,
        polarity: Polarity::AntiControl,
    }
}

/// Hadamard test around inversion, training oracle and query.
///
/// Readout ancilla `A` in `|+⟩`. The `A = 0` branch keeps the reference
/// `|0…0⟩` (with the HHL ancilla flipped so it survives post-selection).
/// The `A = 1` branch runs `|0, y⟩ → HHL → Σᵢ αᵢ|i⟩|xᵢ⟩ → H_index ⊗ U_test†`.
/// A final `H` on `A` interferes the two, so
/// `P(A=0, rest 0) − P(A=1, rest 0) ∝ Σᵢ αᵢ·κ(xᵢ, x₀)`.
pub fn qsvm_circuit(
    model: &TrainedModel,
    test_prep: &Circuit,
    hhl: &HhlConfig,
) -> Result<QsvmCircuit> {
    let d = model.data_qubits();
    if test_prep.n_qubits() != d || model.train2_circuit.n_qubits() != d {
        return Err(Error::Shape(format!(
            "test preparation acts on {} qubits, training data on {d}",
            test_prep.n_qubits()
        )));
    }
    let layout = QsvmLayout::new(hhl.clock_qubits, d)?;
    let n = layout.n_qubits();
    let a = layout.readout;

    let mut c = Circuit::new(n)?;
    c.push(GateOp::h(a))?;
    c.push(GateOp::x(layout.hhl_ancilla).anti_ctrl(a))?;
    c.push(GateOp::ry(angle2(model.y[0], model.y[1])?, layout.index).ctrl(a))?;
    let inversion = hhl_stages(&model.f, hhl, &layout.hhl(), n)?.full()?;
    c.append(&inversion.controlled(on(a))?)?;
    let postselect_at = c.len();

    let t1 = model
        .train1_circuit
        .embed(n, &layout.data)?
        .controlled(off(layout.index))?;
    let t2 = model
        .train2_circuit
        .embed(n, &layout.data)?
        .controlled(on(layout.index))?;
    c.append(&t1.controlled(on(a))?)?;
    c.append(&t2.controlled(on(a))?)?;

    c.push(GateOp::h(layout.index).ctrl(a))?;
    let query = test_prep.adjoint().embed(n, &layout.data)?;
    c.append(&query.controlled(on(a))?)?;
    c.push(GateOp::h(a))?;

    Ok(QsvmCircuit {
        circuit: c,
        postselect_at,
        layout,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsvmDiagnostics {
    /// Probability that the inversion heralds success (clock 0, ancilla 1).
    pub postselect_success: f64,
    /// Whether both eigenphases are exactly representable on the clock.
    pub hhl_exact: bool,
    /// Readout weights `P(A=0, rest 0)` and `P(A=1, rest 0)` (exact or frequencies).
    pub readout0: f64,
    pub readout1: f64,
    /// Samples that survived post-selection, in shot mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_shots: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsvmPrediction {
    pub label: ClassLabel,
    pub score: f64,
    pub tie: bool,
    pub diagnostics: QsvmDiagnostics,
}

fn readout_score(p0: f64, p1: f64) -> f64 {
    let total = p0 + p1;
    if total <= 0.0 {
        0.0
    } else {
        (p0 - p1) / total
    }
}

pub fn classify_qsvm(
    model: &TrainedModel,
    test: &FeatureVector,
    hhl: &HhlConfig,
    shots: Shots,
    seed: u64,
) -> Result<QsvmPrediction> {
    if (test.norm() - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Precondition(format!(
            "test vector must be unit norm (‖v‖ = {})",
            test.norm()
        )));
    }
    let qc = qsvm_circuit(model, &encode(test)?, hhl)?;
    let layout = &qc.layout;
    let n = qc.n_qubits();
    let (head, tail) = qc.stages();

    let mid = QuantumState::new(n)?.apply_circuit(&head)?;
    let success = layout.success_pattern()?;
    let a1 = Pattern::from_constraints(n, &[(layout.readout, true)])?;
    let branch = pattern_probability(&mid, &a1)?;
    let hit = pattern_probability(&mid, &success.and(&a1)?)?;
    let postselect_success = if branch > 0.0 { hit / branch } else { 0.0 };

    let (mid, keep_prob) = if hhl.post_select {
        if shots == Shots::Exact && postselect_success < MIN_POSTSELECT_SUCCESS {
            return Err(Error::StarvedPostSelection(postselect_success));
        }
        postselect(&mid, &success)?
    } else {
        (mid, 1.0)
    };
    let out = mid.apply_circuit(&tail)?;
    let pat0 = layout.readout_pattern(false)?;
    let pat1 = layout.readout_pattern(true)?;

    let (readout0, readout1, kept_shots) = match shots {
        Shots::Exact => (
            pattern_probability(&out, &pat0)?,
            pattern_probability(&out, &pat1)?,
            None,
        ),
        Shots::Count(total) => {
            if total == 0 {
                return Err(Error::Precondition("shots must be at least 1".into()));
            }
            let kept = if hhl.post_select {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Binomial::new(total, keep_prob.clamp(0.0, 1.0))
                    .map_err(|e| Error::Precondition(e.to_string()))?
                    .sample(&mut rng)
            } else {
                total
            };
            if kept == 0 {
                (0.0, 0.0, Some(0))
            } else {
                let counts = sample_counts(&out, kept, seed.wrapping_add(0x5EED))?;
                let f = |p: &Pattern| counts.count_matching(p) as f64 / kept as f64;
                (f(&pat0), f(&pat1), Some(kept))
            }
        }
    };

    let score = readout_score(readout0, readout1);
    let (label, tie) = model.label_for(score);
    Ok(QsvmPrediction {
        label,
        score,
        tie,
        diagnostics: QsvmDiagnostics {
            postselect_success,
            hhl_exact: hhl.is_exact_for(&model.f),
            readout0,
            readout1,
            kept_shots,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsvm::svm::{classify_analytic, solve_ls_svm};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit(a: f64) -> FeatureVector {
        FeatureVector::new(vec![a.cos(), a.sin()])
    }

    fn six_nine_model() -> TrainedModel {
        let a = 0.159f64.atan2(0.987);
        TrainedModel::new(unit(a), unit(a + PI / 3.0), (0, 1), 2.0).unwrap()
    }

    #[test]
    fn five_qubits_for_both_encoders() {
        let m = six_nine_model();
        let cfg = HhlConfig::for_matrix(&m.f);
        let qc = qsvm_circuit(&m, &m.train1_circuit, &cfg).unwrap();
        assert_eq!(qc.n_qubits(), 5);

        let v1 = FeatureVector::new(vec![0.5, 0.5, 0.5, 0.5]);
        let v2 = FeatureVector::new(vec![0.8, 0.0, 0.6, 0.0]);
        let m4 = TrainedModel::new(v1, v2, (0, 1), 2.0).unwrap();
        let cfg = HhlConfig::for_matrix(&m4.f);
        assert_eq!(
            qsvm_circuit(&m4, &m4.train2_circuit, &cfg)
                .unwrap()
                .n_qubits(),
            5
        );
    }

    #[test]
    fn register_mismatch() {
        let m = six_nine_model();
        let cfg = HhlConfig::for_matrix(&m.f);
        let wrong = Circuit::new(2).unwrap();
        assert!(matches!(
            qsvm_circuit(&m, &wrong, &cfg),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn training_points_classify_to_their_class() {
        let m = six_nine_model();
        let cfg = HhlConfig::for_matrix(&m.f);
        let p = classify_qsvm(&m, &m.train1_vector, &cfg, Shots::Exact, 1).unwrap();
        assert!(p.score > 0.0 && p.label == 0);
        assert!((p.diagnostics.postselect_success - 1.0).abs() < 1e-10);
        assert!(p.diagnostics.hhl_exact);
        let p = classify_qsvm(&m, &m.train2_vector, &cfg, Shots::Exact, 1).unwrap();
        assert!(p.score < 0.0 && p.label == 1);
    }

    #[test]
    fn orthogonal_trainings_match_analytic() {
        let m = TrainedModel::new(unit(0.3), unit(0.3 + PI / 2.0), (1, 0), 1.0).unwrap();
        let cfg = HhlConfig::for_matrix(&m.f);
        let sol = solve_ls_svm(&m.f, m.y).unwrap();
        for k in 0..12 {
            let t = unit(0.1 + k as f64 * PI / 6.0);
            let q = classify_qsvm(&m, &t, &cfg, Shots::Exact, 0).unwrap();
            let a = classify_analytic(&sol, &m, &t).unwrap();
            assert_eq!(q.label, a.label, "angle index {k}");
        }
    }

    #[test]
    fn shot_mode_is_seeded() {
        let m = six_nine_model();
        let cfg = HhlConfig::for_matrix(&m.f);
        let t = unit(0.5);
        let a = classify_qsvm(&m, &t, &cfg, Shots::Count(8192), 42).unwrap();
        let b = classify_qsvm(&m, &t, &cfg, Shots::Count(8192), 42).unwrap();
        assert_eq!(a, b);
        let exact = classify_qsvm(&m, &t, &cfg, Shots::Exact, 42).unwrap();
        assert_eq!(a.label, exact.label);
        assert!((a.score - exact.score).abs() < 0.1);
    }

    #[test]
    fn starved_postselection_is_an_error() {
        let m = six_nine_model();
        let mut cfg = HhlConfig::for_matrix(&m.f);
        cfg.rotation_constant = 1e-4;
        assert!(matches!(
            classify_qsvm(&m, &unit(0.2), &cfg, Shots::Exact, 0),
            Err(Error::StarvedPostSelection(_))
        ));
        // Sampling still runs and reports what it kept.
        let p = classify_qsvm(&m, &unit(0.2), &cfg, Shots::Count(1000), 0).unwrap();
        assert!(p.diagnostics.kept_shots.is_some());
    }

    #[test]
    fn rejects_non_unit_test() {
        let m = six_nine_model();
        let cfg = HhlConfig::for_matrix(&m.f);
        let r = classify_qsvm(
            &m,
            &FeatureVector::new(vec![1.0, 1.0]),
            &cfg,
            Shots::Exact,
            0,
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    fn unit4() -> impl Strategy<Value = FeatureVector> {
        prop::collection::vec(-1.0f64..1.0, 4)
            .prop_filter("non-degenerate", |v| {
                v.iter().map(|x| x * x).sum::<f64>() > 1e-3
            })
            .prop_map(|v| {
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                FeatureVector::new(v.into_iter().map(|x| x / n).collect())
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn agrees_with_analytic_2d(a1 in -PI..PI, a2 in -PI..PI, t in -PI..PI, gamma in 0.8f64..10.0) {
            let x1 = unit(a1);
            let x2 = unit(a2);
            prop_assume!(x1.dot(&x2).unwrap().abs() < 0.95);
            let m = TrainedModel::new(x1, x2, (0, 1), gamma).unwrap();
            let cfg = HhlConfig::for_matrix(&m.f);
            prop_assume!(cfg.validate(&m.f).is_ok());
            let sol = solve_ls_svm(&m.f, m.y).unwrap();
            let an = classify_analytic(&sol, &m, &unit(t)).unwrap();
            prop_assume!(an.score.abs() > 1e-6);
            let q = classify_qsvm(&m, &unit(t), &cfg, Shots::Exact, 0).unwrap();
            prop_assert_eq!(q.label, an.label);
        }

        #[test]
        fn agrees_with_analytic_4d(x1 in unit4(), x2 in unit4(), t in unit4()) {
            prop_assume!(x1.dot(&x2).unwrap().abs() < 0.95);
            let m = TrainedModel::new(x1, x2, (1, 0), 2.0).unwrap();
            let cfg = HhlConfig::for_matrix(&m.f);
            let sol = solve_ls_svm(&m.f, m.y).unwrap();
            let an = classify_analytic(&sol, &m, &t).unwrap();
            prop_assume!(an.score.abs() > 1e-6);
            let q = classify_qsvm(&m, &t, &cfg, Shots::Exact, 0).unwrap();
            prop_assert_eq!(q.label, an.label);
        }
    }
}
