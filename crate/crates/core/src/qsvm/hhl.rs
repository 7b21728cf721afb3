use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fmatrix::{f_evolution_gate, FMatrix};
use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateKind, GateOp, Pattern};

/// Phase-estimation inversion parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhlConfig {
    pub clock_qubits: usize,
    pub t0: f64,
    pub rotation_constant: f64,
    pub post_select: bool,
}

impl HhlConfig {
    pub const DEFAULT_CLOCK_QUBITS: usize = 2;
    pub const DEFAULT_T0: f64 = PI / 2.0;

    /// Two clock qubits, `t0 = π/2`, `C = λ_min`, post-selection on.
    pub fn for_matrix(f: &FMatrix) -> Self {
        HhlConfig {
            clock_qubits: Self::DEFAULT_CLOCK_QUBITS,
            t0: Self::DEFAULT_T0,
            rotation_constant: f.lambda_min(),
            post_select: true,
        }
    }

    pub fn with_post_select(mut self, on: bool) -> Self {
        self.post_select = on;
        self
    }

    fn clock_states(&self) -> usize {
        1 << self.clock_qubits
    }

    /// Eigenvalue assigned to clock value `j`: `2πj / (2^m·t0)`.
    pub fn clock_eigenvalue(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / (self.clock_states() as f64 * self.t0)
    }

    /// Fractional phase `λ·t0/2π` scaled to clock units.
    pub fn clock_position(&self, lambda: f64) -> f64 {
        lambda * self.t0 / (2.0 * PI) * self.clock_states() as f64
    }

    /// True when both eigenphases land exactly on clock values.
    pub fn is_exact_for(&self, f: &FMatrix) -> bool {
        let (p, m) = f.eigenvalues();
        [p, m].iter().all(|&l| {
            let x = self.clock_position(l);
            (x - x.round()).abs() < 1e-9
        })
    }

    pub fn validate(&self, f: &FMatrix) -> Result<()> {
        if self.clock_qubits == 0 {
            return Err(Error::Configuration(
                "at least one clock qubit is required".into(),
            ));
        }
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return Err(Error::Configuration(format!(
                "t0 must be positive, got {}",
                self.t0
            )));
        }
        let (lp, lm) = f.eigenvalues();
        for l in [lp, lm] {
            let phase = l * self.t0 / (2.0 * PI);
            if !(0.0..1.0).contains(&phase) {
                return Err(Error::Configuration(format!(
                    "eigenphase λ·t0/2π = {phase} of λ = {l} lies outside [0, 1)"
                )));
            }
        }
        let c = self.rotation_constant;
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidRotation(format!(
                "C must be positive, got {c}"
            )));
        }
        if c > f.lambda_min() + 1e-12 {
            return Err(Error::InvalidRotation(format!(
                "C = {c} exceeds λ_min = {}",
                f.lambda_min()
            )));
        }
        Ok(())
    }
}

/// Where the HHL registers sit inside a larger circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhlLayout {
    pub input: usize,
    /// Clock qubit `k` carries bit `k` of the clock value.
    pub clock: Vec<usize>,
    pub ancilla: usize,
}

impl HhlLayout {
    /// Input on q0, clock on q1..=qm, ancilla on q(m+1).
    pub fn standalone(clock_qubits: usize) -> Self {
        HhlLayout {
            input: 0,
            clock: (1..=clock_qubits).collect(),
            ancilla: clock_qubits + 1,
        }
    }

    pub fn width(&self) -> usize {
        self.clock.len() + 2
    }

    /// Clock all-zeros and ancilla = 1.
    pub fn success_pattern(&self, n_qubits: usize) -> Result<Pattern> {
        let mut pins: Vec<(usize, bool)> = self.clock.iter().map(|&q| (q, false)).collect();
        pins.push((self.ancilla, true));
        Pattern::from_constraints(n_qubits, &pins)
    }
}

fn swap(a: usize, b: usize) -> [GateOp; 3] {
    [
        GateOp::x(b).ctrl(a),
        GateOp::x(a).ctrl(b),
        GateOp::x(b).ctrl(a),
    ]
}

/// `QFT|x⟩ = 2^{-m/2} Σ_k e^{2πi·xk/2^m}|k⟩` on `qubits` (least significant first).
pub fn qft(n_qubits: usize, qubits: &[usize]) -> Result<Circuit> {
    let m = qubits.len();
    let mut c = Circuit::new(n_qubits)?;
    for j in (0..m).rev() {
        c.push(GateOp::h(qubits[j]))?;
        for k in (0..j).rev() {
            let angle = PI / (1u64 << (j - k)) as f64;
            c.push(GateOp::new(GateKind::Phase(angle), qubits[j]).ctrl(qubits[k]))?;
        }
    }
    for j in 0..m / 2 {
        for g in swap(qubits[j], qubits[m - 1 - j]) {
            c.push(g)?;
        }
    }
    Ok(c)
}

/// The three stages of the inversion block.
#[derive(Clone, Debug, PartialEq)]
pub struct HhlStages {
    /// Hadamards, controlled powers of `e^{iF·t0}`, inverse QFT.
    pub estimate: Circuit,
    /// Clock-value-controlled `RY(2·asin(C/λ_j))` on the ancilla.
    pub rotate: Circuit,
    /// Adjoint of `estimate`.
    pub uncompute: Circuit,
}

impl HhlStages {
    pub fn full(&self) -> Result<Circuit> {
        let mut c = self.estimate.clone();
        c.append(&self.rotate)?;
        c.append(&self.uncompute)?;
        Ok(c)
    }
}

pub fn hhl_stages(
    f: &FMatrix,
    cfg: &HhlConfig,
    layout: &HhlLayout,
    n_qubits: usize,
) -> Result<HhlStages> {
    cfg.validate(f)?;
    if layout.clock.len() != cfg.clock_qubits {
        return Err(Error::Shape(format!(
            "layout has {} clock qubits, config asks for {}",
            layout.clock.len(),
            cfg.clock_qubits
        )));
    }
    let mut estimate = Circuit::new(n_qubits)?;
    for &q in &layout.clock {
        estimate.push(GateOp::h(q))?;
    }
    for (k, &q) in layout.clock.iter().enumerate() {
        let t = cfg.t0 * (1u64 << k) as f64;
        for g in f_evolution_gate(f, t, layout.input) {
            estimate.push(g.ctrl(q))?;
        }
    }
    estimate.append(&qft(n_qubits, &layout.clock)?.adjoint())?;

    let mut rotate = Circuit::new(n_qubits)?;
    for j in 1..(1usize << cfg.clock_qubits) {
        let ratio = (cfg.rotation_constant / cfg.clock_eigenvalue(j)).min(1.0);
        let mut g = GateOp::ry(2.0 * ratio.asin(), layout.ancilla);
        for (k, &q) in layout.clock.iter().enumerate() {
            g = if j >> k & 1 == 1 {
                g.ctrl(q)
            } else {
                g.anti_ctrl(q)
            };
        }
        rotate.push(g)?;
    }

    let uncompute = estimate.adjoint();
    Ok(HhlStages {
        estimate,
        rotate,
        uncompute,
    })
}

/// Inversion block embedded at `layout` in an `n_qubits` register.
pub fn hhl_ops(
    f: &FMatrix,
    cfg: &HhlConfig,
    layout: &HhlLayout,
    n_qubits: usize,
) -> Result<Circuit> {
    hhl_stages(f, cfg, layout, n_qubits)?.full()
}

/// Standalone inversion circuit on `m + 2` qubits (see [`HhlLayout::standalone`]).
pub fn hhl_subcircuit(f: &FMatrix, cfg: &HhlConfig) -> Result<Circuit> {
    let layout = HhlLayout::standalone(cfg.clock_qubits);
    hhl_ops(f, cfg, &layout, layout.width())
}
