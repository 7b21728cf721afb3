use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::QuantumState;
use crate::error::{Error, Result};

/// Outcome pattern over a full register, e.g. `"0*1"`.
///
/// The leftmost character is qubit `n-1`; `*` leaves a qubit unconstrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    n_qubits: usize,
    mask: usize,
    value: usize,
}

impl Pattern {
    /// Pattern that pins each listed `(qubit, bit)` and leaves the rest free.
    pub fn from_constraints(n_qubits: usize, constraints: &[(usize, bool)]) -> Result<Self> {
        let mut p = Pattern {
            n_qubits,
            mask: 0,
            value: 0,
        };
        for &(q, bit) in constraints {
            if q >= n_qubits {
                return Err(Error::Index { index: q, n_qubits });
            }
            let b = 1usize << q;
            if p.mask & b != 0 && (p.value & b != 0) != bit {
                return Err(Error::Parse(format!("qubit {q} pinned to both 0 and 1")));
            }
            p.mask |= b;
            if bit {
                p.value |= b;
            }
        }
        Ok(p)
    }

    /// Pattern fixing every qubit to `0`.
    pub fn all_zeros(n_qubits: usize) -> Self {
        Pattern {
            n_qubits,
            mask: (1usize << n_qubits) - 1,
            value: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matches(&self, index: usize) -> bool {
        index & self.mask == self.value
    }

    /// Conjunction of two patterns on the same register.
    pub fn and(&self, other: &Pattern) -> Result<Pattern> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Shape("patterns over different registers".into()));
        }
        let overlap = self.mask & other.mask;
        if self.value & overlap != other.value & overlap {
            return Err(Error::Parse("contradictory patterns".into()));
        }
        Ok(Pattern {
            n_qubits: self.n_qubits,
            mask: self.mask | other.mask,
            value: self.value | other.value,
        })
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 {
            return Err(Error::Parse("empty outcome pattern".into()));
        }
        let mut mask = 0;
        let mut value = 0;
        for (pos, ch) in s.chars().enumerate() {
            let bit = 1usize << (n - 1 - pos);
            match ch {
                '0' => mask |= bit,
                '1' => {
                    mask |= bit;
                    value |= bit;
                }
                '*' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "invalid character {other:?} in pattern {s:?}"
                    )))
                }
            }
        }
        Ok(Pattern {
            n_qubits: n,
            mask,
            value,
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits).rev() {
            let b = 1usize << q;
            let ch = if self.mask & b == 0 {
                '*'
            } else if self.value & b != 0 {
                '1'
            } else {
                '0'
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Renders basis index `index` as a bitstring, qubit `n-1` first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Born-rule probability that a full-register measurement matches `pattern`.
pub fn outcome_probability(state: &QuantumState, pattern: &str) -> Result<f64> {
    let p: Pattern = pattern.parse()?;
    pattern_probability(state, &p)
}

pub fn pattern_probability(state: &QuantumState, pattern: &Pattern) -> Result<f64> {
    if pattern.n_qubits != state.n_qubits() {
        return Err(Error::Parse(format!(
            "pattern has {} positions for a {}-qubit state",
            pattern.n_qubits,
            state.n_qubits()
        )));
    }
    let p: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| pattern.matches(*i))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// Conditions `state` on `pattern`, returning the renormalized state and the
/// probability of the conditioning event.
pub fn postselect(state: &QuantumState, pattern: &Pattern) -> Result<(QuantumState, f64)> {
    if pattern.n_qubits != state.n_qubits() {
        return Err(Error::Parse("post-selection pattern width mismatch".into()));
    }
    state.project(|i| pattern.matches(i))
}

/// Histogram of full-register measurement outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub shots: u64,
    pub n_qubits: usize,
    pub counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn count_matching(&self, pattern: &Pattern) -> u64 {
        self.counts
            .iter()
            .filter(|(k, _)| {
                usize::from_str_radix(k, 2)
                    .map(|i| pattern.matches(i))
                    .unwrap_or(false)
            })
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(outcome) as f64 / self.shots as f64
        }
    }
}

/// Draws `shots` terminal measurements from the exact outcome distribution.
///
/// The generator is ChaCha8 seeded from `seed` alone, so identical inputs
/// yield identical counts.
pub fn sample_counts(state: &QuantumState, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::Precondition("shots must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = vec![0u64; state.dim()];
    for _ in 0..shots {
        let r: f64 = rng.random::<f64>() * acc;
        let idx = cumulative.partition_point(|&c| c <= r).min(last_nonzero);
        hist[idx] += 1;
    }
    let n = state.n_qubits();
    let counts = hist
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(i, c)| (bitstring(i, n), c))
        .collect();
    Ok(ShotCounts {
        shots,
        n_qubits: n,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::gate::GateOp;

    fn bell() -> QuantumState {
        QuantumState::new(2)
            .unwrap()
            .apply_gate(&GateOp::h(1))
            .unwrap()
            .apply_gate(&GateOp::x(0).ctrl(1))
            .unwrap()
    }

    #[test]
    fn probability_examples() {
        let z = QuantumState::new(2).unwrap();
        assert_eq!(outcome_probability(&z, "00").unwrap(), 1.0);
        let plus = QuantumState::new(1)
            .unwrap()
            .apply_gate(&GateOp::h(0))
            .unwrap();
        assert!((outcome_probability(&plus, "0").unwrap() - 0.5).abs() < 1e-12);
        assert!((outcome_probability(&bell(), "0*").unwrap() - 0.5).abs() < 1e-12);
        assert!(outcome_probability(&bell(), "01").unwrap() < 1e-12);
    }

    #[test]
    fn malformed_patterns() {
        let z = QuantumState::new(2).unwrap();
        assert!(matches!(
            outcome_probability(&z, "0x"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            outcome_probability(&z, "000"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(outcome_probability(&z, ""), Err(Error::Parse(_))));
    }

    #[test]
    fn pattern_orientation() {
        let p: Pattern = "10".parse().unwrap();
        assert!(p.matches(0b10));
        assert!(!p.matches(0b01));
        assert_eq!(p.to_string(), "10");
        let q = Pattern::from_constraints(3, &[(0, true), (2, false)]).unwrap();
        assert_eq!(q.to_string(), "0*1");
        assert!(Pattern::from_constraints(3, &[(0, true), (0, false)]).is_err());
        assert_eq!(bitstring(0b011, 3), "011");
    }

    #[test]
    fn deterministic_state_samples() {
        let z = QuantumState::new(1).unwrap();
        let c = sample_counts(&z, 100, 12345).unwrap();
        assert_eq!(c.counts.len(), 1);
        assert_eq!(c.count("0"), 100);
    }

    #[test]
    fn same_seed_same_counts() {
        let plus = QuantumState::new(1)
            .unwrap()
            .apply_gate(&GateOp::h(0))
            .unwrap();
        let a = sample_counts(&plus, 8192, 99).unwrap();
        let b = sample_counts(&plus, 8192, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 8192);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(sample_counts(&QuantumState::new(1).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn postselect_renormalizes() {
        let (s, p) = postselect(&bell(), &"1*".parse().unwrap()).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!((s.amplitude(0b11).norm() - 1.0).abs() < 1e-12);
        assert!(matches!(
            postselect(&QuantumState::new(1).unwrap(), &"1".parse().unwrap()),
            Err(Error::StarvedPostSelection(_))
        ));
    }
}
