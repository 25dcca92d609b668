use serde::{Deserialize, Serialize};

use super::{check_same_width, TestkitError};
use crate::ir::Circuit;
use crate::sim::{run_zero, sample, sample_bernoulli, StateVector};

/// Shot count used when the caller does not choose one.
pub const DEFAULT_SWAP_SHOTS: u64 = 8192;

/// Outcome of a swap test between two pure states.
///
/// `s` estimates `|⟨a|b⟩|²`; `delta_theta` is the relative phase
/// `arccos(2s − 1)` in `[0, π]` (its sign is not observable).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapTestResult {
    /// 0 in exact mode.
    pub shots: u64,
    pub ones: u64,
    pub p0: f64,
    pub s: f64,
    pub delta_theta: f64,
    pub stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SwapTestResult {
    /// Builds the estimate from `ones` ancilla readings of 1 in `shots`.
    pub fn from_counts(ones: u64, shots: u64, seed: u64) -> Self {
        let n = shots as f64;
        let p1 = ones as f64 / n;
        let s = 1.0 - 2.0 * p1;
        Self {
            shots,
            ones,
            p0: 1.0 - p1,
            s,
            delta_theta: delta_theta_from_s(s),
            stderr: 2.0 * (p1 * (1.0 - p1) / n).sqrt(),
            seed: Some(seed),
        }
    }
}

/// `arccos(clamp(2s − 1, −1, 1))`.
pub fn delta_theta_from_s(s: f64) -> f64 {
    (2.0 * s - 1.0).clamp(-1.0, 1.0).acos()
}

/// `arccos(2|⟨a|b⟩|² − 1)` evaluated as `4·asin(d/2)` with
/// `d = ‖a − e^{iφ}b‖` and `e^{iφ}` the phase of `⟨b|a⟩`, which stays
/// accurate when the states nearly coincide.
pub fn stable_delta_theta(a: &StateVector, b: &StateVector) -> Result<f64, TestkitError> {
    let overlap = b.inner(a)?;
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        1.0.into()
    };
    let d = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(4.0 * (d / 2.0).clamp(-1.0, 1.0).asin())
}

/// The swap-test harness: ancilla on qubit 0, `prep_a` on qubits `1..=n`,
/// `prep_b` on `n+1..=2n`, then H, CSWAPs, H and an ancilla measurement into
/// the single classical bit.
pub fn swap_test_circuit(prep_a: &Circuit, prep_b: &Circuit) -> Result<Circuit, TestkitError> {
    check_same_width(prep_a, prep_b)?;
    let n = prep_a.num_qubits();
    let mut qc = Circuit::with_clbits(2 * n + 1, 1).with_label("swap test");
    for (prep, offset) in [(prep_a, 1), (prep_b, n + 1)] {
        let prep = super::strip_measurements(prep)?;
        for op in prep.ops().iter().filter(|op| !op.kind.is_barrier()) {
            let qubits: Vec<usize> = op.flat_qubits().map(|q| q + offset).collect();
            qc.push(op.kind, &qubits, &op.angles, op.span.clone())?;
        }
    }
    qc.h(0)?;
    for q in 1..=n {
        qc.cswap(0, q, q + n)?;
    }
    qc.h(0)?.measure(0, 0)?;
    Ok(qc)
}

/// Sampled swap test of the states prepared from `|0…0⟩` by the two circuits.
pub fn swap_test(
    prep_a: &Circuit,
    prep_b: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<SwapTestResult, TestkitError> {
    if shots < 1 {
        return Err(TestkitError::InvalidArgument("shots must be at least 1".into()));
    }
    let harness = swap_test_circuit(prep_a, prep_b)?;
    let counts = sample(&harness, shots, seed)?;
    Ok(SwapTestResult::from_counts(counts.get("1"), shots, seed))
}

/// Exact swap test: `p0` is read from the simulated harness, `delta_theta`
/// from the prepared states.
pub fn swap_test_exact(prep_a: &Circuit, prep_b: &Circuit) -> Result<SwapTestResult, TestkitError> {
    let harness = super::strip_measurements(&swap_test_circuit(prep_a, prep_b)?)?;
    let out = run_zero(&harness)?;
    let p0: f64 = out
        .amplitudes()
        .iter()
        .step_by(2)
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .clamp(0.0, 1.0);
    let a = run_zero(&super::strip_measurements(prep_a)?)?;
    let b = run_zero(&super::strip_measurements(prep_b)?)?;
    Ok(SwapTestResult {
        shots: 0,
        ones: 0,
        p0,
        s: 2.0 * p0 - 1.0,
        delta_theta: stable_delta_theta(&a, &b)?,
        stderr: 0.0,
        seed: None,
    })
}

/// Swap test on explicit states. With `shots`, ancilla outcomes are drawn
/// from the exact `P(1) = ½ − ½|⟨a|b⟩|²`; without, the exact values are
/// returned.
pub fn swap_test_states(
    a: &StateVector,
    b: &StateVector,
    shots: Option<u64>,
    seed: u64,
) -> Result<SwapTestResult, TestkitError> {
    let f = a.inner(b)?.norm_sqr().clamp(0.0, 1.0);
    let p1 = 0.5 - 0.5 * f;
    match shots {
        Some(shots) => {
            let ones = sample_bernoulli(p1, shots, seed)?;
            Ok(SwapTestResult::from_counts(ones, shots, seed))
        }
        None => Ok(SwapTestResult {
            shots: 0,
            ones: 0,
            p0: 1.0 - p1,
            s: f,
            delta_theta: stable_delta_theta(a, b)?,
            stderr: 0.0,
            seed: None,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn plus() -> Circuit {
        let mut qc = Circuit::new(1);
        qc.h(0).unwrap();
        qc
    }

    fn phased_plus(theta: f64) -> Circuit {
        let mut qc = plus();
        qc.p(theta, 0).unwrap();
        qc
    }

    #[test]
    fn identical_states() {
        let r = swap_test_exact(&plus(), &plus()).unwrap();
        assert!((r.p0 - 1.0).abs() < 1e-12);
        assert!((r.s - 1.0).abs() < 1e-12);
        assert!(r.delta_theta.abs() < 1e-12);
        let r = swap_test(&plus(), &plus(), 1000, 1).unwrap();
        assert_eq!(r.ones, 0);
    }

    #[test]
    fn orthogonal_states() {
        let mut one = Circuit::new(1);
        one.x(0).unwrap();
        let r = swap_test_exact(&Circuit::new(1), &one).unwrap();
        assert!((r.p0 - 0.5).abs() < 1e-12);
        assert!(r.s.abs() < 1e-12);
        assert!((r.delta_theta - PI).abs() < 1e-9);
    }

    #[test]
    fn relative_phase() {
        let r = swap_test_exact(&plus(), &phased_plus(PI / 3.0)).unwrap();
        assert!((r.s - 0.75).abs() < 1e-12);
        assert!((r.delta_theta - PI / 3.0).abs() < 1e-12);
        let r = swap_test(&plus(), &phased_plus(PI / 3.0), DEFAULT_SWAP_SHOTS, 0).unwrap();
        assert!((r.s - 0.75).abs() <= 3.0 * r.stderr, "{r:?}");
        assert!((r.delta_theta - PI / 3.0).abs() < 0.06);
    }

    #[test]
    fn harness_shape() {
        let qc = swap_test_circuit(&plus(), &phased_plus(1.0)).unwrap();
        assert_eq!(qc.num_qubits(), 3);
        assert_eq!(qc.num_clbits(), 1);
        assert!(swap_test_circuit(&plus(), &Circuit::new(2)).is_err());
        assert!(swap_test(&plus(), &plus(), 0, 0).is_err());
    }

    #[test]
    fn stable_formula_near_zero() {
        let a = run_zero(&plus()).unwrap();
        let b = run_zero(&phased_plus(1e-10)).unwrap();
        assert!((stable_delta_theta(&a, &b).unwrap() - 1e-10).abs() < 1e-15);
    }
}
