use serde::{Deserialize, Serialize};

use super::{strip_measurements, TestkitError};
use crate::ir::Circuit;
use crate::sim::{run_zero, sample_indices};

/// Shots needed to pin an outcome probability `p` to within `±w` at
/// confidence multiplier `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotPlan {
    pub p: f64,
    pub z: f64,
    pub w: f64,
    pub shots: u64,
}

impl ShotPlan {
    /// Binomial σ of the frequency estimate at the planned shot count.
    pub fn sigma(&self) -> f64 {
        self.sigma_at(self.shots)
    }

    pub fn sigma_at(&self, shots: u64) -> f64 {
        (self.p * (1.0 - self.p) / shots as f64).sqrt()
    }
}

/// `N = max(1, ⌈z²·p(1−p)/w²⌉)`.
pub fn estimate_shots(p: f64, z: f64, w: f64) -> Result<ShotPlan, TestkitError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TestkitError::InvalidArgument(format!("p = {p} is not a probability")));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(TestkitError::InvalidArgument(format!("z = {z} must be positive")));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(TestkitError::InvalidArgument(format!("w = {w} must be positive")));
    }
    let raw = z * z * p * (1.0 - p) / (w * w);
    // 1.96²·0.25/1e-4 evaluates a hair above 9604; don't let rounding noise
    // add a shot
    let snapped = if (raw - raw.round()).abs() <= 1e-9 * raw.max(1.0) {
        raw.round()
    } else {
        raw.ceil()
    };
    if snapped > u64::MAX as f64 {
        return Err(TestkitError::InvalidArgument("shot count overflows".into()));
    }
    Ok(ShotPlan {
        p,
        z,
        w,
        shots: (snapped as u64).max(1),
    })
}

/// Configurations for full process tomography of `n` qubits: `4^n`.
pub fn qpt_config_count(n: u32) -> Result<u64, TestkitError> {
    if n < 1 {
        return Err(TestkitError::InvalidArgument("needs at least one qubit".into()));
    }
    4u64.checked_pow(n)
        .ok_or_else(|| TestkitError::InvalidArgument(format!("4^{n} overflows")))
}

/// Shot estimates of selected density-matrix diagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqptProbeResult {
    pub probed_indices: Vec<usize>,
    pub probabilities: Vec<f64>,
    /// `|S|×|S|`, estimates on the diagonal and zeros elsewhere.
    pub diag_block: Vec<Vec<f64>>,
    pub shots: u64,
    pub seed: u64,
}

/// Samples the state prepared by `prep` from `|0…0⟩` and estimates the
/// probabilities of `indices`. Off-diagonal entries are not measured; the
/// block carries zeros there, so this is a probe, not a reconstruction.
pub fn sqpt_diag_probe(
    prep: &Circuit,
    indices: &[usize],
    shots: u64,
    seed: u64,
) -> Result<SqptProbeResult, TestkitError> {
    if shots < 1 {
        return Err(TestkitError::InvalidArgument("shots must be at least 1".into()));
    }
    let dim = 1usize << prep.num_qubits();
    for (i, &index) in indices.iter().enumerate() {
        if index >= dim {
            return Err(TestkitError::InvalidArgument(format!(
                "basis index {index} out of range for {} qubits",
                prep.num_qubits()
            )));
        }
        if indices[..i].contains(&index) {
            return Err(TestkitError::InvalidArgument(format!("basis index {index} repeated")));
        }
    }
    let state = run_zero(&strip_measurements(prep)?)?;
    let hist = sample_indices(&state, shots, seed)?;
    let probabilities: Vec<f64> = indices
        .iter()
        .map(|i| hist.get(i).copied().unwrap_or(0) as f64 / shots as f64)
        .collect();
    let diag_block = (0..indices.len())
        .map(|r| {
            (0..indices.len())
                .map(|c| if r == c { probabilities[r] } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(SqptProbeResult {
        probed_indices: indices.to_vec(),
        probabilities,
        diag_block,
        shots,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDeviation {
    pub index: usize,
    pub expected: f64,
    pub observed: f64,
    pub sigma: f64,
    pub flagged: bool,
}

/// Compares probe estimates with the exact probabilities of `reference`.
/// An entry is flagged when it sits more than `z` binomial σ (floored at
/// one count) from the expectation.
pub fn sqpt_compare(
    probe: &SqptProbeResult,
    reference: &Circuit,
    z: f64,
) -> Result<Vec<ProbeDeviation>, TestkitError> {
    let expected = run_zero(&strip_measurements(reference)?)?.probabilities();
    let n = probe.shots as f64;
    probe
        .probed_indices
        .iter()
        .zip(&probe.probabilities)
        .map(|(&index, &observed)| {
            let p = *expected.get(index).ok_or_else(|| {
                TestkitError::InvalidArgument(format!("basis index {index} out of range"))
            })?;
            let sigma = (p * (1.0 - p) / n).sqrt().max(1.0 / n);
            Ok(ProbeDeviation {
                index,
                expected: p,
                observed,
                sigma,
                flagged: (observed - p).abs() > z * sigma,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{build_subroutine, SubroutineSpec};

    #[test]
    fn planner() {
        assert_eq!(estimate_shots(0.5, 1.96, 0.01).unwrap().shots, 9604);
        assert_eq!(estimate_shots(0.5, 1.96, 0.005).unwrap().shots, 38416);
        assert_eq!(estimate_shots(0.0, 1.96, 0.01).unwrap().shots, 1);
        assert_eq!(estimate_shots(1.0, 3.0, 0.01).unwrap().shots, 1);
        assert!(estimate_shots(0.5, 1.96, 0.0).is_err());
        assert!(estimate_shots(0.5, -1.0, 0.1).is_err());
        let plan = estimate_shots(0.5, 1.0, 0.005).unwrap();
        assert_eq!(plan.shots, 10000);
        assert!((plan.sigma() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn config_count() {
        assert_eq!(qpt_config_count(1).unwrap(), 4);
        assert_eq!(qpt_config_count(3).unwrap(), 64);
        assert_eq!(qpt_config_count(10).unwrap(), 1_048_576);
        assert!(qpt_config_count(0).is_err());
        assert!(qpt_config_count(40).is_err());
    }

    #[test]
    fn ghz_probe() {
        let ghz = build_subroutine(&SubroutineSpec::Ghz(3)).unwrap();
        let r = sqpt_diag_probe(&ghz, &[0, 1], 10_000, 0).unwrap();
        assert!((r.probabilities[0] - 0.5).abs() <= 0.015);
        assert!(r.probabilities[1] <= 0.002);
        assert_eq!(r.diag_block[0][1], 0.0);
        assert!(sqpt_compare(&r, &ghz, 3.0).unwrap().iter().all(|d| !d.flagged));

        let buggy = ghz.with_ops(ghz.ops()[1..].iter().cloned()).unwrap();
        let r = sqpt_diag_probe(&buggy, &[0, 1], 10_000, 0).unwrap();
        assert_eq!(r.probabilities[0], 1.0);
        let devs = sqpt_compare(&r, &ghz, 3.0).unwrap();
        assert!(devs[0].flagged && !devs[1].flagged);
    }

    #[test]
    fn probe_errors() {
        let qc = Circuit::new(2);
        assert!(sqpt_diag_probe(&qc, &[4], 10, 0).is_err());
        assert!(sqpt_diag_probe(&qc, &[1, 1], 10, 0).is_err());
        assert!(sqpt_diag_probe(&qc, &[0], 0, 0).is_err());
        assert_eq!(sqpt_diag_probe(&qc, &[0], 10, 0).unwrap().probabilities, vec![1.0]);
    }
}
