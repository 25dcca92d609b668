use serde::{Deserialize, Serialize};

use super::{check_same_width, strip_measurements, TestkitError, DEFAULT_Z};
use crate::ir::Circuit;
use crate::sim::{run_zero, sample_indices};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EquivalenceMode {
    Exact,
    /// Pass when `p̂ + z·σ(p̂) ≥ 1 − ε`.
    Shots { shots: u64, seed: u64, z: f64 },
}

impl EquivalenceMode {
    pub fn shots(shots: u64, seed: u64) -> Self {
        EquivalenceMode::Shots {
            shots,
            seed,
            z: DEFAULT_Z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceResult {
    pub p_all_zero: f64,
    pub pass: bool,
    pub mode: EquivalenceMode,
    pub epsilon: f64,
    /// Binomial σ of the estimate; 0 in exact mode.
    pub sigma: f64,
}

/// Runs `tv`, then `dut`, then the inverse of `eo` on `|0…0⟩` and reports the
/// probability of reading all zeros. `eo` must prepare the expected output
/// of `dut` on the test vector from `|0…0⟩`.
pub fn equivalence_test(
    dut: &Circuit,
    tv: &Circuit,
    eo: &Circuit,
    mode: EquivalenceMode,
    epsilon: f64,
) -> Result<EquivalenceResult, TestkitError> {
    check_same_width(tv, dut)?;
    check_same_width(dut, eo)?;
    if eo.has_measure() {
        return Err(TestkitError::InvalidArgument(
            "expected-output circuit must be measurement-free".into(),
        ));
    }
    let composed = strip_measurements(tv)?
        .compose(&strip_measurements(dut)?)?
        .compose(&eo.inverse()?)?;
    let out = run_zero(&composed)?;
    let exact = out.amplitudes()[0].norm_sqr().min(1.0);
    let (p_all_zero, sigma, pass) = match mode {
        EquivalenceMode::Exact => (exact, 0.0, exact >= 1.0 - epsilon),
        EquivalenceMode::Shots { shots, seed, z } => {
            if shots < 1 {
                return Err(TestkitError::InvalidArgument("shots must be at least 1".into()));
            }
            let hist = sample_indices(&out, shots, seed)?;
            let p = hist.get(&0).copied().unwrap_or(0) as f64 / shots as f64;
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            (p, sigma, p + z * sigma >= 1.0 - epsilon)
        }
    };
    Ok(EquivalenceResult {
        p_all_zero,
        pass,
        mode,
        epsilon,
        sigma,
    })
}

/// Equivalence test against a reference implementation: the expected-output
/// circuit is `tv` followed by `reference`.
pub fn equivalence_test_against(
    dut: &Circuit,
    reference: &Circuit,
    tv: &Circuit,
    mode: EquivalenceMode,
    epsilon: f64,
) -> Result<EquivalenceResult, TestkitError> {
    let eo = strip_measurements(tv)?.compose(&strip_measurements(reference)?)?;
    equivalence_test(dut, tv, &eo, mode, epsilon)
}
