//! Unit-testing and debugging tools built on the simulator: classical and
//! statevector testers, inverse-composition equivalence, the swap test,
//! phase-error localization, shot planning, diagonal tomography probes and
//! bug injection.

mod equivalence;
mod mutate;
mod phase;
mod report;
mod shots;
mod swap;
mod testers;
mod vectors;

pub use equivalence::{equivalence_test, equivalence_test_against, EquivalenceMode, EquivalenceResult};
pub use mutate::{inject_bug, is_silent_mutation, random_mutation, Mutation, INJECTED_ORIGIN};
pub use phase::{localize_phase_error, LocalizeOptions, PairProbe, PhaseLocalizationReport, ProbeMode, QubitProbe};
pub use report::{CaseResult, CaseStatus, TestReport};
pub use shots::{
    estimate_shots, qpt_config_count, sqpt_compare, sqpt_diag_probe, ProbeDeviation, ShotPlan,
    SqptProbeResult,
};
pub use swap::{
    delta_theta_from_s, stable_delta_theta, swap_test, swap_test_circuit, swap_test_exact,
    swap_test_states, SwapTestResult, DEFAULT_SWAP_SHOTS,
};
pub use testers::{f_quant_tester, p_class_tester, run_tests, TestConfig, TestMode};
pub use vectors::{
    load_vectors, render_bits, vectors_to_json, Amplitude, CaseData, TestCase, VectorError,
    NORM_WARN_THRESHOLD,
};

use crate::ir::{Circuit, GateKind, IrError};
use crate::sim::SimError;

/// Default confidence multiplier for shot-based pass/fail decisions.
pub const DEFAULT_Z: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TestkitError {
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error("circuits act on {left} and {right} qubits")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{which} is categorized {verdict}, expected PM (override the check to proceed)")]
    NotPhaseModulation { which: &'static str, verdict: String },
    #[error("invalid mutation: {0}")]
    InvalidMutation(String),
}

/// Per-case seed derived from a base seed and the case position.
pub fn case_seed(base: u64, index: usize) -> u64 {
    base ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Drops terminal measurements so the circuit can be simulated exactly.
/// Fails if a gate acts on a qubit after it was measured.
pub fn strip_measurements(circuit: &Circuit) -> Result<Circuit, TestkitError> {
    if !circuit.has_measure() {
        return Ok(circuit.clone());
    }
    let mut measured = vec![false; circuit.num_qubits()];
    for op in circuit.ops() {
        if op.kind == GateKind::Measure {
            measured[op.qubits[0].flat] = true;
        } else if !op.kind.is_barrier() {
            if let Some(q) = op.flat_qubits().find(|&q| measured[q]) {
                return Err(SimError::MidCircuitMeasure(q).into());
            }
        }
    }
    Ok(circuit.with_ops(
        circuit
            .ops()
            .iter()
            .filter(|op| op.kind != GateKind::Measure)
            .cloned(),
    )?)
}

fn check_same_width(a: &Circuit, b: &Circuit) -> Result<(), TestkitError> {
    if a.num_qubits() != b.num_qubits() {
        return Err(TestkitError::QubitCountMismatch {
            left: a.num_qubits(),
            right: b.num_qubits(),
        });
    }
    Ok(())
}
