use serde::{Deserialize, Serialize};

use super::report::{CaseResult, CaseStatus, TestReport};
use super::swap::swap_test_states;
use super::vectors::{render_bits, CaseData, TestCase};
use super::{case_seed, strip_measurements, TestkitError, DEFAULT_Z};
use crate::ir::Circuit;
use crate::sim::{fidelity, index_to_bits, render_amplitudes, run, sample_indices, StateVector};

/// Basis-state probability slack when deciding whether an output is
/// classical.
const BASIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestMode {
    /// Bit-list cases on amplitude-permutation blocks.
    Pclass,
    /// Statevector cases compared by fidelity.
    Fquant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestConfig {
    pub mode: TestMode,
    /// Fidelity slack for statevector mode.
    pub epsilon: f64,
    /// `None` simulates exactly.
    pub shots: Option<u64>,
    pub seed: u64,
    pub z: f64,
}

impl TestConfig {
    pub fn new(mode: TestMode) -> Self {
        Self {
            mode,
            epsilon: 1e-4,
            shots: None,
            seed: 0,
            z: DEFAULT_Z,
        }
    }
}

/// Runs each bit-list case exactly once on the prepared basis state and
/// compares the resulting bits.
pub fn p_class_tester(circuit: &Circuit, cases: &[TestCase]) -> Result<TestReport, TestkitError> {
    run_tests(circuit, cases, &TestConfig::new(TestMode::Pclass))
}

/// Compares each output statevector with the expected one by fidelity.
pub fn f_quant_tester(
    circuit: &Circuit,
    cases: &[TestCase],
    epsilon: f64,
) -> Result<TestReport, TestkitError> {
    let config = TestConfig {
        epsilon,
        ..TestConfig::new(TestMode::Fquant)
    };
    run_tests(circuit, cases, &config)
}

/// Shared driver. In shot mode, classical cases pass only if every shot
/// reads the expected bits; statevector cases use a sampled swap test whose
/// estimate must reach `1 − ε` within `z` standard errors.
pub fn run_tests(
    circuit: &Circuit,
    cases: &[TestCase],
    config: &TestConfig,
) -> Result<TestReport, TestkitError> {
    if config.shots == Some(0) {
        return Err(TestkitError::InvalidArgument("shots must be at least 1".into()));
    }
    if config.epsilon.is_nan() || config.epsilon < 0.0 {
        return Err(TestkitError::InvalidArgument("tolerance must be non-negative".into()));
    }
    let circuit = strip_measurements(circuit)?;
    let results = cases
        .iter()
        .enumerate()
        .map(|(i, case)| {
            let seed = case_seed(config.seed, i);
            let outcome = match config.mode {
                TestMode::Pclass => pclass_case(&circuit, case, config.shots, seed),
                TestMode::Fquant => fquant_case(&circuit, case, config, seed),
            };
            outcome.unwrap_or_else(|message| CaseResult {
                name: case.name.clone(),
                status: CaseStatus::Error,
                input: case.input.render(),
                output: "-".into(),
                expected_output: case.expected_output.render(),
                fidelity: None,
                message: Some(message),
            })
        })
        .collect();
    let mut report = TestReport::new(
        match config.mode {
            TestMode::Pclass => "pclass",
            TestMode::Fquant => "fquant",
        },
        results,
    );
    report.shots = config.shots;
    report.seed = config.shots.map(|_| config.seed);
    Ok(report)
}

fn case_bits<'a>(data: &'a CaseData, n: usize, what: &str) -> Result<&'a [u8], String> {
    match data.bits() {
        Some(bits) if bits.len() == n => Ok(bits),
        Some(bits) => Err(format!("{what} has {} bits, circuit has {n} qubits", bits.len())),
        None => Err(format!("{what} must be a bit list in pclass mode")),
    }
}

fn pclass_case(
    circuit: &Circuit,
    case: &TestCase,
    shots: Option<u64>,
    seed: u64,
) -> Result<CaseResult, String> {
    let n = circuit.num_qubits();
    let input = case_bits(&case.input, n, "input")?;
    let expected = case_bits(&case.expected_output, n, "expected output")?;
    let start = StateVector::from_bits(input).map_err(|e| e.to_string())?;
    let out = run(circuit, &start).map_err(|e| e.to_string())?;
    let mut result = CaseResult {
        name: case.name.clone(),
        status: CaseStatus::Pass,
        input: render_bits(input),
        output: render_amplitudes(out.amplitudes(), n),
        expected_output: render_bits(expected),
        fidelity: None,
        message: None,
    };
    let Some(index) = out.as_basis_state(BASIS_TOLERANCE) else {
        result.status = CaseStatus::Error;
        result.message = Some("block is not amplitude-permutation on this input".into());
        return Ok(result);
    };
    let bits = index_to_bits(index, n);
    result.output = render_bits(&bits);
    let agrees = match shots {
        None => bits == expected,
        Some(shots) => {
            let hist = sample_indices(&out, shots, seed).map_err(|e| e.to_string())?;
            let expected_index = crate::sim::bits_to_index(expected).map_err(|e| e.to_string())?;
            hist.keys().all(|&k| k == expected_index)
        }
    };
    if !agrees {
        result.status = CaseStatus::Fail;
    }
    Ok(result)
}

fn fquant_case(
    circuit: &Circuit,
    case: &TestCase,
    config: &TestConfig,
    seed: u64,
) -> Result<CaseResult, String> {
    let n = circuit.num_qubits();
    let input = case.input.to_state(Some(n)).map_err(|e| e.to_string())?;
    let expected = case.expected_output.to_state(Some(n)).map_err(|e| e.to_string())?;
    for (what, state) in [("input", &input), ("expected output", &expected)] {
        if state.num_qubits() != n {
            return Err(format!(
                "{what} has dimension {}, circuit needs {}",
                state.dim(),
                1usize << n
            ));
        }
    }
    let out = run(circuit, &input).map_err(|e| e.to_string())?;
    let exact = fidelity(&out, &expected).map_err(|e| e.to_string())?;
    let (estimate, pass) = match config.shots {
        None => (exact, exact >= 1.0 - config.epsilon),
        Some(shots) => {
            let r = swap_test_states(&out, &expected, Some(shots), seed)
                .map_err(|e| e.to_string())?;
            (r.s, r.s + config.z * r.stderr >= 1.0 - config.epsilon)
        }
    };
    Ok(CaseResult {
        name: case.name.clone(),
        status: if pass { CaseStatus::Pass } else { CaseStatus::Fail },
        input: render_amplitudes(input.amplitudes(), n),
        output: render_amplitudes(out.amplitudes(), n),
        expected_output: render_amplitudes(expected.amplitudes(), n),
        fidelity: Some(estimate),
        message: None,
    })
}
