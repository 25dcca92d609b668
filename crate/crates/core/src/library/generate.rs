use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_subroutine, LibraryError, SubroutineSpec};
use crate::sim::{run, StateVector};
use crate::testkit::{CaseData, TestCase};

pub const SIX_BASIS_NAMES: [&str; 6] = ["test 0", "test 1", "test +", "test -", "test i", "test -i"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratedTestSet {
    pub cases: Vec<TestCase>,
}

/// The uniform products `|0⟩, |1⟩, |+⟩, |−⟩, |i⟩, |−i⟩` on `n` qubits, in
/// [`SIX_BASIS_NAMES`] order.
pub fn six_basis_inputs(n: usize) -> Vec<StateVector> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let h = FRAC_1_SQRT_2;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
    ]
    .into_iter()
    .map(|single| StateVector::uniform_product(n, single))
    .collect()
}

/// Six statevector cases whose expected outputs come from running the
/// bundled reference circuit for `spec`.
pub fn generate_test_cases(spec: &SubroutineSpec) -> Result<GeneratedTestSet, LibraryError> {
    let circuit = build_subroutine(spec)?;
    let cases = six_basis_inputs(circuit.num_qubits())
        .into_iter()
        .zip(SIX_BASIS_NAMES)
        .map(|(input, name)| {
            let output = run(&circuit, &input)?;
            Ok(TestCase {
                name: name.to_string(),
                input: CaseData::from_state(&input),
                expected_output: CaseData::from_state(&output),
            })
        })
        .collect::<Result<Vec<_>, LibraryError>>()?;
    Ok(GeneratedTestSet { cases })
}
