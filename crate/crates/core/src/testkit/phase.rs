use serde::{Deserialize, Serialize};

use super::swap::{swap_test, swap_test_states, SwapTestResult};
use super::{case_seed, check_same_width, strip_measurements, TestkitError};
use crate::analysis::{categorize, Verdict, DEFAULT_MAX_CATEGORIZE_QUBITS};
use crate::ir::Circuit;
use crate::sim::run_zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProbeMode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizeOptions {
    pub mode: ProbeMode,
    /// Require both circuits to categorize as PM.
    pub check_category: bool,
    /// Extra `(|a⟩ + |b⟩)/√2` probes given as basis-index pairs.
    pub pair_probes: Vec<(usize, usize)>,
}

impl LocalizeOptions {
    pub fn exact() -> Self {
        Self {
            mode: ProbeMode::Exact,
            check_category: true,
            pair_probes: Vec::new(),
        }
    }

    pub fn shots(shots: u64, seed: u64) -> Self {
        Self {
            mode: ProbeMode::Shots { shots, seed },
            ..Self::exact()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitProbe {
    pub qubit: usize,
    pub delta_theta: f64,
    pub result: SwapTestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProbe {
    pub a: usize,
    pub b: usize,
    pub delta_theta: f64,
    pub result: SwapTestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLocalizationReport {
    /// From the probe `(|0…0⟩ + |1…1⟩)/√2`: the summed phase error.
    pub total_delta: f64,
    pub total: SwapTestResult,
    /// From the probes `(|0…0⟩ + |e_j⟩)/√2`.
    pub per_qubit: Vec<QubitProbe>,
    pub pairs: Vec<PairProbe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots_per_probe: Option<u64>,
}

impl PhaseLocalizationReport {
    /// Qubits whose estimate exceeds `threshold`, largest first.
    pub fn suspects(&self, threshold: f64) -> Vec<usize> {
        let mut hits: Vec<&QubitProbe> = self
            .per_qubit
            .iter()
            .filter(|p| p.delta_theta > threshold)
            .collect();
        hits.sort_by(|a, b| b.delta_theta.total_cmp(&a.delta_theta));
        hits.into_iter().map(|p| p.qubit).collect()
    }
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
fn total_probe(n: usize) -> Result<Circuit, TestkitError> {
    let mut qc = Circuit::new(n).with_label("probe");
    qc.h(0)?;
    for q in 1..n {
        qc.cx(0, q)?;
    }
    Ok(qc)
}

fn qubit_probe(n: usize, j: usize) -> Result<Circuit, TestkitError> {
    let mut qc = Circuit::new(n).with_label("probe");
    qc.h(j)?;
    Ok(qc)
}

/// `(|a⟩ + |b⟩)/√2` for distinct basis indices.
fn pair_probe(n: usize, a: usize, b: usize) -> Result<Circuit, TestkitError> {
    let dim = 1usize << n;
    if a == b || a >= dim || b >= dim {
        return Err(TestkitError::InvalidArgument(format!(
            "pair probe ({a}, {b}) needs two distinct indices below {dim}"
        )));
    }
    let diff = a ^ b;
    let pivot = diff.trailing_zeros() as usize;
    let mut qc = Circuit::new(n).with_label("probe");
    qc.h(pivot)?;
    for q in (pivot + 1..n).filter(|q| (diff >> q) & 1 == 1) {
        qc.cx(pivot, q)?;
    }
    // now (|0⟩ + |diff⟩)/√2; shift onto a
    for q in (0..n).filter(|q| (a >> q) & 1 == 1) {
        qc.x(q)?;
    }
    Ok(qc)
}

fn probe(
    prep: &Circuit,
    dut: &Circuit,
    eo: &Circuit,
    mode: ProbeMode,
    index: usize,
) -> Result<SwapTestResult, TestkitError> {
    let with_dut = prep.compose(dut)?;
    let with_eo = prep.compose(eo)?;
    match mode {
        ProbeMode::Exact => {
            swap_test_states(&run_zero(&with_dut)?, &run_zero(&with_eo)?, None, 0)
        }
        ProbeMode::Shots { shots, seed } => {
            swap_test(&with_dut, &with_eo, shots, case_seed(seed, index))
        }
    }
}

/// Estimates the phase discrepancy between two phase-modulation circuits,
/// overall and per qubit, with `n + 1` swap tests (plus any pair probes).
pub fn localize_phase_error(
    dut: &Circuit,
    eo: &Circuit,
    options: &LocalizeOptions,
) -> Result<PhaseLocalizationReport, TestkitError> {
    check_same_width(dut, eo)?;
    let dut = strip_measurements(dut)?.without_break_barriers();
    let eo = strip_measurements(eo)?.without_break_barriers();
    if options.check_category {
        for (which, c) in [("dut", &dut), ("expected", &eo)] {
            let cat = categorize(c, DEFAULT_MAX_CATEGORIZE_QUBITS)
                .map_err(|e| TestkitError::InvalidArgument(e.to_string()))?;
            if cat.verdict != Verdict::PM {
                return Err(TestkitError::NotPhaseModulation {
                    which,
                    verdict: cat.verdict.to_string(),
                });
            }
        }
    }
    let n = dut.num_qubits();
    let total = probe(&total_probe(n)?, &dut, &eo, options.mode, 0)?;
    let per_qubit = (0..n)
        .map(|j| {
            let result = probe(&qubit_probe(n, j)?, &dut, &eo, options.mode, j + 1)?;
            Ok(QubitProbe {
                qubit: j,
                delta_theta: result.delta_theta,
                result,
            })
        })
        .collect::<Result<Vec<_>, TestkitError>>()?;
    let pairs = options
        .pair_probes
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let result = probe(&pair_probe(n, a, b)?, &dut, &eo, options.mode, n + 1 + i)?;
            Ok(PairProbe {
                a,
                b,
                delta_theta: result.delta_theta,
                result,
            })
        })
        .collect::<Result<Vec<_>, TestkitError>>()?;
    Ok(PhaseLocalizationReport {
        total_delta: total.delta_theta,
        total,
        per_qubit,
        pairs,
        shots_per_probe: match options.mode {
            ProbeMode::Exact => None,
            ProbeMode::Shots { shots, .. } => Some(shots),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pm_reference() -> Circuit {
        let mut qc = Circuit::new(3);
        qc.s(0).unwrap().cz(1, 2).unwrap().t(2).unwrap().cp(PI / 5.0, 0, 1).unwrap();
        qc
    }

    #[test]
    fn isolates_extra_t() {
        let eo = pm_reference();
        let mut dut = eo.clone();
        dut.t(1).unwrap();
        let r = localize_phase_error(&dut, &eo, &LocalizeOptions::exact()).unwrap();
        assert!((r.per_qubit[1].delta_theta - PI / 4.0).abs() < 1e-9);
        assert!(r.per_qubit[0].delta_theta.abs() < 1e-9);
        assert!(r.per_qubit[2].delta_theta.abs() < 1e-9);
        assert!((r.total_delta - PI / 4.0).abs() < 1e-9);
        assert_eq!(r.suspects(1e-6), vec![1]);

        let r = localize_phase_error(&dut, &eo, &LocalizeOptions::shots(8192, 0)).unwrap();
        assert!((r.per_qubit[1].delta_theta - PI / 4.0).abs() < 0.06);
        assert!(r.per_qubit[0].delta_theta < 0.06);
        assert_eq!(r.shots_per_probe, Some(8192));
    }

    #[test]
    fn no_error_reads_zero() {
        let eo = pm_reference();
        let r = localize_phase_error(&eo, &eo, &LocalizeOptions::exact()).unwrap();
        assert!(r.total_delta.abs() < 1e-9);
        let r = localize_phase_error(&eo, &eo, &LocalizeOptions::shots(2048, 5)).unwrap();
        for p in &r.per_qubit {
            assert_eq!(p.result.ones, 0);
        }
    }

    #[test]
    fn total_phase() {
        let eo = pm_reference();
        let mut dut = eo.clone();
        dut.p(PI / 3.0, 0).unwrap();
        let r = localize_phase_error(&dut, &eo, &LocalizeOptions::exact()).unwrap();
        assert!((r.total_delta - PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn pair_probes_see_controlled_phase() {
        let eo = pm_reference();
        let mut dut = eo.clone();
        dut.cp(PI / 2.0, 1, 2).unwrap();
        let options = LocalizeOptions {
            pair_probes: vec![(0b110, 0b111), (0b010, 0b110), (0b000, 0b110)],
            ..LocalizeOptions::exact()
        };
        let r = localize_phase_error(&dut, &eo, &options).unwrap();
        // single-qubit probes cannot see a phase that needs two ones
        assert!(r.per_qubit.iter().all(|p| p.delta_theta < 1e-9));
        assert!(r.pairs[0].delta_theta < 1e-9);
        assert!((r.pairs[1].delta_theta - PI / 2.0).abs() < 1e-9);
        assert!((r.pairs[2].delta_theta - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn category_gate() {
        let mut h = Circuit::new(2);
        h.h(0).unwrap();
        assert!(matches!(
            localize_phase_error(&h, &h, &LocalizeOptions::exact()),
            Err(TestkitError::NotPhaseModulation { .. })
        ));
        let options = LocalizeOptions {
            check_category: false,
            ..LocalizeOptions::exact()
        };
        assert!(localize_phase_error(&h, &h, &options).is_ok());
    }

    #[test]
    fn pair_probe_state() {
        let state = run_zero(&pair_probe(3, 0b101, 0b011).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amplitudes()[5].re - h).abs() < 1e-12);
        assert!((state.amplitudes()[3].re - h).abs() < 1e-12);
        assert!(pair_probe(3, 1, 1).is_err());
    }
}
