//! Dense statevector simulation.
//!
//! Gates are applied in place with one stride pass per gate, so memory stays
//! at a single `2^n` amplitude buffer. Measurements are rejected by [`run`]
//! and only honoured by [`sample`], which keeps statevector comparisons
//! deterministic.

mod kernels;
mod qsphere;
mod sample;
mod state;
mod unitary;

pub use kernels::{single_qubit_matrix, Matrix2};
pub use qsphere::{qsphere, wrap_phase, QSphereNode, QSPHERE_CUTOFF};
pub use sample::{sample_bernoulli, sample_indices, ShotCounts};
pub use state::{
    bits_to_index, bitstring, fidelity, index_to_bits, render_amplitudes, StateVector,
};
pub use unitary::{Monomial, Unitary};

use crate::ir::{Circuit, GateKind};

/// Default qubit cap for [`unitary_of`].
pub const DEFAULT_MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("circuit contains a measurement; use sampling instead")]
    MeasureEncountered,
    #[error("qubit {0} is used after being measured")]
    MidCircuitMeasure(usize),
    #[error("shot count must be at least 1")]
    InvalidShots,
    #[error("{num_qubits} qubits exceeds the unitary limit of {max}")]
    TooManyQubits { num_qubits: usize, max: usize },
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisOutOfRange { index: usize, num_qubits: usize },
    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),
}

/// Applies every op of `circuit` to `input` and returns the final state.
pub fn run(circuit: &Circuit, input: &StateVector) -> Result<StateVector, SimError> {
    let mut state = input.clone();
    run_in_place(circuit, &mut state)?;
    Ok(state)
}

/// Runs from the basis state named by `bits` (`bits[q]` = qubit `q`).
pub fn run_bits(circuit: &Circuit, bits: &[u8]) -> Result<StateVector, SimError> {
    if bits.len() != circuit.num_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: circuit.num_qubits(),
            found: bits.len(),
        });
    }
    run(circuit, &StateVector::from_bits(bits)?)
}

/// Runs from `|0…0⟩`.
pub fn run_zero(circuit: &Circuit) -> Result<StateVector, SimError> {
    let mut state = StateVector::zero(circuit.num_qubits());
    run_in_place(circuit, &mut state)?;
    Ok(state)
}

pub fn run_in_place(circuit: &Circuit, state: &mut StateVector) -> Result<(), SimError> {
    if state.num_qubits() != circuit.num_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: 1 << circuit.num_qubits(),
            found: state.dim(),
        });
    }
    if circuit.has_measure() {
        return Err(SimError::MeasureEncountered);
    }
    let amps = state.amplitudes_mut();
    for op in circuit.ops() {
        kernels::apply_op(amps, op);
    }
    Ok(())
}

/// Samples `shots` measurement outcomes. Measurements must be terminal; they
/// select which qubits land in which classical bits. Without measurements
/// every qubit is read, qubit 0 rightmost.
pub fn sample(circuit: &Circuit, shots: u64, seed: u64) -> Result<ShotCounts, SimError> {
    if shots < 1 {
        return Err(SimError::InvalidShots);
    }
    let mut measured: Vec<Option<usize>> = vec![None; circuit.num_clbits()];
    let mut done = vec![false; circuit.num_qubits()];
    let mut state = StateVector::zero(circuit.num_qubits());
    for op in circuit.ops() {
        match op.kind {
            GateKind::Measure => {
                let q = op.qubits[0].flat;
                done[q] = true;
                measured[op.clbits[0].flat] = Some(q);
            }
            kind if kind.is_barrier() => {}
            _ => {
                if let Some(q) = op.flat_qubits().find(|&q| done[q]) {
                    return Err(SimError::MidCircuitMeasure(q));
                }
                kernels::apply_op(state.amplitudes_mut(), op);
            }
        }
    }
    let map: Vec<Option<usize>> = if measured.iter().any(Option::is_some) {
        measured
    } else {
        (0..circuit.num_qubits()).map(Some).collect()
    };
    let hist = sample_indices(&state, shots, seed)?;
    Ok(sample::project_counts(&hist, &map, shots, seed))
}

/// Dense unitary of a measurement-free circuit with at most `max_qubits`
/// qubits, assembled column by column from basis-state runs.
pub fn unitary_of(circuit: &Circuit, max_qubits: usize) -> Result<Unitary, SimError> {
    let n = circuit.num_qubits();
    if n > max_qubits {
        return Err(SimError::TooManyQubits {
            num_qubits: n,
            max: max_qubits,
        });
    }
    if circuit.has_measure() {
        return Err(SimError::MeasureEncountered);
    }
    let columns = (0..1usize << n)
        .map(|k| run(circuit, &StateVector::basis(n, k)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Unitary::from_columns(n, columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_pair() {
        let mut qc = Circuit::new(2);
        qc.h(0).unwrap().cx(0, 1).unwrap();
        let out = run_zero(&qc).unwrap();
        let a = out.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((a[3].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(a[1].norm() < 1e-12 && a[2].norm() < 1e-12);
    }

    #[test]
    fn x_flips_lsb() {
        let mut qc = Circuit::new(2);
        qc.x(0).unwrap();
        assert_eq!(run_zero(&qc).unwrap().as_basis_state(1e-12), Some(1));
    }

    #[test]
    fn run_errors() {
        let mut qc = Circuit::with_clbits(1, 1);
        qc.measure(0, 0).unwrap();
        assert_eq!(run_zero(&qc), Err(SimError::MeasureEncountered));
        assert!(matches!(
            run(&Circuit::new(2), &StateVector::zero(3)),
            Err(SimError::DimensionMismatch { .. })
        ));
        assert_eq!(sample(&Circuit::new(1), 0, 0), Err(SimError::InvalidShots));
        assert!(matches!(
            unitary_of(&Circuit::new(13), DEFAULT_MAX_UNITARY_QUBITS),
            Err(SimError::TooManyQubits { .. })
        ));
    }

    #[test]
    fn deterministic_sampling() {
        let counts = sample(&Circuit::new(3), 100, 7).unwrap();
        assert_eq!(counts.get("000"), 100);
        let mut ghz = Circuit::new(3);
        ghz.h(0).unwrap().cx(0, 1).unwrap().cx(1, 2).unwrap();
        assert_eq!(sample(&ghz, 500, 11).unwrap(), sample(&ghz, 500, 11).unwrap());
        assert_ne!(sample(&ghz, 500, 11).unwrap(), sample(&ghz, 500, 12).unwrap());
    }

    #[test]
    fn measured_bits_follow_clbits() {
        let mut qc = Circuit::with_clbits(3, 1);
        qc.x(2).unwrap().measure(2, 0).unwrap();
        let counts = sample(&qc, 10, 0).unwrap();
        assert_eq!(counts.get("1"), 10);

        let mut bad = Circuit::with_clbits(1, 1);
        bad.measure(0, 0).unwrap().x(0).unwrap();
        assert_eq!(sample(&bad, 1, 0), Err(SimError::MidCircuitMeasure(0)));
    }

    fn assert_real_matrix(u: &Unitary, expected: &[[i32; 4]; 4]) {
        for (r, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert!((u.get(r, c).re - v as f64).abs() < 1e-12, "({r},{c})");
                assert!(u.get(r, c).im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn x_on_lsb_is_kron_identity_x() {
        let mut qc = Circuit::new(2);
        qc.x(0).unwrap();
        let u = unitary_of(&qc, 12).unwrap();
        assert_real_matrix(
            &u,
            &[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        );
    }

    #[test]
    fn zero_controlled_not_matches_permutation_example() {
        // swaps |00> and |01> only
        let mut qc = Circuit::new(2);
        qc.x(1).unwrap().cx(1, 0).unwrap().x(1).unwrap();
        let u = unitary_of(&qc, 12).unwrap();
        let expected = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert_real_matrix(&u, &expected);
        assert!(unitary_of(&Circuit::new(3), 12)
            .unwrap()
            .max_abs_diff(&Unitary::identity(3))
            < 1e-15);
    }
}
