use num_complex::Complex64;

use crate::ir::{Circuit, GateOp};
use crate::sim::{SimError, StateVector};

/// Result of removing idle wires.
#[derive(Debug, Clone, PartialEq)]
pub struct WireReduction {
    /// Original flat indices of the surviving qubits, ascending; reduced
    /// qubit `i` is original qubit `kept_qubits[i]`.
    pub kept_qubits: Vec<usize>,
    pub removed_qubits: Vec<usize>,
    pub reduced: Circuit,
    /// Original width.
    pub num_qubits: usize,
}

impl WireReduction {
    /// Places a reduced-circuit state back into the original register with
    /// `|0⟩` on every removed wire.
    pub fn embed_state(&self, reduced: &StateVector) -> Result<StateVector, SimError> {
        if reduced.num_qubits() != self.kept_qubits.len() {
            return Err(SimError::DimensionMismatch {
                expected: 1 << self.kept_qubits.len(),
                found: reduced.dim(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.num_qubits];
        for (r, a) in reduced.amplitudes().iter().enumerate() {
            let full = self
                .kept_qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &q)| acc | ((r >> i) & 1) << q);
            amps[full] = *a;
        }
        StateVector::from_amplitudes(amps)
    }
}

/// Drops every qubit that no gate or measurement touches (barriers do not
/// count) and renumbers the rest in order. Registers shrink accordingly and
/// vanish when emptied; classical registers are kept. A circuit with no
/// active qubit keeps qubit 0, since circuits need at least one wire.
pub fn hslice(circuit: &Circuit) -> WireReduction {
    let n = circuit.num_qubits();
    let active = circuit.active_qubits();
    let mut kept: Vec<usize> = (0..n).filter(|&q| active[q]).collect();
    if kept.is_empty() {
        log::debug!("no active qubits; keeping qubit 0");
        kept.push(0);
    }
    let removed: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    if removed.is_empty() {
        return WireReduction {
            kept_qubits: kept,
            removed_qubits: removed,
            reduced: circuit.clone(),
            num_qubits: n,
        };
    }

    let mut new_index = vec![None; n];
    for (i, &q) in kept.iter().enumerate() {
        new_index[q] = Some(i);
    }
    let qregs: Vec<(String, usize)> = circuit
        .qregs()
        .iter()
        .map(|r| {
            let size = (r.offset..r.offset + r.size)
                .filter(|&q| new_index[q].is_some())
                .count();
            (r.name.clone(), size)
        })
        .filter(|(_, size)| *size > 0)
        .collect();
    let cregs: Vec<(String, usize)> = circuit
        .cregs()
        .iter()
        .map(|r| (r.name.clone(), r.size))
        .collect();
    let mut reduced = Circuit::from_registers(&qregs, &cregs)
        .expect("register names come from a valid circuit")
        .with_label(circuit.label().to_string());

    for op in circuit.ops() {
        let qubits: Vec<_> = op
            .flat_qubits()
            .filter_map(|q| new_index[q])
            .map(|q| reduced.qubit_ref(q).expect("remapped index in range"))
            .collect();
        if qubits.is_empty() {
            // a barrier over idle wires only
            continue;
        }
        let remapped = GateOp {
            qubits,
            ..op.clone()
        };
        reduced
            .add_gate(remapped)
            .expect("remapping preserves gate validity");
    }
    WireReduction {
        kept_qubits: kept,
        removed_qubits: removed,
        reduced,
        num_qubits: n,
    }
}
