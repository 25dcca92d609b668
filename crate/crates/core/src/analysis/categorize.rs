use std::fmt;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::ir::{Circuit, GateKind};
use crate::sim::unitary_of;

/// Default unitary-resolution cap for [`categorize`].
pub const DEFAULT_MAX_CATEGORIZE_QUBITS: usize = 10;

const TOLERANCE: f64 = 1e-9;

/// Gates that only permute basis states.
pub const AP_GATES: [GateKind; 5] = [
    GateKind::X,
    GateKind::CX,
    GateKind::CCX,
    GateKind::SWAP,
    GateKind::CSWAP,
];

/// Gates with diagonal matrices.
pub const PM_GATES: [GateKind; 9] = [
    GateKind::Z,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
    GateKind::RZ,
    GateKind::P,
    GateKind::CZ,
    GateKind::CP,
];

/// Gates that create or destroy superposition.
pub const AR_GATES: [GateKind; 4] = [GateKind::H, GateKind::RX, GateKind::RY, GateKind::Y];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Amplitude permutation.
    AP,
    /// Phase modulation.
    PM,
    /// Amplitude redistribution.
    AR,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GateSet,
    Unitary,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::GateSet => "gate-set",
            Method::Unitary => "unitary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCategory {
    pub verdict: Verdict,
    pub method: Method,
    /// Set when the unitary is a permutation with non-uniform phases.
    pub monomial_flag: bool,
    pub notes: Vec<String>,
}

impl BlockCategory {
    fn new(verdict: Verdict, method: Method, note: impl Into<String>) -> Self {
        Self {
            verdict,
            method,
            monomial_flag: false,
            notes: vec![note.into()],
        }
    }
}

impl fmt::Display for BlockCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.verdict, self.method)?;
        if self.monomial_flag {
            f.write_str(" [monomial]")?;
        }
        for note in &self.notes {
            write!(f, "; {note}")?;
        }
        Ok(())
    }
}

/// Classifies a measurement-free block. The gate set decides when it is
/// purely permuting or purely diagonal; otherwise circuits of at most
/// `max_unitary_qubits` qubits are resolved from their dense unitary, and
/// larger ones fall back to AR.
pub fn categorize(
    circuit: &Circuit,
    max_unitary_qubits: usize,
) -> Result<BlockCategory, AnalysisError> {
    if circuit.has_measure() {
        return Err(AnalysisError::MeasurePresent);
    }
    let kinds: Vec<GateKind> = circuit
        .ops()
        .iter()
        .map(|op| op.kind)
        .filter(|k| k.is_unitary())
        .collect();
    if kinds.is_empty() {
        return Ok(BlockCategory::new(Verdict::AP, Method::GateSet, "no gates (identity)"));
    }
    if kinds.iter().all(|k| AP_GATES.contains(k)) {
        return Ok(BlockCategory::new(Verdict::AP, Method::GateSet, "permutation gates only"));
    }
    if kinds.iter().all(|k| PM_GATES.contains(k)) {
        return Ok(BlockCategory::new(Verdict::PM, Method::GateSet, "diagonal gates only"));
    }
    let candidate_ar = kinds.iter().any(|k| AR_GATES.contains(k));
    let gate_note = if candidate_ar {
        "superposition gates present"
    } else {
        "mixed gate set"
    };

    let n = circuit.num_qubits();
    if n > max_unitary_qubits {
        let note = if candidate_ar {
            format!("{gate_note}; {n} qubits exceeds unitary cap {max_unitary_qubits}")
        } else {
            "mixed gate set, unverified".to_string()
        };
        return Ok(BlockCategory::new(Verdict::AR, Method::GateSet, note));
    }

    let u = unitary_of(circuit, max_unitary_qubits)?;
    if u.is_diagonal(TOLERANCE) {
        return Ok(BlockCategory::new(
            Verdict::PM,
            Method::Unitary,
            format!("{gate_note}; unitary is diagonal"),
        ));
    }
    match u.monomial(TOLERANCE) {
        Some(m) if m.has_common_phase(TOLERANCE) => Ok(BlockCategory::new(
            Verdict::AP,
            Method::Unitary,
            format!("{gate_note}; unitary is a permutation up to global phase"),
        )),
        Some(_) => Ok(BlockCategory {
            monomial_flag: true,
            ..BlockCategory::new(
                Verdict::AR,
                Method::Unitary,
                format!("{gate_note}; unitary is a permutation with relative phases"),
            )
        }),
        None => Ok(BlockCategory::new(
            Verdict::AR,
            Method::Unitary,
            format!("{gate_note}; unitary redistributes amplitude"),
        )),
    }
}
