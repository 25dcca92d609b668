//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`GateOp`]s, each carrying the
//! [`SourceSpan`] it was added from. Break-barriers are ordinary operations of
//! kind [`GateKind::BreakBarrier`] so that slicing never confuses them with
//! plain barriers.

mod circuit;
mod gate;

pub use circuit::{Circuit, GateStats, Register, DEFAULT_LABEL};
pub use gate::{ClbitRef, GateKind, GateOp, QubitRef, SourceSpan};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IrError {
    #[error("{kind} takes {expected} qubit(s), got {found}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} takes {expected} angle(s), got {found}")]
    AngleArity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} takes {expected} classical bit(s), got {found}")]
    ClbitArity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("clbit {clbit} out of range for {num_clbits} classical bit(s)")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
    #[error("{kind} uses qubit {qubit} more than once")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("break-barrier must span every qubit in order")]
    BreakBarrierSpan,
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("circuit contains a measurement")]
    MeasurePresent,
    #[error("circuit has no qubits")]
    NoQubits,
    #[error("register `{0}` is empty")]
    EmptyRegister(String),
    #[error("register `{0}` declared twice")]
    DuplicateRegister(String),
}
