use std::fmt;

use serde::{Deserialize, Serialize};

/// Every operation kind the IR knows about.
///
/// The declaration order doubles as the display order of gate histograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    P,
    CX,
    CZ,
    CP,
    SWAP,
    CCX,
    CSWAP,
    Measure,
    Barrier,
    BreakBarrier,
}

impl GateKind {
    pub const ALL: [GateKind; 21] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::P,
        GateKind::CX,
        GateKind::CZ,
        GateKind::CP,
        GateKind::SWAP,
        GateKind::CCX,
        GateKind::CSWAP,
        GateKind::Measure,
        GateKind::Barrier,
        GateKind::BreakBarrier,
    ];

    /// Fixed qubit arity, or `None` for kinds spanning a variable number of
    /// qubits (barriers).
    pub fn qubit_arity(self) -> Option<usize> {
        use GateKind::*;
        match self {
            X | Y | Z | H | S | Sdg | T | Tdg | RX | RY | RZ | P | Measure => Some(1),
            CX | CZ | CP | SWAP => Some(2),
            CCX | CSWAP => Some(3),
            Barrier | BreakBarrier => None,
        }
    }

    pub fn angle_arity(self) -> usize {
        use GateKind::*;
        match self {
            RX | RY | RZ | P | CP => 1,
            _ => 0,
        }
    }

    /// True for unitary gates, false for measurement and the two barrier kinds.
    pub fn is_unitary(self) -> bool {
        !matches!(
            self,
            GateKind::Measure | GateKind::Barrier | GateKind::BreakBarrier
        )
    }

    pub fn is_barrier(self) -> bool {
        matches!(self, GateKind::Barrier | GateKind::BreakBarrier)
    }

    /// Lower-case mnemonic used by the textual circuit format.
    pub fn qasm_name(self) -> &'static str {
        use GateKind::*;
        match self {
            X => "x",
            Y => "y",
            Z => "z",
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            RX => "rx",
            RY => "ry",
            RZ => "rz",
            P => "p",
            CX => "cx",
            CZ => "cz",
            CP => "cp",
            SWAP => "swap",
            CCX => "ccx",
            CSWAP => "cswap",
            Measure => "measure",
            Barrier => "barrier",
            BreakBarrier => "breakbarrier",
        }
    }

    /// Looks a gate up by mnemonic, case-insensitively. Accepts a few common
    /// aliases (`cnot`, `toffoli`, `fredkin`, `u1`, `cu1`).
    pub fn from_name(name: &str) -> Option<GateKind> {
        let lower = name.to_ascii_lowercase();
        let kind = match lower.as_str() {
            "cnot" => GateKind::CX,
            "toffoli" => GateKind::CCX,
            "fredkin" => GateKind::CSWAP,
            "u1" | "phase" => GateKind::P,
            "cu1" | "cphase" => GateKind::CP,
            other => *GateKind::ALL.iter().find(|k| k.qasm_name() == other)?,
        };
        Some(kind)
    }

    /// The kind of the adjoint gate. Angle-carrying kinds keep their kind and
    /// negate the angle instead.
    pub fn adjoint(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            other => other,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GateKind::*;
        let s = match self {
            X => "X",
            Y => "Y",
            Z => "Z",
            H => "H",
            S => "S",
            Sdg => "Sdg",
            T => "T",
            Tdg => "Tdg",
            RX => "RX",
            RY => "RY",
            RZ => "RZ",
            P => "P",
            CX => "CX",
            CZ => "CZ",
            CP => "CP",
            SWAP => "SWAP",
            CCX => "CCX",
            CSWAP => "CSWAP",
            Measure => "Measure",
            Barrier => "Barrier",
            BreakBarrier => "BreakBarrier",
        };
        f.write_str(s)
    }
}

/// Where an operation came from: a file position for parsed circuits, a
/// builder label plus the Rust call site for programmatically built ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub origin: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(origin: impl Into<String>, line: usize, column: usize) -> Self {
        Self {
            origin: origin.into(),
            line,
            column,
        }
    }

    /// Span for a gate appended through the builder API, recording the
    /// caller's location.
    #[track_caller]
    pub fn here(label: &str) -> Self {
        let loc = std::panic::Location::caller();
        Self::new(label, loc.line() as usize, loc.column() as usize)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.origin, self.line, self.column)
    }
}

/// A qubit as seen by a gate: its register-local name plus the global index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitRef {
    pub register: String,
    pub index: usize,
    pub flat: usize,
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

/// Classical bit target of a measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClbitRef {
    pub register: String,
    pub index: usize,
    pub flat: usize,
}

impl fmt::Display for ClbitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub angles: Vec<f64>,
    pub qubits: Vec<QubitRef>,
    pub clbits: Vec<ClbitRef>,
    pub span: SourceSpan,
}

impl GateOp {
    pub fn flat_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.qubits.iter().map(|q| q.flat)
    }

    /// Same kind, angles and qubits; provenance is ignored.
    pub fn same_action(&self, other: &GateOp) -> bool {
        self.kind == other.kind
            && self.angles == other.angles
            && self.qubits.len() == other.qubits.len()
            && self.flat_qubits().eq(other.flat_qubits())
            && self.clbits.iter().map(|c| c.flat).eq(other.clbits.iter().map(|c| c.flat))
    }

    pub fn acts_on(&self, qubit: usize) -> bool {
        self.qubits.iter().any(|q| q.flat == qubit)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.qasm_name())?;
        if !self.angles.is_empty() {
            let angles: Vec<String> = self.angles.iter().map(|a| format!("{a}")).collect();
            write!(f, "({})", angles.join(","))?;
        }
        let qubits: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qubits.join(","))?;
        if let Some(c) = self.clbits.first() {
            write!(f, " -> {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arities() {
        assert_eq!(GateKind::CCX.qubit_arity(), Some(3));
        assert_eq!(GateKind::CCX.angle_arity(), 0);
        assert_eq!(GateKind::CP.qubit_arity(), Some(2));
        assert_eq!(GateKind::CP.angle_arity(), 1);
        assert_eq!(GateKind::Barrier.qubit_arity(), None);
    }

    #[test]
    fn names_round_trip() {
        for kind in GateKind::ALL {
            assert_eq!(GateKind::from_name(kind.qasm_name()), Some(kind));
        }
        assert_eq!(GateKind::from_name("CNOT"), Some(GateKind::CX));
        assert_eq!(GateKind::from_name("foo"), None);
    }

    #[test]
    fn adjoint_pairs() {
        assert_eq!(GateKind::T.adjoint(), GateKind::Tdg);
        assert_eq!(GateKind::Sdg.adjoint(), GateKind::S);
        assert_eq!(GateKind::H.adjoint(), GateKind::H);
    }
}
