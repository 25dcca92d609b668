//! Reference circuits for common subroutines, periodic input states, and the
//! six-basis test-vector generator.

mod generate;
mod periodic;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ir::{Circuit, IrError};

pub use generate::{generate_test_cases, six_basis_inputs, GeneratedTestSet, SIX_BASIS_NAMES};
pub use periodic::{make_periodic_state, PeriodicStateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubroutineSpec {
    /// 4 qubits: inputs A, B, carry-in on q0..q2, ancilla q3.
    FullAdder,
    Diffusion(usize),
    WState(usize),
    Ghz(usize),
    Dicke { n: usize, k: usize },
    Qft(usize),
    /// `count` counting qubits estimating the eigenphase `phase` (in turns)
    /// of a single-qubit phase gate on one extra target qubit.
    Qpe { count: usize, phase: f64 },
    Cluster1D(usize),
}

impl fmt::Display for SubroutineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubroutineSpec::FullAdder => write!(f, "full adder"),
            SubroutineSpec::Diffusion(n) => write!(f, "diffusion({n})"),
            SubroutineSpec::WState(n) => write!(f, "W({n})"),
            SubroutineSpec::Ghz(n) => write!(f, "GHZ({n})"),
            SubroutineSpec::Dicke { n, k } => write!(f, "Dicke({n},{k})"),
            SubroutineSpec::Qft(n) => write!(f, "QFT({n})"),
            SubroutineSpec::Qpe { count, phase } => write!(f, "QPE({count}, {phase})"),
            SubroutineSpec::Cluster1D(n) => write!(f, "cluster1d({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LibraryError {
    #[error("invalid parameters for {spec}: {reason}")]
    InvalidParameters { spec: String, reason: String },
    #[error("period shift {shift} must be below the period {period}")]
    ShiftOutOfRange { shift: usize, period: usize },
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
}

impl std::str::FromStr for SubroutineSpec {
    type Err = LibraryError;

    /// `adder`, `qft:4`, `ghz:3`, `w:3`, `dicke:3,2`, `diffusion:3`,
    /// `cluster:4`, `qpe:3,0.25`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| LibraryError::InvalidParameters {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let (name, args) = text.split_once(':').unwrap_or((text, ""));
        let args: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(str::trim).collect()
        };
        let int = |i: usize| -> Result<usize, LibraryError> {
            args.get(i)
                .ok_or_else(|| bad("missing size parameter"))?
                .parse()
                .map_err(|_| bad("size parameters must be non-negative integers"))
        };
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(bad(&format!("expected {k} parameter(s)")))
            }
        };
        let spec = match name.trim().to_ascii_lowercase().as_str() {
            "adder" | "full_adder" | "fulladder" => {
                arity(0)?;
                SubroutineSpec::FullAdder
            }
            "qft" => {
                arity(1)?;
                SubroutineSpec::Qft(int(0)?)
            }
            "ghz" => {
                arity(1)?;
                SubroutineSpec::Ghz(int(0)?)
            }
            "w" | "wstate" => {
                arity(1)?;
                SubroutineSpec::WState(int(0)?)
            }
            "dicke" => {
                arity(2)?;
                SubroutineSpec::Dicke {
                    n: int(0)?,
                    k: int(1)?,
                }
            }
            "diffusion" => {
                arity(1)?;
                SubroutineSpec::Diffusion(int(0)?)
            }
            "cluster" | "cluster1d" => {
                arity(1)?;
                SubroutineSpec::Cluster1D(int(0)?)
            }
            "qpe" => {
                arity(2)?;
                SubroutineSpec::Qpe {
                    count: int(0)?,
                    phase: args[1].parse().map_err(|_| bad("phase must be a number"))?,
                }
            }
            _ => return Err(bad("unknown subroutine")),
        };
        Ok(spec)
    }
}

fn invalid(spec: &SubroutineSpec, reason: &str) -> LibraryError {
    LibraryError::InvalidParameters {
        spec: spec.to_string(),
        reason: reason.to_string(),
    }
}

/// Builds the bundled reference circuit for `spec`. All results are
/// measurement-free.
pub fn build_subroutine(spec: &SubroutineSpec) -> Result<Circuit, LibraryError> {
    let label = spec.to_string();
    match *spec {
        SubroutineSpec::FullAdder => {
            let mut qc = Circuit::new(4).with_label(label);
            full_adder(&mut qc, [0, 1, 2], 3)?;
            Ok(qc)
        }
        SubroutineSpec::Ghz(n) => {
            if n < 1 {
                return Err(invalid(spec, "n must be at least 1"));
            }
            let mut qc = Circuit::new(n).with_label(label);
            qc.h(0)?;
            for q in 1..n {
                qc.cx(q - 1, q)?;
            }
            Ok(qc)
        }
        SubroutineSpec::Qft(n) => {
            if n < 1 {
                return Err(invalid(spec, "n must be at least 1"));
            }
            let mut qc = Circuit::new(n).with_label(label);
            let qubits: Vec<usize> = (0..n).collect();
            qft(&mut qc, &qubits)?;
            Ok(qc)
        }
        SubroutineSpec::WState(n) => {
            if n < 2 {
                return Err(invalid(spec, "W state needs at least 2 qubits"));
            }
            let mut qc = Circuit::new(n).with_label(label);
            dicke(&mut qc, n, 1)?;
            Ok(qc)
        }
        SubroutineSpec::Dicke { n, k } => {
            if k < 1 || k > n {
                return Err(invalid(spec, "requires 1 <= k <= n"));
            }
            let mut qc = Circuit::new(n).with_label(label);
            dicke(&mut qc, n, k)?;
            Ok(qc)
        }
        SubroutineSpec::Diffusion(n) => {
            if n < 1 {
                return Err(invalid(spec, "n must be at least 1"));
            }
            let ancillas = if n > 3 { n - 2 } else { 0 };
            let mut qc = Circuit::new(n + ancillas).with_label(label);
            diffusion(&mut qc, n)?;
            Ok(qc)
        }
        SubroutineSpec::Qpe { count, phase } => {
            if count < 1 {
                return Err(invalid(spec, "needs at least one counting qubit"));
            }
            if !phase.is_finite() {
                return Err(invalid(spec, "phase must be finite"));
            }
            let target = count;
            let mut qc = Circuit::new(count + 1).with_label(label);
            qc.x(target)?;
            for j in 0..count {
                qc.h(j)?;
            }
            for j in 0..count {
                let angle = 2.0 * PI * phase * (1u64 << j) as f64;
                qc.cp(angle.rem_euclid(2.0 * PI), j, target)?;
            }
            let counting: Vec<usize> = (0..count).collect();
            let mut iqft = Circuit::new(count + 1).with_label(spec.to_string());
            qft(&mut iqft, &counting)?;
            Ok(qc.compose(&iqft.inverse()?)?)
        }
        SubroutineSpec::Cluster1D(n) => {
            if n < 1 {
                return Err(invalid(spec, "n must be at least 1"));
            }
            let mut qc = Circuit::new(n).with_label(label);
            for q in 0..n {
                qc.h(q)?;
            }
            for q in 0..n.saturating_sub(1) {
                qc.cz(q, q + 1)?;
            }
            Ok(qc)
        }
    }
}

/// `|a, b, c_in, 0⟩ → |a, b, a⊕b⊕c_in, carry⟩`.
pub fn full_adder(qc: &mut Circuit, inputs: [usize; 3], zero: usize) -> Result<(), IrError> {
    qc.ccx(inputs[0], inputs[1], zero)?
        .cx(inputs[0], inputs[1])?
        .ccx(inputs[1], inputs[2], zero)?
        .cx(inputs[1], inputs[2])?
        .cx(inputs[0], inputs[1])?;
    Ok(())
}

/// Appends the QFT on `qubits` (`qubits[0]` least significant):
/// `|j⟩ → 2^{-n/2} Σ_k e^{2πi jk/2^n} |k⟩`. Uses `n` H, `n(n−1)/2` CP and
/// `⌊n/2⌋` SWAP gates.
pub fn qft(qc: &mut Circuit, qubits: &[usize]) -> Result<(), IrError> {
    let n = qubits.len();
    for j in (0..n).rev() {
        qc.h(qubits[j])?;
        for k in (0..j).rev() {
            qc.cp(PI / (1u64 << (j - k)) as f64, qubits[k], qubits[j])?;
        }
    }
    for j in 0..n / 2 {
        qc.swap(qubits[j], qubits[n - j - 1])?;
    }
    Ok(())
}

/// Controlled RY from CX and half-angle rotations.
fn cry(qc: &mut Circuit, theta: f64, control: usize, target: usize) -> Result<(), IrError> {
    qc.ry(theta / 2.0, target)?
        .cx(control, target)?
        .ry(-theta / 2.0, target)?
        .cx(control, target)?;
    Ok(())
}

/// Doubly controlled RY from CCX and half-angle rotations.
fn ccry(qc: &mut Circuit, theta: f64, c0: usize, c1: usize, target: usize) -> Result<(), IrError> {
    qc.ry(theta / 2.0, target)?
        .ccx(c0, c1, target)?
        .ry(-theta / 2.0, target)?
        .ccx(c0, c1, target)?;
    Ok(())
}

/// Split-and-cyclic-shift block acting on qubits `l−k−1 ..= l−1`.
fn scs(qc: &mut Circuit, l: usize, k: usize) -> Result<(), IrError> {
    let top = l - 1;
    let theta = 2.0 * (1.0 / l as f64).sqrt().acos();
    qc.cx(top - 1, top)?;
    cry(qc, theta, top, top - 1)?;
    qc.cx(top - 1, top)?;
    for i in 2..=k {
        let theta = 2.0 * (i as f64 / l as f64).sqrt().acos();
        let t = l - i - 1;
        qc.cx(t, top)?;
        ccry(qc, theta, top, t + 1, t)?;
        qc.cx(t, top)?;
    }
    Ok(())
}

/// Deterministic Dicke-state preparation from `|0…0⟩`.
fn dicke(qc: &mut Circuit, n: usize, k: usize) -> Result<(), IrError> {
    for q in n - k..n {
        qc.x(q)?;
    }
    for l in (k + 1..=n).rev() {
        scs(qc, l, k)?;
    }
    for l in (2..=k).rev() {
        scs(qc, l, l - 1)?;
    }
    Ok(())
}

/// Phase flip of `|1…1⟩` on qubits `0..n`, using ancillas `n..` when `n > 3`.
fn multi_controlled_z(qc: &mut Circuit, n: usize) -> Result<(), IrError> {
    match n {
        1 => {
            qc.z(0)?;
        }
        2 => {
            qc.cz(0, 1)?;
        }
        3 => {
            qc.h(2)?.ccx(0, 1, 2)?.h(2)?;
        }
        _ => {
            // AND-ladder of qubits 0..n-1 into ancillas n..2n-3, CZ onto the
            // last qubit, then uncompute.
            let anc = |i: usize| n + i;
            let mut ladder = vec![(0, 1, anc(0))];
            for i in 2..n - 1 {
                ladder.push((i, anc(i - 2), anc(i - 1)));
            }
            for &(a, b, t) in &ladder {
                qc.ccx(a, b, t)?;
            }
            qc.cz(anc(n - 3), n - 1)?;
            for &(a, b, t) in ladder.iter().rev() {
                qc.ccx(a, b, t)?;
            }
        }
    }
    Ok(())
}

/// Grover diffusion `H X (MCZ) X H` on qubits `0..n`.
pub fn diffusion(qc: &mut Circuit, n: usize) -> Result<(), IrError> {
    for q in 0..n {
        qc.h(q)?;
    }
    for q in 0..n {
        qc.x(q)?;
    }
    multi_controlled_z(qc, n)?;
    for q in 0..n {
        qc.x(q)?;
    }
    for q in 0..n {
        qc.h(q)?;
    }
    Ok(())
}
