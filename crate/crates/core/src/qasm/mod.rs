//! OpenQASM 2.0 subset reader and writer.
//!
//! Supported: the `OPENQASM 2.0;` header, `include "qelib1.inc";`, `qreg`,
//! `creg`, every unitary [`GateKind`] by its lower-case name, `measure`,
//! `barrier`, and register broadcasting. A line consisting solely of
//! `// cirquo:breakbarrier` becomes a break-barrier over all qubits, so files
//! stay loadable by other OpenQASM tools. Angle parameters accept numeric
//! literals, `pi`, parentheses, `+ - * /` and integer powers `^`.

mod lexer;
mod parser;

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::ir::{Circuit, GateKind};

pub use lexer::BREAKBARRIER_DIRECTIVE;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message} (at `{token}`)")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub token: String,
}

impl ParseError {
    pub(crate) fn new(message: impl Into<String>, line: usize, column: usize, token: &str) -> Self {
        Self {
            message: message.into(),
            line,
            column,
            token: token.to_string(),
        }
    }
}

/// Parses with spans labelled `<input>`.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    parser::parse_named(text, "<input>")
}

/// Parses with spans labelled by `origin`, usually the file name.
pub fn parse_named(text: &str, origin: &str) -> Result<Circuit, ParseError> {
    parser::parse_named(text, origin)
}

/// Renders an angle, preferring `k*pi/d` forms for small rational multiples
/// of π.
pub fn format_angle(angle: f64) -> String {
    if angle == 0.0 {
        return "0".to_string();
    }
    let ratio = angle / PI;
    let denominators = (1..=16u64).chain((5..=20).map(|k| 1u64 << k));
    for d in denominators {
        let num = ratio * d as f64;
        let k = num.round();
        if k != 0.0 && k.abs() <= 1e6 && (num - k).abs() < 1e-12 * d as f64 {
            let k = k as i64;
            let sign = if k < 0 { "-" } else { "" };
            let numerator = match k.unsigned_abs() {
                1 => "pi".to_string(),
                m => format!("{m}*pi"),
            };
            return match d {
                1 => format!("{sign}{numerator}"),
                d => format!("{sign}{numerator}/{d}"),
            };
        }
    }
    format!("{angle}")
}

/// Writes a circuit back out in the same dialect. Break-barriers become the
/// directive comment; spans are not preserved.
pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for r in circuit.qregs() {
        let _ = writeln!(out, "qreg {}[{}];", r.name, r.size);
    }
    for r in circuit.cregs() {
        let _ = writeln!(out, "creg {}[{}];", r.name, r.size);
    }
    for op in circuit.ops() {
        match op.kind {
            GateKind::BreakBarrier => {
                out.push_str(BREAKBARRIER_DIRECTIVE);
                out.push('\n');
            }
            GateKind::Measure => {
                let _ = writeln!(out, "measure {} -> {};", op.qubits[0], op.clbits[0]);
            }
            kind => {
                out.push_str(kind.qasm_name());
                if !op.angles.is_empty() {
                    let angles: Vec<String> = op.angles.iter().map(|a| format_angle(*a)).collect();
                    let _ = write!(out, "({})", angles.join(","));
                }
                let qubits: Vec<String> = op.qubits.iter().map(|q| q.to_string()).collect();
                let _ = writeln!(out, " {};", qubits.join(","));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

    #[test]
    fn two_ops_with_spans() {
        let text = format!("{HEADER}qreg q[2];\nh q[0];\ncx q[0],q[1];\n");
        let c = parse(&text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.ops()[0].kind, GateKind::H);
        assert_eq!(c.ops()[0].span.line, 4);
        assert_eq!(c.ops()[1].span.line, 5);
        assert_eq!(c.ops()[1].span.column, 1);
    }

    #[test]
    fn directive_becomes_break_barrier() {
        let text = format!("{HEADER}qreg q[3];\nh q[0];\n// cirquo:breakbarrier\nx q[1];\n");
        let c = parse(&text).unwrap();
        let bbs = c.gate_loc(GateKind::BreakBarrier, &[]);
        assert_eq!(bbs.len(), 1);
        assert_eq!(bbs[0].0, 1);
        assert_eq!(bbs[0].1.line, 5);
        assert_eq!(c.ops()[1].qubits.len(), 3);
    }

    #[test]
    fn unknown_gate() {
        let err = parse(&format!("{HEADER}qreg q[1];\nfoo q[0];\n")).unwrap_err();
        assert_eq!(err.token, "foo");
        assert_eq!((err.line, err.column), (4, 1));
        assert!(err.message.contains("foo"));
    }

    #[test]
    fn error_positions() {
        let cases = [
            ("OPENQASM 3.0;\nqreg q[1];", 1, 10),
            ("qreg q[1];", 1, 1),
            ("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n", 3, 1),
            ("OPENQASM 2.0;\nqreg q[2];\nh r[0];\n", 3, 3),
            ("OPENQASM 2.0;\nqreg q[2];\ncx q[0], q[0];\n", 3, 1),
            ("OPENQASM 2.0;\nqreg q[2];\nh q[5];\n", 3, 3),
            ("OPENQASM 2.0;\nqreg q[2];\nrz q[0];\n", 3, 1),
            ("OPENQASM 2.0;\nqreg q[2];\nh q[0]\nx q[1];", 4, 1),
            ("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> d[0];", 4, 17),
            ("OPENQASM 2.0;\ninclude \"other.inc\";", 2, 9),
            ("OPENQASM 2.0;\nqreg q[1];\nh q[0];\nqreg r[1];", 4, 1),
        ];
        for (text, line, column) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!((err.line, err.column), (line, column), "{text}: {err}");
        }
    }

    #[test]
    fn angle_expressions() {
        let text = format!(
            "{HEADER}qreg q[1];\nrz(pi/2^3) q[0];\np(-3*pi/4 + 0.5) q[0];\nrx(2*(pi-1)) q[0];\n"
        );
        let c = parse(&text).unwrap();
        let a: Vec<f64> = c.ops().iter().map(|o| o.angles[0]).collect();
        assert!((a[0] - PI / 8.0).abs() < 1e-15);
        assert!((a[1] - (-3.0 * PI / 4.0 + 0.5)).abs() < 1e-15);
        assert!((a[2] - 2.0 * (PI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn broadcast_and_measure() {
        let text = format!("{HEADER}qreg q[3];\ncreg c[3];\nh q;\ncx q[0],q;\nmeasure q -> c;\n");
        let err = parse(&text).unwrap_err();
        // cx q[0],q[0] is produced by the broadcast
        assert!(err.message.contains("more than once"));
        let text = format!("{HEADER}qreg q[3];\ncreg c[3];\nh q;\nbarrier q;\nmeasure q -> c;\n");
        let c = parse(&text).unwrap();
        let stats = c.count_ops();
        assert_eq!(stats.get(GateKind::H), 3);
        assert_eq!(stats.get(GateKind::Measure), 3);
        assert_eq!(stats.get(GateKind::Barrier), 1);
    }

    #[test]
    fn empty_circuit_serialization() {
        assert_eq!(serialize(&Circuit::new(1)), format!("{HEADER}qreg q[1];\n"));
    }

    #[test]
    fn angle_formatting() {
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(-PI / 2.0), "-pi/2");
        assert_eq!(format_angle(3.0 * PI / 8.0), "3*pi/8");
        assert_eq!(format_angle(PI / 3.0), "pi/3");
        assert_eq!(format_angle(2.0 * PI / 1024.0), "pi/512");
        assert_eq!(format_angle(0.5), "0.5");
    }

    #[test]
    fn round_trip_keeps_ops() {
        let mut c = Circuit::with_clbits(3, 1);
        c.h(0)
            .unwrap()
            .cp(PI / 4.0, 1, 0)
            .unwrap()
            .break_barrier()
            .unwrap()
            .rz(0.123456789, 2)
            .unwrap()
            .barrier(&[0, 2])
            .unwrap()
            .measure(2, 0)
            .unwrap();
        let back = parse(&serialize(&c)).unwrap();
        assert_eq!(back.len(), c.len());
        for (a, b) in back.ops().iter().zip(c.ops()) {
            assert_eq!(a.kind, b.kind);
            assert!(a.flat_qubits().eq(b.flat_qubits()));
            for (x, y) in a.angles.iter().zip(&b.angles) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
