use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::{ClbitRef, GateKind, GateOp, QubitRef, SourceSpan};
use super::IrError;

/// Label given to gates appended through the builder helpers unless the
/// circuit carries its own label.
pub const DEFAULT_LABEL: &str = "builder";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub size: usize,
    pub offset: usize,
}

/// An ordered list of gate operations over declared quantum and classical
/// registers. Flat qubit indices follow declaration order, and qubit 0 is the
/// least-significant bit of a basis-state index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    qregs: Vec<Register>,
    cregs: Vec<Register>,
    ops: Vec<GateOp>,
    label: String,
}

fn layout(regs: &[(String, usize)]) -> Result<Vec<Register>, IrError> {
    let mut out: Vec<Register> = Vec::with_capacity(regs.len());
    let mut offset = 0;
    for (name, size) in regs {
        if *size == 0 {
            return Err(IrError::EmptyRegister(name.clone()));
        }
        if out.iter().any(|r| &r.name == name) {
            return Err(IrError::DuplicateRegister(name.clone()));
        }
        out.push(Register {
            name: name.clone(),
            size: *size,
            offset,
        });
        offset += size;
    }
    Ok(out)
}

fn locate(regs: &[Register], flat: usize) -> Option<(&str, usize)> {
    regs.iter()
        .find(|r| flat >= r.offset && flat < r.offset + r.size)
        .map(|r| (r.name.as_str(), flat - r.offset))
}

impl Circuit {
    /// A circuit with a single quantum register `q` of `num_qubits` qubits.
    ///
    /// Panics if `num_qubits` is zero.
    pub fn new(num_qubits: usize) -> Self {
        Self::with_clbits(num_qubits, 0)
    }

    /// Registers `q` and, when `num_clbits > 0`, `c`.
    pub fn with_clbits(num_qubits: usize, num_clbits: usize) -> Self {
        assert!(num_qubits >= 1, "a circuit needs at least one qubit");
        let cregs = if num_clbits > 0 {
            vec![("c".to_string(), num_clbits)]
        } else {
            Vec::new()
        };
        Self::from_registers(&[("q".to_string(), num_qubits)], &cregs)
            .expect("default registers are valid")
    }

    pub fn from_registers(
        qregs: &[(String, usize)],
        cregs: &[(String, usize)],
    ) -> Result<Self, IrError> {
        let qregs = layout(qregs)?;
        if qregs.is_empty() {
            return Err(IrError::NoQubits);
        }
        let cregs = layout(cregs)?;
        if let Some(r) = qregs.iter().find(|q| cregs.iter().any(|c| c.name == q.name)) {
            return Err(IrError::DuplicateRegister(r.name.clone()));
        }
        Ok(Self {
            qregs,
            cregs,
            ops: Vec::new(),
            label: DEFAULT_LABEL.to_string(),
        })
    }

    /// Sets the provenance label recorded by the builder helpers.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|r| r.size).sum()
    }

    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|r| r.size).sum()
    }

    pub fn qregs(&self) -> &[Register] {
        &self.qregs
    }

    pub fn cregs(&self) -> &[Register] {
        &self.cregs
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn qubit_ref(&self, flat: usize) -> Result<QubitRef, IrError> {
        let (register, index) = locate(&self.qregs, flat).ok_or(IrError::QubitOutOfRange {
            qubit: flat,
            num_qubits: self.num_qubits(),
        })?;
        Ok(QubitRef {
            register: register.to_string(),
            index,
            flat,
        })
    }

    pub fn clbit_ref(&self, flat: usize) -> Result<ClbitRef, IrError> {
        let (register, index) = locate(&self.cregs, flat).ok_or(IrError::ClbitOutOfRange {
            clbit: flat,
            num_clbits: self.num_clbits(),
        })?;
        Ok(ClbitRef {
            register: register.to_string(),
            index,
            flat,
        })
    }

    /// Resolves `name[index]` (e.g. `q[1]`) or a bare flat index (`1`).
    pub fn resolve_qubit(&self, text: &str) -> Option<usize> {
        let text = text.trim();
        if let Ok(flat) = text.parse::<usize>() {
            return (flat < self.num_qubits()).then_some(flat);
        }
        let (name, rest) = text.split_once('[')?;
        let index: usize = rest.strip_suffix(']')?.trim().parse().ok()?;
        let reg = self.qregs.iter().find(|r| r.name == name.trim())?;
        (index < reg.size).then_some(reg.offset + index)
    }

    /// Appends `op` after checking arity, bounds, and distinctness.
    pub fn add_gate(&mut self, op: GateOp) -> Result<(), IrError> {
        self.validate(&op)?;
        self.ops.push(op);
        Ok(())
    }

    fn validate(&self, op: &GateOp) -> Result<(), IrError> {
        let n = self.num_qubits();
        match op.kind.qubit_arity() {
            Some(expected) if op.qubits.len() != expected => {
                return Err(IrError::ArityMismatch {
                    kind: op.kind,
                    expected,
                    found: op.qubits.len(),
                })
            }
            None if op.qubits.is_empty() => {
                return Err(IrError::ArityMismatch {
                    kind: op.kind,
                    expected: 1,
                    found: 0,
                })
            }
            _ => {}
        }
        if op.angles.len() != op.kind.angle_arity() {
            return Err(IrError::AngleArity {
                kind: op.kind,
                expected: op.kind.angle_arity(),
                found: op.angles.len(),
            });
        }
        for (i, q) in op.qubits.iter().enumerate() {
            if q.flat >= n {
                return Err(IrError::QubitOutOfRange {
                    qubit: q.flat,
                    num_qubits: n,
                });
            }
            if op.qubits[..i].iter().any(|p| p.flat == q.flat) {
                return Err(IrError::DuplicateQubit {
                    kind: op.kind,
                    qubit: q.flat,
                });
            }
        }
        if op.kind == GateKind::BreakBarrier
            && (op.qubits.len() != n || op.flat_qubits().enumerate().any(|(i, q)| i != q))
        {
            return Err(IrError::BreakBarrierSpan);
        }
        let clbits_expected = usize::from(op.kind == GateKind::Measure);
        if op.clbits.len() != clbits_expected {
            return Err(IrError::ClbitArity {
                kind: op.kind,
                expected: clbits_expected,
                found: op.clbits.len(),
            });
        }
        for c in &op.clbits {
            if c.flat >= self.num_clbits() {
                return Err(IrError::ClbitOutOfRange {
                    clbit: c.flat,
                    num_clbits: self.num_clbits(),
                });
            }
        }
        Ok(())
    }

    /// Builds an operation from flat indices and appends it with `span`.
    pub fn push(
        &mut self,
        kind: GateKind,
        qubits: &[usize],
        angles: &[f64],
        span: SourceSpan,
    ) -> Result<&mut Self, IrError> {
        let qubits = qubits
            .iter()
            .map(|&q| self.qubit_ref(q))
            .collect::<Result<Vec<_>, _>>()?;
        let op = GateOp {
            kind,
            angles: angles.to_vec(),
            qubits,
            clbits: Vec::new(),
            span,
        };
        self.add_gate(op)?;
        Ok(self)
    }

    /// Appends a gate, recording the caller's source location.
    #[track_caller]
    pub fn apply(
        &mut self,
        kind: GateKind,
        qubits: &[usize],
        angles: &[f64],
    ) -> Result<&mut Self, IrError> {
        let span = SourceSpan::here(&self.label);
        self.push(kind, qubits, angles, span)
    }

    #[track_caller]
    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<&mut Self, IrError> {
        let span = SourceSpan::here(&self.label);
        let op = GateOp {
            kind: GateKind::Measure,
            angles: Vec::new(),
            qubits: vec![self.qubit_ref(qubit)?],
            clbits: vec![self.clbit_ref(clbit)?],
            span,
        };
        self.add_gate(op)?;
        Ok(self)
    }

    #[track_caller]
    pub fn barrier(&mut self, qubits: &[usize]) -> Result<&mut Self, IrError> {
        self.apply(GateKind::Barrier, qubits, &[])
    }

    /// Appends a slicing cut across every qubit.
    #[track_caller]
    pub fn break_barrier(&mut self) -> Result<&mut Self, IrError> {
        let all: Vec<usize> = (0..self.num_qubits()).collect();
        self.apply(GateKind::BreakBarrier, &all, &[])
    }

    #[track_caller]
    pub fn x(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::X, &[q], &[])
    }

    #[track_caller]
    pub fn y(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::Y, &[q], &[])
    }

    #[track_caller]
    pub fn z(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::Z, &[q], &[])
    }

    #[track_caller]
    pub fn h(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::H, &[q], &[])
    }

    #[track_caller]
    pub fn s(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::S, &[q], &[])
    }

    #[track_caller]
    pub fn t(&mut self, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::T, &[q], &[])
    }

    #[track_caller]
    pub fn ry(&mut self, theta: f64, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::RY, &[q], &[theta])
    }

    #[track_caller]
    pub fn rz(&mut self, theta: f64, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::RZ, &[q], &[theta])
    }

    #[track_caller]
    pub fn p(&mut self, theta: f64, q: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::P, &[q], &[theta])
    }

    #[track_caller]
    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::CX, &[control, target], &[])
    }

    #[track_caller]
    pub fn cz(&mut self, a: usize, b: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::CZ, &[a, b], &[])
    }

    #[track_caller]
    pub fn cp(&mut self, theta: f64, control: usize, target: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::CP, &[control, target], &[theta])
    }

    #[track_caller]
    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::SWAP, &[a, b], &[])
    }

    #[track_caller]
    pub fn ccx(&mut self, c0: usize, c1: usize, target: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::CCX, &[c0, c1, target], &[])
    }

    #[track_caller]
    pub fn cswap(&mut self, control: usize, a: usize, b: usize) -> Result<&mut Self, IrError> {
        self.apply(GateKind::CSWAP, &[control, a, b], &[])
    }

    /// Same registers and label, different op list. Every op is revalidated
    /// and its qubit/clbit names are rebound to this circuit's registers.
    pub fn with_ops(&self, ops: impl IntoIterator<Item = GateOp>) -> Result<Circuit, IrError> {
        let mut out = self.empty_like();
        for op in ops {
            let op = out.rebind(op)?;
            out.add_gate(op)?;
        }
        Ok(out)
    }

    /// A copy of the register layout with no operations.
    pub fn empty_like(&self) -> Circuit {
        Circuit {
            qregs: self.qregs.clone(),
            cregs: self.cregs.clone(),
            ops: Vec::new(),
            label: self.label.clone(),
        }
    }

    fn rebind(&self, mut op: GateOp) -> Result<GateOp, IrError> {
        for q in &mut op.qubits {
            *q = self.qubit_ref(q.flat)?;
        }
        for c in &mut op.clbits {
            *c = self.clbit_ref(c.flat)?;
        }
        Ok(op)
    }

    /// Every op of `kind` whose qubits include all of `qubits`, in circuit
    /// order. An empty `qubits` slice matches every op of the kind.
    pub fn gate_loc(&self, kind: GateKind, qubits: &[usize]) -> Vec<(usize, &SourceSpan)> {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, op)| op.kind == kind && qubits.iter().all(|&q| op.acts_on(q)))
            .map(|(i, op)| (i, &op.span))
            .collect()
    }

    pub fn count_ops(&self) -> GateStats {
        let mut histogram = BTreeMap::new();
        for op in self.ops.iter().filter(|op| op.kind != GateKind::BreakBarrier) {
            *histogram.entry(op.kind).or_insert(0) += 1;
        }
        GateStats { histogram }
    }

    pub fn has_measure(&self) -> bool {
        self.ops.iter().any(|op| op.kind == GateKind::Measure)
    }

    /// Ops of `self` followed by ops of `second`. The result keeps this
    /// circuit's quantum registers and the larger classical layout.
    pub fn compose(&self, second: &Circuit) -> Result<Circuit, IrError> {
        if self.num_qubits() != second.num_qubits() {
            return Err(IrError::QubitCountMismatch {
                left: self.num_qubits(),
                right: second.num_qubits(),
            });
        }
        let mut out = self.empty_like();
        if second.num_clbits() > self.num_clbits() {
            out.cregs = second.cregs.clone();
        }
        for op in self.ops.iter().chain(&second.ops) {
            let op = out.rebind(op.clone())?;
            out.add_gate(op)?;
        }
        Ok(out)
    }

    /// The adjoint circuit: ops reversed, each replaced by its inverse.
    pub fn inverse(&self) -> Result<Circuit, IrError> {
        if self.has_measure() {
            return Err(IrError::MeasurePresent);
        }
        let mut out = self.empty_like();
        out.ops = self
            .ops
            .iter()
            .rev()
            .map(|op| GateOp {
                kind: op.kind.adjoint(),
                angles: op.angles.iter().map(|a| -a).collect(),
                ..op.clone()
            })
            .collect();
        Ok(out)
    }

    pub fn without_break_barriers(&self) -> Circuit {
        let mut out = self.empty_like();
        out.ops = self
            .ops
            .iter()
            .filter(|op| op.kind != GateKind::BreakBarrier)
            .cloned()
            .collect();
        out
    }

    /// Qubits touched by at least one gate or measurement. Barriers do not
    /// count as use.
    pub fn active_qubits(&self) -> Vec<bool> {
        let mut used = vec![false; self.num_qubits()];
        for op in self.ops.iter().filter(|op| !op.kind.is_barrier()) {
            for q in op.flat_qubits() {
                used[q] = true;
            }
        }
        used
    }
}

/// Gate-kind histogram. Measurements and ordinary barriers have their own
/// entries; break-barriers are never counted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateStats {
    pub histogram: BTreeMap<GateKind, usize>,
}

impl GateStats {
    pub fn get(&self, kind: GateKind) -> usize {
        self.histogram.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.histogram.values().sum()
    }

    /// Count of unitary gates only.
    pub fn gate_total(&self) -> usize {
        self.histogram
            .iter()
            .filter(|(k, _)| k.is_unitary())
            .map(|(_, v)| v)
            .sum()
    }

    /// `(kind, expected, found)` for every kind whose count differs.
    pub fn diff(&self, expected: &GateStats) -> Vec<(GateKind, usize, usize)> {
        let mut kinds: Vec<GateKind> = self
            .histogram
            .keys()
            .chain(expected.histogram.keys())
            .copied()
            .collect();
        kinds.sort();
        kinds.dedup();
        kinds
            .into_iter()
            .filter_map(|k| {
                let (e, f) = (expected.get(k), self.get(k));
                (e != f).then_some((k, e, f))
            })
            .collect()
    }
}

impl fmt::Display for GateStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromIterator<(GateKind, usize)> for GateStats {
    fn from_iter<I: IntoIterator<Item = (GateKind, usize)>>(iter: I) -> Self {
        GateStats {
            histogram: iter.into_iter().filter(|(_, v)| *v > 0).collect(),
        }
    }
}
