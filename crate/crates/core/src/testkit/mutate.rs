use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TestkitError;
use crate::ir::{Circuit, GateKind, GateOp, SourceSpan};
use crate::sim::unitary_of;

/// Span origin given to every op created or altered by a mutation.
pub const INJECTED_ORIGIN: &str = "injected";

/// A single deliberate bug. Op indices refer to the circuit being mutated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    /// Insert a gate before `position` (at the end when `None`).
    ExtraGate {
        gate: GateKind,
        qubits: Vec<usize>,
        #[serde(default)]
        angles: Vec<f64>,
        #[serde(default)]
        position: Option<usize>,
    },
    MissingGate { index: usize },
    /// Re-target op `index` onto `qubits`.
    WrongQubit { index: usize, qubits: Vec<usize> },
    /// Swap ops `index` and `index + 1`.
    WrongOrder { index: usize },
    /// Add `delta` to the angle of op `index`.
    PhaseShift { index: usize, delta: f64 },
    /// Drop the leading layer of Hadamards, i.e. every H that precedes all
    /// other gates on its qubit.
    SkipInitialization,
}

fn injected_span() -> SourceSpan {
    SourceSpan::new(INJECTED_ORIGIN, 0, 0)
}

fn op_at(circuit: &Circuit, index: usize) -> Result<&GateOp, TestkitError> {
    circuit.ops().get(index).ok_or_else(|| {
        TestkitError::InvalidMutation(format!(
            "op index {index} out of range ({} ops)",
            circuit.len()
        ))
    })
}

/// Applies `mutation` and returns the altered circuit, labelled `injected`.
pub fn inject_bug(circuit: &Circuit, mutation: &Mutation) -> Result<Circuit, TestkitError> {
    let mut ops: Vec<GateOp> = circuit.ops().to_vec();
    match mutation {
        Mutation::ExtraGate {
            gate,
            qubits,
            angles,
            position,
        } => {
            let position = position.unwrap_or(ops.len());
            if position > ops.len() {
                return Err(TestkitError::InvalidMutation(format!(
                    "insert position {position} beyond {} ops",
                    ops.len()
                )));
            }
            let qubits = qubits
                .iter()
                .map(|&q| circuit.qubit_ref(q))
                .collect::<Result<Vec<_>, _>>()?;
            ops.insert(
                position,
                GateOp {
                    kind: *gate,
                    angles: angles.clone(),
                    qubits,
                    clbits: Vec::new(),
                    span: injected_span(),
                },
            );
        }
        Mutation::MissingGate { index } => {
            op_at(circuit, *index)?;
            ops.remove(*index);
        }
        Mutation::WrongQubit { index, qubits } => {
            let op = op_at(circuit, *index)?;
            if op.flat_qubits().eq(qubits.iter().copied()) {
                return Err(TestkitError::InvalidMutation(
                    "replacement qubits equal the original".into(),
                ));
            }
            ops[*index].qubits = qubits
                .iter()
                .map(|&q| circuit.qubit_ref(q))
                .collect::<Result<Vec<_>, _>>()?;
            ops[*index].span = injected_span();
        }
        Mutation::WrongOrder { index } => {
            let a = op_at(circuit, *index)?;
            let b = op_at(circuit, index + 1)?;
            if a.same_action(b) {
                return Err(TestkitError::InvalidMutation(format!(
                    "ops {index} and {} are identical; swapping them changes nothing",
                    index + 1
                )));
            }
            ops.swap(*index, index + 1);
            ops[*index].span = injected_span();
            ops[index + 1].span = injected_span();
        }
        Mutation::PhaseShift { index, delta } => {
            let op = op_at(circuit, *index)?;
            if op.angles.is_empty() {
                return Err(TestkitError::InvalidMutation(format!(
                    "op {index} ({}) has no angle",
                    op.kind
                )));
            }
            if *delta == 0.0 {
                return Err(TestkitError::InvalidMutation("zero phase shift".into()));
            }
            ops[*index].angles[0] += delta;
            ops[*index].span = injected_span();
        }
        Mutation::SkipInitialization => {
            let leading = leading_hadamards(circuit);
            if leading.is_empty() {
                return Err(TestkitError::InvalidMutation(
                    "circuit has no leading Hadamard layer".into(),
                ));
            }
            ops = ops
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !leading.contains(i))
                .map(|(_, op)| op)
                .collect();
        }
    }
    Ok(circuit
        .with_ops(ops)
        .map_err(|e| TestkitError::InvalidMutation(e.to_string()))?
        .with_label(INJECTED_ORIGIN))
}

/// Indices of H ops that are the first non-barrier op on their qubit.
fn leading_hadamards(circuit: &Circuit) -> Vec<usize> {
    let mut touched = vec![false; circuit.num_qubits()];
    let mut found = Vec::new();
    for (i, op) in circuit.ops().iter().enumerate() {
        if op.kind.is_barrier() {
            continue;
        }
        if op.kind == GateKind::H && !touched[op.qubits[0].flat] {
            found.push(i);
        }
        for q in op.flat_qubits() {
            touched[q] = true;
        }
    }
    found
}

/// Picks an applicable mutation at random.
pub fn random_mutation(circuit: &Circuit, seed: u64) -> Result<Mutation, TestkitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = circuit.num_qubits();
    let gates: Vec<usize> = circuit
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, op)| op.kind.is_unitary())
        .map(|(i, _)| i)
        .collect();
    let mut candidates: Vec<Mutation> = Vec::new();
    let single = [GateKind::X, GateKind::Z, GateKind::H, GateKind::T];
    let gate = *single.choose(&mut rng).expect("non-empty");
    candidates.push(Mutation::ExtraGate {
        gate,
        qubits: vec![rng.gen_range(0..n)],
        angles: Vec::new(),
        position: Some(rng.gen_range(0..=circuit.len())),
    });
    if let Some(&index) = gates.choose(&mut rng) {
        candidates.push(Mutation::MissingGate { index });
        let op = &circuit.ops()[index];
        let arity = op.qubits.len();
        if n > arity {
            let mut qubits: Vec<usize> = (0..n).collect();
            loop {
                qubits.shuffle(&mut rng);
                if !op.flat_qubits().eq(qubits[..arity].iter().copied()) {
                    break;
                }
            }
            candidates.push(Mutation::WrongQubit {
                index,
                qubits: qubits[..arity].to_vec(),
            });
        }
    }
    let orderable: Vec<usize> = (0..circuit.len().saturating_sub(1))
        .filter(|&i| !circuit.ops()[i].same_action(&circuit.ops()[i + 1]))
        .collect();
    if let Some(&index) = orderable.choose(&mut rng) {
        candidates.push(Mutation::WrongOrder { index });
    }
    let angled: Vec<usize> = gates
        .iter()
        .copied()
        .filter(|&i| !circuit.ops()[i].angles.is_empty())
        .collect();
    if let Some(&index) = angled.choose(&mut rng) {
        let delta = std::f64::consts::PI / f64::from(1u32 << rng.gen_range(1..5));
        candidates.push(Mutation::PhaseShift { index, delta });
    }
    if !leading_hadamards(circuit).is_empty() {
        candidates.push(Mutation::SkipInitialization);
    }
    Ok(candidates.choose(&mut rng).cloned().expect("extra gate always applies"))
}

/// True when the mutated circuit has the same unitary as the original within
/// `1e-10`, i.e. the mutation cannot be observed.
pub fn is_silent_mutation(
    original: &Circuit,
    mutated: &Circuit,
    max_qubits: usize,
) -> Result<bool, TestkitError> {
    let a = unitary_of(&super::strip_measurements(original)?, max_qubits)?;
    let b = unitary_of(&super::strip_measurements(mutated)?, max_qubits)?;
    Ok(a.max_abs_diff(&b) < 1e-10)
}
