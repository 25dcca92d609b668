use std::fmt;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::ir::{Circuit, GateKind};
use crate::sim::{fidelity, run_zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceMode {
    /// Each slice holds one segment between cuts.
    Standalone,
    /// Slice `i` holds every segment up to cut `i`.
    Accumulated,
}

impl fmt::Display for SliceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SliceMode::Standalone => "standalone",
            SliceMode::Accumulated => "accumulated",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceSet {
    pub mode: SliceMode,
    pub slices: Vec<Circuit>,
    /// Op indices of the break-barriers in the source circuit.
    pub cut_positions: Vec<usize>,
}

/// `<stem>.slice<k>.qasm` with `k` counted from 1.
pub fn slice_file_name(stem: &str, k: usize) -> String {
    format!("{stem}.slice{k}.qasm")
}

/// Cuts `circuit` at every break-barrier. `n` cuts always give `n + 1`
/// slices, some possibly empty. Slices keep the full register layout and the
/// original spans; break-barriers themselves are dropped.
pub fn vslice(circuit: &Circuit, mode: SliceMode) -> SliceSet {
    let cut_positions: Vec<usize> = circuit
        .gate_loc(GateKind::BreakBarrier, &[])
        .into_iter()
        .map(|(i, _)| i)
        .collect();
    let mut segments = vec![Vec::new()];
    for op in circuit.ops() {
        if op.kind == GateKind::BreakBarrier {
            segments.push(Vec::new());
        } else {
            segments.last_mut().expect("non-empty").push(op.clone());
        }
    }
    let build = |ops: Vec<_>| circuit.with_ops(ops).expect("ops come from a valid circuit");
    let slices = match mode {
        SliceMode::Standalone => segments.into_iter().map(build).collect(),
        SliceMode::Accumulated => {
            let mut prefix = Vec::new();
            segments
                .into_iter()
                .map(|seg| {
                    prefix.extend(seg);
                    build(prefix.clone())
                })
                .collect()
        }
    };
    SliceSet {
        mode,
        slices,
        cut_positions,
    }
}

/// Checks that running the standalone slices back to back from `|0…0⟩`
/// reproduces the original circuit's state within `tolerance` in fidelity.
pub fn verify_recomposition(
    set: &SliceSet,
    original: &Circuit,
    tolerance: f64,
) -> Result<bool, AnalysisError> {
    if set.mode != SliceMode::Standalone {
        return Err(AnalysisError::ModeMismatch(set.mode));
    }
    let mut composed = original.empty_like();
    for slice in &set.slices {
        composed = composed.compose(slice)?;
    }
    let a = run_zero(&composed)?;
    let b = run_zero(&original.without_break_barriers())?;
    Ok(fidelity(&a, &b)? >= 1.0 - tolerance)
}
