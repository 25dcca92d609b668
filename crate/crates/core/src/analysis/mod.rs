//! Circuit analyses: vertical slicing at break-barriers, idle-wire removal,
//! recomposition checks and AP/PM/AR block categorization.

mod categorize;
mod hslice;
mod vslice;

pub use categorize::{
    categorize, BlockCategory, Method, Verdict, AP_GATES, AR_GATES, DEFAULT_MAX_CATEGORIZE_QUBITS,
    PM_GATES,
};
pub use hslice::{hslice, WireReduction};
pub use vslice::{slice_file_name, verify_recomposition, vslice, SliceMode, SliceSet};

use crate::ir::IrError;
use crate::sim::SimError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("recomposition needs standalone slices, got {0}")]
    ModeMismatch(SliceMode),
    #[error("cannot categorize a circuit containing measurements")]
    MeasurePresent,
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
