//! Unit testing and debugging toolkit for quantum circuits.
//!
//! Circuits are parsed from a small OpenQASM 2.0 dialect ([`qasm`]) into a
//! provenance-carrying IR ([`ir`]), cut at break-barriers and classified as
//! amplitude-permutation, phase-modulation or amplitude-redistribution blocks
//! ([`analysis`]), and checked with deterministic, fidelity, swap-test and
//! tomography-style probes ([`testkit`]). Everything runs on the dense
//! statevector engine in [`sim`]; [`library`] bundles reference subroutines
//! and test-vector generators.

pub mod analysis;
pub mod ir;
pub mod library;
pub mod qasm;
pub mod sim;
pub mod testkit;

pub use ir::{Circuit, GateKind, GateOp, GateStats, IrError, QubitRef, SourceSpan};
pub use sim::{StateVector, Unitary};
