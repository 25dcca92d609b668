//! In-place gate kernels. Each walks the amplitude array once with strides
//! derived from the target qubit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::ir::{GateKind, GateOp};

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The 2×2 matrix of a single-qubit gate kind, `None` for anything else.
pub fn single_qubit_matrix(kind: GateKind, angles: &[f64]) -> Option<Matrix2> {
    let angle = || angles.first().copied().unwrap_or(0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let m = match kind {
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Y => [[ZERO, -I], [I, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[ONE, ZERO], [ZERO, I]],
        GateKind::Sdg => [[ONE, ZERO], [ZERO, -I]],
        GateKind::T => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, FRAC_PI_4)]],
        GateKind::Tdg => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, -FRAC_PI_4)]],
        GateKind::RX => {
            let (s, c) = (angle() / 2.0).sin_cos();
            [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ]
        }
        GateKind::RY => {
            let (s, c) = (angle() / 2.0).sin_cos();
            [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ]
        }
        GateKind::RZ => [
            [Complex64::from_polar(1.0, -angle() / 2.0), ZERO],
            [ZERO, Complex64::from_polar(1.0, angle() / 2.0)],
        ],
        GateKind::P => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, angle())]],
        _ => return None,
    };
    Some(m)
}

fn apply_matrix(amps: &mut [Complex64], target: usize, m: &Matrix2) {
    let stride = 1 << target;
    for chunk in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }
}

/// Multiplies every amplitude whose index has all bits of `mask` set.
fn apply_phase(amps: &mut [Complex64], mask: usize, phase: Complex64) {
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *a *= phase;
        }
    }
}

/// Diagonal single-qubit gate `diag(d0, d1)` on `target`.
fn apply_diag(amps: &mut [Complex64], target: usize, d0: Complex64, d1: Complex64) {
    let bit = 1 << target;
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= if i & bit == 0 { d0 } else { d1 };
    }
}

/// Swaps the amplitudes of `i` and `i ^ (bit_a | bit_b)` for indices with
/// `bit_a` set, `bit_b` clear and all `controls` set. With `bit_b == 0` this
/// is a controlled X on `bit_a`.
fn apply_swap(amps: &mut [Complex64], bit_a: usize, bit_b: usize, controls: usize) {
    let flip = bit_a | bit_b;
    for i in 0..amps.len() {
        if i & bit_a == 0 && i & bit_b == 0 && i & controls == controls {
            amps.swap(i, i ^ flip);
        }
    }
}

fn apply_swap_pair(amps: &mut [Complex64], a: usize, b: usize, controls: usize) {
    let (bit_a, bit_b) = (1 << a, 1 << b);
    let flip = bit_a | bit_b;
    for i in 0..amps.len() {
        if i & bit_a != 0 && i & bit_b == 0 && i & controls == controls {
            amps.swap(i, i ^ flip);
        }
    }
}

/// Applies one unitary op. Barriers are no-ops; callers must filter out
/// measurements beforehand.
pub fn apply_op(amps: &mut [Complex64], op: &GateOp) {
    let q: Vec<usize> = op.flat_qubits().collect();
    let angle = op.angles.first().copied().unwrap_or(0.0);
    match op.kind {
        GateKind::Barrier | GateKind::BreakBarrier | GateKind::Measure => {}
        GateKind::Z => apply_phase(amps, 1 << q[0], -ONE),
        GateKind::S => apply_phase(amps, 1 << q[0], I),
        GateKind::Sdg => apply_phase(amps, 1 << q[0], -I),
        GateKind::T => apply_phase(amps, 1 << q[0], Complex64::from_polar(1.0, FRAC_PI_4)),
        GateKind::Tdg => apply_phase(amps, 1 << q[0], Complex64::from_polar(1.0, -FRAC_PI_4)),
        GateKind::P => apply_phase(amps, 1 << q[0], Complex64::from_polar(1.0, angle)),
        GateKind::RZ => apply_diag(
            amps,
            q[0],
            Complex64::from_polar(1.0, -angle / 2.0),
            Complex64::from_polar(1.0, angle / 2.0),
        ),
        GateKind::X => apply_swap(amps, 1 << q[0], 0, 0),
        GateKind::Y | GateKind::H | GateKind::RX | GateKind::RY => {
            let m = single_qubit_matrix(op.kind, &op.angles).expect("single-qubit kind");
            apply_matrix(amps, q[0], &m);
        }
        GateKind::CX => apply_swap(amps, 1 << q[1], 0, 1 << q[0]),
        GateKind::CCX => apply_swap(amps, 1 << q[2], 0, (1 << q[0]) | (1 << q[1])),
        GateKind::CZ => apply_phase(amps, (1 << q[0]) | (1 << q[1]), -ONE),
        GateKind::CP => apply_phase(
            amps,
            (1 << q[0]) | (1 << q[1]),
            Complex64::from_polar(1.0, angle),
        ),
        GateKind::SWAP => apply_swap_pair(amps, q[0], q[1], 0),
        GateKind::CSWAP => apply_swap_pair(amps, q[1], q[2], 1 << q[0]),
    }
}
